#pragma once

#include "folwerk/budget.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace folwerk {

/// A composite of 1-cell generators, applicative order: cells.front() is
/// applied last. An empty list is the identity of `source` (== `target`).
struct Path {
    std::string source, target;
    std::vector<std::string> cells;

    bool operator==(const Path&) const = default;
};

/// p∘q, q first.
Path compose(const Path& p, const Path& q);
std::string render(const Path& p);

struct Arrow {
    std::string name, source, target;
};

struct Adjunction {
    std::string left, right, unit, counit;
};

enum class CellRole { Free, Unit, Counit, Inverse };

struct Cell {
    std::string name;
    Path source, target;
    CellRole role = CellRole::Free;
    std::string adjunction;            ///< left adjoint's name, for units and counits
    std::optional<std::string> inverse; ///< the formal inverse, when declared invertible
};

/// Free strict 2-category on 0-cells, 1-cell generators, adjunctions and
/// 2-cell generators.
class AdjunctionContext {
public:
    void add_object(const std::string& name);
    void add_arrow(const std::string& name, const std::string& source, const std::string& target);
    /// L ⊣ R with L : D -> C, R : C -> D, unit Id_D => R∘L, counit L∘R => Id_C.
    void add_adjunction(const std::string& left, const std::string& right, const std::string& unit,
                        const std::string& counit);
    /// An invertible cell also gets `name^-1` with both cancellation rules.
    void add_cell(const std::string& name, const Path& source, const Path& target, bool invertible = false);

    bool has_object(const std::string& name) const { return objects_.count(name) > 0; }
    const Arrow& arrow(const std::string& name) const;
    const Cell& cell(const std::string& name) const;
    bool has_cell(const std::string& name) const { return cells_.count(name) > 0; }
    bool has_arrow(const std::string& name) const { return arrows_.count(name) > 0; }
    const Adjunction& adjunction(const std::string& left) const;
    const std::map<std::string, Adjunction>& adjunctions() const { return adjunctions_; }
    const std::map<std::string, Cell>& cells() const { return cells_; }

    /// Path through the named 1-cells, checked to compose; `object` is used
    /// for the empty path.
    Path path(const std::vector<std::string>& cells, const std::string& object = {}) const;

private:
    std::map<std::string, bool> objects_;
    std::map<std::string, Arrow> arrows_;
    std::map<std::string, Adjunction> adjunctions_;
    std::map<std::string, Cell> cells_;
    void claim(const std::string& name);
};

class MateTerm;
using TermPtr = std::shared_ptr<const MateTerm>;

/// Tree of 2-cells: generators, identities of paths, vertical ∘ and
/// horizontal ⋆ composition. Typed on construction.
class MateTerm {
public:
    enum class Kind { Generator, Identity, Vertical, Horizontal };

    static TermPtr generator(const AdjunctionContext& ctx, const std::string& name);
    static TermPtr identity(const Path& p);
    /// a∘b, b first.
    static TermPtr vertical(const TermPtr& a, const TermPtr& b);
    /// a⋆b : F∘G => F'∘G' for a : F => F', b : G => G'.
    static TermPtr horizontal(const TermPtr& a, const TermPtr& b);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const Path& source() const { return source_; }
    const Path& target() const { return target_; }
    const TermPtr& left() const { return a_; }
    const TermPtr& right() const { return b_; }
    std::size_t size() const;

private:
    Kind kind_ = Kind::Identity;
    std::string name_;
    Path source_, target_;
    TermPtr a_, b_;
};

std::string render(const MateTerm& t);

/// ASCII or unicode: `∘`/`.` vertical, `⋆`/`*` horizontal, `Id_X`, names of
/// 1-cells stand for their identities, and a `∘` between two identities is
/// composition of 1-cells.
TermPtr parse_term(const AdjunctionContext& ctx, const std::string& text);

/// One whiskered generator: `cell` applied at wire position `offset`.
struct Layer {
    std::string cell;
    std::size_t offset = 0;
    bool operator==(const Layer&) const = default;
};

/// Staircase form: the layers in order of application.
struct NormalForm {
    Path source, target;
    std::vector<Layer> layers;

    bool operator==(const NormalForm&) const = default;
};

std::string render(const AdjunctionContext& ctx, const NormalForm& n);
/// The layers composed back into a term.
TermPtr to_term(const AdjunctionContext& ctx, const NormalForm& n);

struct TraceStep {
    std::string rule;
    std::string term;
};

/// Flattens, cancels triangle snakes and inverse pairs, and slides layers to
/// the left-first order. Budget overrun is an error.
NormalForm normalize(const AdjunctionContext& ctx, const TermPtr& t, std::vector<TraceStep>* trace = nullptr,
                     std::optional<Budget> budget = std::nullopt);

/// Square with L ⊣ R along the bottom and L' ⊣ R' along the top, U : C' -> C and
/// V : D' -> D down the sides.
struct Square {
    std::string bottom, top; ///< left adjoints naming the adjunctions
    Path u, v;
};

/// Checks the square's boundaries in the context.
void check_square(const AdjunctionContext& ctx, const Square& s);

/// φ : V∘R' => R∘U gives (ε⋆(U∘L'))∘(L⋆φ⋆L')∘((L∘V)⋆η').
TermPtr mate_left(const AdjunctionContext& ctx, const Square& s, const TermPtr& phi);
/// ψ : L∘V => U∘L' gives ((R∘U)⋆ε')∘(R⋆ψ⋆R')∘(η⋆(V∘R')).
TermPtr mate_right(const AdjunctionContext& ctx, const Square& s, const TermPtr& psi);

struct Comparison {
    std::string statement;
    NormalForm lhs, rhs;
    std::string lhs_text, rhs_text;
    std::vector<TraceStep> trace;
    bool passed() const { return lhs == rhs; }
};

struct BcUnitReport {
    Comparison u_side; ///< (U⋆ε')∘(ψ⋆R') = (ε⋆U)∘(L⋆φ)
    Comparison v_side; ///< (R⋆ψ)∘(η⋆V) = (φ⋆L')∘(V⋆η')
    bool passed() const { return u_side.passed() && v_side.passed(); }
};

/// ψ defaults to mate_left(φ); the trace records the rewriting of both left
/// sides starting from the substitution of ψ.
BcUnitReport check_bc_unit(const AdjunctionContext& ctx, const Square& s, const TermPtr& phi,
                           TermPtr psi = nullptr);

/// mate_right(mate_left(φ)) against φ.
Comparison check_mate_inverse(const AdjunctionContext& ctx, const Square& s, const TermPtr& phi);

struct PastedSquare {
    Square square;
    TermPtr phi; ///< (φ⋆U')∘(V⋆φ')
    TermPtr psi; ///< ψ⋆V' first, then U⋆ψ'
    Comparison compatibility; ///< mate_left(Φ) against Ψ
};

/// `bottom` below `top`: top.bottom must be bottom.top.
PastedSquare paste_squares(const AdjunctionContext& ctx, const Square& bottom, const TermPtr& phi,
                           const Square& top, const TermPtr& phi_top);

} // namespace folwerk
