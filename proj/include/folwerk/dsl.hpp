#pragma once

#include "folwerk/error.hpp"
#include "folwerk/foliation.hpp"
#include "folwerk/mates.hpp"
#include "folwerk/pushforward.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace folwerk {

/// 1-based line and column (columns count bytes).
struct Location {
    std::size_t line = 0, column = 0;
    bool operator==(const Location&) const = default;
};
std::string to_string(const Location& at);

/// An error in the input file, with the position it refers to. The message
/// already starts with "line:column: ".
class InputError : public Error {
public:
    InputError(ErrorKind kind, Location at, const std::string& what);
    const Location& where() const noexcept { return at_; }
    /// The message without the location prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    Location at_;
    std::string detail_;
};

enum class DeclKind {
    Algebra,
    Map,
    Basis,
    Cotangent,
    Foliation,
    DeRham,
    Mixed,
    Pullback,
    WeilRes,
    MapSch,
    PushFol,
    PushGm,
    TangentAt,
    Mates,
};
const char* kind_name(DeclKind kind);

/// Contents of a `mates` block.
struct MatesBlock {
    struct Check {
        std::string operation; ///< bc_unit, mate_inverse, paste, equal
        std::vector<std::string> args;
        std::string text;
        Location at;
    };
    AdjunctionContext context;
    std::map<std::string, Square> squares;
    std::map<std::string, TermPtr> terms; ///< `let` bindings
    std::vector<Check> checks;

    /// A cell name, a `let` name, or a term in the context.
    TermPtr term(const std::string& text) const;
};

/// One named declaration. Only the members belonging to its kind are set.
struct Declaration {
    DeclKind kind = DeclKind::Algebra;
    std::string name;
    Location at;
    std::string text;                    ///< the statement as written, whitespace collapsed
    std::vector<std::string> references; ///< names used, in order of first use

    AlgebraPtr algebra;                  ///< algebra; owner for the others
    AlgebraMap map;
    FiniteFreeMap basis;
    std::optional<CotangentModel> cotangent;
    FoliationPtr foliation;
    DeRhamPtr de_rham;
    GmPtr gm;
    GmMap gm_map;                        ///< pushgm and pull-backs of mixed algebras
    std::optional<PulledFoliation> pulled;
    std::optional<WeilRestriction> restriction;
    std::optional<Window> window;        ///< bounds written on a derham declaration
    std::map<std::string, Rational> point; ///< tangentat
    std::shared_ptr<MatesBlock> mates;
};

struct CheckCommand {
    std::size_t index = 0; ///< 1-based, in file order
    std::string target;
    std::string aspect;    ///< empty: the default for the target's kind
    std::vector<std::string> args;
    Location at;
    std::string text;
};

struct Workspace {
    std::vector<Declaration> declarations;
    std::map<std::string, std::size_t> names;
    std::vector<CheckCommand> checks;
    std::optional<Window> window; ///< from a `window` statement

    const Declaration* find(const std::string& name) const;
    const Declaration& get(const std::string& name) const;
};

/// Aspects a `check` may name for a declaration kind; the first is the default.
std::vector<std::string> check_aspects(DeclKind kind);

/// Parses and builds every declaration in order; the first problem is thrown
/// as an InputError (or a budget error) carrying its location.
Workspace parse_workspace(std::string_view source);

/// Declarations reproducing f: the owner (with its base chain and the weight-0
/// model when different) followed by a `mixed` block. Structure maps recorded
/// on f are not serialized.
std::string to_dsl(const GradedMixedPresentation& f);

} // namespace folwerk
