#pragma once

#include "folwerk/algebra.hpp"
#include "folwerk/complex.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace folwerk {

/// Truncation window for checks on infinite presentations.
struct Window {
    unsigned weight = 3;
    unsigned poly_degree = 4;
    int degree_min = -4;
    int degree_max = 0;

    friend bool operator==(const Window&, const Window&) = default;
};

class GradedMixedPresentation;
using GmPtr = std::shared_ptr<const GradedMixedPresentation>;

/// Algebra map between graded mixed presentations, given on generators.
class GmMap {
public:
    GmMap() = default;
    GmMap(std::string name, GmPtr source, GmPtr target, std::vector<Poly> images);

    const std::string& name() const { return name_; }
    const GmPtr& source() const { return source_; }
    const GmPtr& target() const { return target_; }
    const std::vector<Poly>& images() const { return images_; }

    Poly apply(const Poly& p) const;
    /// Empty when the map preserves weight and degree, kills the relations and
    /// commutes with d and eps; otherwise a reason.
    std::string defect() const;
    bool is_identity() const;
    GmMap then(const GmMap& next) const;

private:
    std::string name_;
    GmPtr source_;
    GmPtr target_;
    std::vector<Poly> images_;
};

/// Bigraded (weight, degree) graded-commutative algebra with internal
/// differential d (weight 0, degree +1) and mixed differential eps
/// (weight +1, degree -1), both stored on generators and extended by Leibniz.
///
/// The ring starts with the generators of `model` (the weight-0 algebra, equal
/// to `owner` or to a semi-free model of it); the first `base_size` of those
/// come from the base A and must be killed by eps.
class GradedMixedPresentation {
public:
    struct Data {
        std::string name;
        AlgebraPtr owner;
        AlgebraPtr model;
        std::size_t base_size = 0;
        RingPtr ring;
        std::vector<Poly> d;
        std::vector<Poly> eps;
        bool quasi_free = false;
        std::vector<std::string> provenance;
        std::shared_ptr<const GmMap> structure; // DR(owner/base) -> this, when recorded
        /// Images in the owner ring of the model generators (empty: same names,
        /// generators missing from the owner go to 0).
        std::vector<Poly> projection;
    };

    static GmPtr make(Data data);

    const std::string& name() const { return data_.name; }
    const AlgebraPtr& owner() const { return data_.owner; }
    const AlgebraPtr& model() const { return data_.model; }
    std::size_t base_size() const { return data_.base_size; }
    const Ring& ring() const { return *data_.ring; }
    const RingPtr& ring_ptr() const { return data_.ring; }
    const std::vector<Poly>& d_images() const { return data_.d; }
    const std::vector<Poly>& eps_images() const { return data_.eps; }
    bool quasi_free() const { return data_.quasi_free; }
    const std::vector<std::string>& provenance() const { return data_.provenance; }
    const std::shared_ptr<const GmMap>& structure() const { return data_.structure; }
    const Data& data() const { return data_; }

    Poly d(const Poly& p) const;
    Poly eps(const Poly& p) const;
    /// Weight-0 model -> owner.
    AlgebraMap projection() const;
    bool strict_weight_zero() const { return data_.model == data_.owner; }
    std::size_t weight(std::size_t generator) const;

private:
    explicit GradedMixedPresentation(Data data) : data_(std::move(data)) {}
    Data data_;
};

struct IdentityCheck {
    std::string identity;
    bool passed = true;
    std::size_t evaluations = 0;
    std::string first_failure; ///< monomial (or generator/relation) where it first fails
    std::string value;         ///< the nonzero value found there
};

struct MixedVerificationReport {
    Window window;
    bool truncated = true;
    std::size_t monomials = 0;
    std::vector<IdentityCheck> checks;

    bool passed() const;
    const IdentityCheck* first_failure() const;
};

/// Standard monomials of the ring inside the window, in the deterministic
/// order used by every check: polynomial degree ascending, then the
/// generator declared first dominates.
std::vector<Exponents> window_monomials(const Ring& ring, const Window& window);

/// Evaluates d^2, eps^2, d eps + eps d and the Leibniz rules on the window.
/// Without a window the presentation must be finite-dimensional.
MixedVerificationReport verify_mixed(const GradedMixedPresentation& f,
                                     std::optional<Window> window = Window{});

/// Same generators and d, eps discarded.
GmPtr forget_gr(const GradedMixedPresentation& f);

struct QuasiFreeReport {
    bool passed = true;
    std::string reason;
    /// per weight n >= 1: (monomials of weight n, rank of Sym^n of the weight-1 part)
    std::vector<std::pair<std::size_t, std::size_t>> ranks;
};

/// Weightwise comparison of F with Sym_{F(0)} F(1), weights 1..max_weight.
QuasiFreeReport quasi_free_ranks(const GradedMixedPresentation& f, unsigned max_weight = 3);

/// The complex L whose shift L[1] is spanned by the weight-1 generators,
/// base-changed to the owner: a generator of degree k - 1 gives a basis
/// element of degree k, and d_L = -d on the linear part.
PerfectComplex weight_one_complex(const GradedMixedPresentation& f);
/// Coordinates of a weight-1 element in the degree-k basis of weight_one_complex.
std::vector<Poly> linear_column(const GradedMixedPresentation& f, const Poly& p, int k);
/// Linear part of a map on weight-1 generators, between weight_one_complex's.
ChainMap weight_one_map(const GmMap& g);

/// Canonical structure map DR -> F: weight-0 generators go to the generators
/// of the same name, the differentials dg to eps_F(g).
GmMap canonical_structure(const GmPtr& de_rham, const GmPtr& f);

/// F' over B'/A' viewed over B/A through g : DR(B/A) -> DR(B'/A').
GmPtr pushforward_gm(const GmPtr& f, const GmMap& g);

/// Derived base change of a quasi-free F over B/A along g : DR(B/A) -> DR(B'/A').
/// Generators of positive weight are re-based over B'; for every generator x
/// of B a cone generator c_x with d(c_x) = str(dx) - eps'(g(x)) glues the two
/// copies of L_{B/A}.
struct PullbackLayout {
    std::vector<std::size_t> target; ///< per generator of g's target
    std::vector<std::size_t> source; ///< per generator of f (own ones become u_x)
    std::vector<std::size_t> k, dk;  ///< per own generator x of B
};
GmPtr pullback_gm(const GmPtr& f, const GmMap& g, PullbackLayout* layout = nullptr);

} // namespace folwerk
