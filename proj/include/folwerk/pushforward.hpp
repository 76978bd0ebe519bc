#pragma once

#include "folwerk/foliation.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace folwerk {

/// Coordinates with respect to a module basis, entries in some ring K.
using Coords = std::vector<Poly>;

/// A -> B with B free over A on b_1 = 1, b_2, ..., b_n and
/// b_i b_j = sum_k c_ijk b_k, c_ijk in A.
///
/// B is presented over A with the non-unit basis elements as generators and
/// the multiplication table as relations.
class FiniteFreeMap {
public:
    FiniteFreeMap() = default;
    /// `table` maps (i, j), i <= j, both >= 1 (0-based, 0 is the unit) to the
    /// coordinates of b_i b_j; missing products are an error.
    static FiniteFreeMap make(std::string name, AlgebraPtr base, std::vector<std::string> basis,
                              std::map<std::pair<std::size_t, std::size_t>, Coords> table);
    /// Products written as "t*t = 0", "e*e = e", right-hand sides linear in the
    /// basis with coefficients in A.
    static FiniteFreeMap parse(std::string name, AlgebraPtr base, std::vector<std::string> basis,
                               const std::vector<std::string>& products);

    const std::string& name() const { return name_; }
    const AlgebraPtr& base() const { return base_; }
    const AlgebraPtr& algebra() const { return algebra_; }
    std::size_t rank() const { return basis_.size(); }
    const std::vector<std::string>& basis() const { return basis_; }
    /// Ring index in algebra() of basis element i >= 1.
    std::size_t basis_generator(std::size_t i) const { return algebra_->base_size() + i - 1; }

    /// Coordinates of b_i b_j, entries in the base ring.
    const Coords& product(std::size_t i, std::size_t j) const { return table_[i][j]; }
    Coords multiply(const Coords& x, const Coords& y, const Ring& k) const;
    /// Coordinates of an element of B.
    Coords coordinates(const Poly& p) const;
    /// Matrix of multiplication by p: column j holds the coordinates of p b_j.
    PolyMatrix multiplication_matrix(const Poly& p) const;

    /// Same basis and table over A' along A -> A'.
    FiniteFreeMap base_change(const AlgebraMap& g, std::string name = {}) const;

    /// Empty when the table is commutative, associative and unital.
    std::string defect() const;

private:
    std::string name_;
    AlgebraPtr base_;
    AlgebraPtr algebra_;
    std::vector<std::string> basis_;
    std::vector<std::vector<Coords>> table_;
};

/// Evaluates p (degree-0 generators only) in a finite free algebra with
/// coefficients in k: generator i goes to images[i].
Coords evaluate_in(const Ring& source, const Poly& p, const std::vector<Coords>& images,
                   const FiniteFreeMap& algebra, const Ring& k);

/// f_*Z for Z = Spec C over X = Spec B, along f : A -> B finite free.
struct WeilRestriction {
    FiniteFreeMap map;
    AlgebraPtr source;   ///< C over B
    AlgebraPtr result;   ///< f_*C over A, generators z_{g,i}
    /// Per own generator g of C, the ring indices in `result` of z_{g,0..n-1}.
    std::vector<std::vector<std::size_t>> coordinates;
    FiniteFreeMap pi;    ///< f_*C -> f_*C ⊗_A B, same basis
    AlgebraMap counit;   ///< ev : C -> f_*C ⊗_A B, g -> sum z_{g,i} b_i
};

WeilRestriction weil_restrict(const AlgebraPtr& c, const FiniteFreeMap& f);
/// X ×_S Y over X, then Weil restriction: Map_S(X, Y).
WeilRestriction mapping_scheme(const FiniteFreeMap& x, const AlgebraPtr& y);
/// B[y's] / (relations of Y) as an algebra over B.
AlgebraPtr fibre_product(const FiniteFreeMap& x, const AlgebraPtr& y);

struct PointsReport {
    std::string test_algebra;
    std::size_t test_dimension = 0;
    std::size_t lhs_equations = 0;     ///< Hom(f_*C, T)
    std::size_t rhs_equations = 0;     ///< Hom(C, T ⊗_A B)
    bool ideals_equal = false;
    std::string shape; ///< "empty", "finite", "positive-dimensional", "undetermined" (budget)
    std::optional<std::size_t> lhs_points, rhs_points; ///< with multiplicity, when finite
    std::size_t samples = 0;
    bool round_trip = true;

    bool bijection() const;
};

/// Compares the two solution sets through the coordinate identification.
/// T is a finite algebra over Q given as a finite free map Q -> T.
PointsReport check_functor_of_points(const WeilRestriction& w, const FiniteFreeMap& t, unsigned samples = 5);

/// Restriction of scalars of a complex over B to A.
PerfectComplex restrict_scalars(const PerfectComplex& e, const FiniteFreeMap& f);
/// f_+ E = (f_* E^v)^v.
PerfectComplex f_plus(const PerfectComplex& e, const FiniteFreeMap& f);

/// pi_+ ev^* L for a complex L over C.
PerfectComplex pushforward_cotangent(const PerfectComplex& l, const WeilRestriction& w);

/// Push-forward of a foliation on Z over X along f : X -> Y. eps on f_*C is
/// read off ev^*(eps_F); eps on the cotangent generators must vanish.
struct PushedFoliation {
    FoliationPtr foliation;
    WeilRestriction restriction;
};
PushedFoliation pushforward_foliation(const FoliationPtr& f, const FiniteFreeMap& map, std::string name = {});

struct TangentComparison {
    std::string point;
    std::map<int, std::size_t> lhs; ///< T_g F' from the push-forward cotangent
    std::map<int, std::size_t> rhs; ///< Gamma(X, T_{X/S} ⊕ g^* T_F)
    bool agree() const { return lhs == rhs; }
};

/// F a foliation on Y over S = Spec Q, X finite free over S, g an S-point of
/// Map_S(X, Y) given by values of the coordinates z_{y,i}. The left side
/// pulls F back to X ×_S Y, pushes it forward along X -> S and specialises
/// at g; the right side restricts T_{X/S} ⊕ g^* T_F to S.
TangentComparison tangent_at_point(const FoliationPtr& f, const FiniteFreeMap& x,
                                   const std::map<std::string, Rational>& point);

} // namespace folwerk
