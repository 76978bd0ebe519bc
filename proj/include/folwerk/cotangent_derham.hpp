#pragma once

#include "folwerk/complex.hpp"
#include "folwerk/graded_mixed.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace folwerk {

/// L_{B/A} as a perfect complex over B: free on dx_g in degree 0 for the own
/// generators of B; for own relations f_1..f_r a conormal term B^r in degree
/// -1 with e_i -> sum_j df_i/dx_j dx_j.
struct CotangentModel {
    AlgebraPtr owner;
    PerfectComplex complex;
    /// Position of dx_g in degree 0, per own generator of the owner.
    std::vector<std::size_t> differentials;
    bool lci = false;
    std::vector<std::string> notes;

    /// Column of the universal derivation d : B -> L^0 applied to p.
    std::vector<Poly> derivation(const Poly& p) const;
};

CotangentModel kaehler(const AlgebraPtr& b);
CotangentModel cotangent_lci(const AlgebraPtr& b, std::uint32_t check_bound = 4);

struct KoszulCheck {
    bool regular = true;
    std::uint32_t bound = 0;
    std::vector<HomologyReport> homology; ///< Koszul homology over the free algebra, degrees -r..0
    std::size_t quotient_monomials = 0;   ///< standard monomials of B of degree <= bound
};

/// Koszul homology of the own relations over the relation-free presentation.
KoszulCheck koszul_regularity(const AlgebraPtr& b, std::uint32_t bound = 4);

/// Semi-free model: own relations f_i replaced by degree -1 generators e_i
/// with d(e_i) = f_i. Returns b itself when there are no own relations.
AlgebraPtr koszul_model(const AlgebraPtr& b, std::uint32_t check_bound = 4);

struct DeRhamAlgebra {
    GmPtr gm;
    AlgebraPtr owner;
    AlgebraPtr model;
    CotangentModel cotangent;
    unsigned weight_bound = 3;
};
using DeRhamPtr = std::shared_ptr<const DeRhamAlgebra>;

/// Sym_B(L_{B/A}[1]) with eps(g) = dg, eps(dg) = 0 and d(dg) = -eps(d g).
/// Singular bases go through the Koszul model.
DeRhamPtr de_rham(const AlgebraPtr& b, unsigned weight_bound = 3);

/// DR(B/A) -> DR(B'/A) induced by f : B -> B' (x -> f(x), dx -> eps(f(x))).
GmMap de_rham_map(const AlgebraMap& f, const DeRhamPtr& source, const DeRhamPtr& target);

struct CohomologyTable {
    Window window;
    bool truncated = true;
    std::map<int, std::size_t> dimensions; ///< total degree -> dimension
};

/// Cohomology of the totalization d + (-1)^w eps, indexed by total degree
/// (degree + 2 weight), on the window's weight and polynomial degree bounds.
CohomologyTable mixed_total_cohomology(const GradedMixedPresentation& f, std::optional<Window> window);
CohomologyTable de_rham_cohomology(const DeRhamAlgebra& d, std::optional<Window> window = Window{});

} // namespace folwerk
