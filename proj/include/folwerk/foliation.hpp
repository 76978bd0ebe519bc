#pragma once

#include "folwerk/cotangent_derham.hpp"
#include "folwerk/graded_mixed.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace folwerk {

class FoliationPresentation;
using FoliationPtr = std::shared_ptr<const FoliationPresentation>;

enum class FoliationKind { Final, Zero, Custom, Pullback, Pushforward };
const char* kind_name(FoliationKind kind);

/// Foliation on Spec B over Spec A: a graded mixed algebra whose underlying
/// graded algebra is Sym_B(L_F[1]), the cotangent L_F = its weight-1 part
/// shifted back, and the anchor L_{B/A} -> L_F.
class FoliationPresentation {
public:
    struct Data {
        std::string name;
        FoliationKind kind = FoliationKind::Custom;
        GmPtr gm;
        CotangentModel base_cotangent; ///< L_{B/A}
        ChainMap anchor;                ///< L_{B/A} -> L_F
        std::vector<std::string> notes;
    };

    static FoliationPtr make(Data data);

    const std::string& name() const { return data_.name; }
    FoliationKind kind() const { return data_.kind; }
    const AlgebraPtr& owner() const { return data_.gm->owner(); }
    const GmPtr& gm() const { return data_.gm; }
    const PerfectComplex& cotangent() const { return cotangent_; }
    const CotangentModel& base_cotangent() const { return data_.base_cotangent; }
    const ChainMap& anchor() const { return data_.anchor; }
    const std::vector<std::string>& notes() const { return data_.notes; }
    const Data& data() const { return data_; }

private:
    FoliationPresentation(Data data, PerfectComplex cotangent)
        : data_(std::move(data)), cotangent_(std::move(cotangent)) {}
    Data data_;
    PerfectComplex cotangent_;
};

/// L_F = L_{B/A}, anchor the identity, eps the de Rham differential.
FoliationPtr final_foliation(const AlgebraPtr& b, std::string name = {});
/// L_F = 0, eps = 0.
FoliationPtr zero_foliation(const AlgebraPtr& b, std::string name = {});

/// User-supplied cotangent and anchor. Each basis element of L_F in degree k
/// becomes a weight-1 generator of degree k - 1 named by its label. eps on the
/// own generators of B is anchor∘d unless overridden; eps on the weight-1
/// generators is zero unless given. Overrides are parsed in the new ring.
struct CustomFoliationSpec {
    std::string name;
    AlgebraPtr owner;
    PerfectComplex cotangent;
    std::optional<ChainMap> anchor; ///< default: the zero map
    std::map<std::string, std::string> eps;
};
FoliationPtr custom_foliation(const CustomFoliationSpec& spec);

struct ConditionCheck {
    std::string condition;
    bool passed = true;
    std::string detail;
};

struct FoliationReport {
    std::vector<ConditionCheck> conditions;
    MixedVerificationReport mixed;
    QuasiFreeReport quasi_free;
    std::map<int, std::size_t> cotangent_ranks;

    bool passed() const;
};

/// Weight 0 is B (strictly, or through a model that is checked to resolve B),
/// quasi-freeness by weightwise ranks, perfectness of L_F, the anchor, and the
/// mixed identities on the window.
FoliationReport verify_foliation(const FoliationPresentation& f, std::optional<Window> window = Window{});

/// Dual of L_F.
PerfectComplex tangent(const FoliationPresentation& f);

/// Pull-back along f : B -> B'. The cotangent is
/// cone(f*L_{B/A} -> f*L_F ⊕ L_{B'/A}) with dx -> (anchor(dx), -df(x)), and the
/// anchor is the inclusion of L_{B'/A}.
struct PulledFoliation {
    FoliationPtr foliation;
    FoliationPtr original;
    GmMap de_rham_map;      ///< DR(B/A) -> DR(B'/A)
    PullbackLayout layout;  ///< where the pieces sit in the new ring
    DeRhamPtr source_de_rham, target_de_rham;
};
PulledFoliation pullback_foliation(const FoliationPtr& f, const AlgebraMap& map, std::string name = {});

/// The pushout formula on cotangent data alone: cone(f*L_B -> f*L_F ⊕ L_{B'})
/// with its anchor (inclusion of L_{B'}). Needs L_B in degree 0.
struct PushoutCotangent {
    PerfectComplex complex;
    ChainMap anchor;
};
PushoutCotangent pushout_cotangent(const PerfectComplex& l_f, const ChainMap& anchor, const AlgebraMap& map,
                                   const CotangentModel& target);

/// f*L_{B/A} -> L_{B'/A}, dx -> d(f(x)), for B with degree-0 cotangent.
ChainMap jacobian(const AlgebraMap& map, const CotangentModel& source, const CotangentModel& target);

/// Quasi-isomorphism from the iterated pushout (along f, then g) to the pushout
/// along g∘f: the copies of g*L_{B'} map to zero resp. through dg, the rest is
/// the identity.
ChainMap iterated_pushout_comparison(const PerfectComplex& l_f, const ChainMap& anchor, const AlgebraMap& f,
                                     const AlgebraMap& g);

/// Linear comparison of the pull-back of the final foliation of B with the
/// final foliation of B': u_x -> f(x), k_x and dk_x -> 0.
GmMap final_comparison(const PulledFoliation& p);

/// L_{B'/B} for a coordinate inclusion (every generator of B goes to a distinct
/// generator of B'): free on the remaining differentials, with the projection
/// from cone(f*L_B -> L_{B'}).
struct RelativeCotangent {
    PerfectComplex transitivity; ///< cone(f*L_B -> L_{B'})
    PerfectComplex kaehler;      ///< Omega_{B'/B}
    ChainMap projection;         ///< transitivity -> kaehler
};
RelativeCotangent relative_cotangent(const AlgebraMap& f);

/// For the pull-back of the zero foliation: L -> Omega_{B'/B}, matching the
/// de Rham generators of B' by name and sending the glue generators to zero.
ChainMap zero_comparison(const PulledFoliation& p, const RelativeCotangent& rel);

} // namespace folwerk
