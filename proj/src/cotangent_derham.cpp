#include "folwerk/cotangent_derham.hpp"

#include "folwerk/error.hpp"
#include "folwerk/linalg.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace folwerk {

namespace {

std::string unique_name(std::set<std::string>& used, std::string name)
{
    while (used.count(name))
        name += "'";
    used.insert(name);
    return name;
}

} // namespace

std::vector<Poly> CotangentModel::derivation(const Poly& p) const
{
    const Ring& ring = owner->ring();
    std::vector<Poly> column(complex.rank(0));
    for (std::size_t k = 0; k < differentials.size(); ++k)
        column[differentials[k]] = ring.reduce(owner->free_ring().partial(p, owner->own_index(k)));
    return column;
}

CotangentModel cotangent_lci(const AlgebraPtr& b, std::uint32_t check_bound)
{
    const std::size_t n = b->own_size();
    const std::size_t r = b->own_relations().size();
    for (std::size_t k = 0; k < n; ++k)
        if (b->ring().generator(b->own_index(k)).degree != 0)
            fail(ErrorKind::UnsupportedInput,
                 fmt::format("cotangent of {} needs degree-0 generators", b->name()));
    CotangentModel m;
    m.owner = b;
    m.lci = r > 0;
    std::vector<std::string> dnames, enames;
    std::set<std::string> used;
    for (auto& g : b->ring().generators())
        used.insert(g.name);
    for (std::size_t k = 0; k < n; ++k) {
        dnames.push_back(unique_name(used, "d" + b->ring().generator(b->own_index(k)).name));
        m.differentials.push_back(k);
    }
    if (r > 0) {
        auto check = koszul_regularity(b, check_bound);
        if (!check.regular)
            fail(ErrorKind::NotRegular,
                 fmt::format("relations of {} are not a regular sequence (Koszul homology in degree bound {})",
                             b->name(), check_bound));
        m.notes.push_back(fmt::format("conormal complex; regularity checked by Koszul homology up to degree {}",
                                      check_bound));
    }
    for (std::size_t i = 0; i < r; ++i)
        enames.push_back(unique_name(used, fmt::format("e{}", i + 1)));
    PolyMatrix d(n, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < n; ++k)
            d(k, i) = b->ring().reduce(b->free_ring().partial(b->own_relations()[i], b->own_index(k)));
    std::map<int, PolyMatrix> diffs;
    if (r > 0 && n > 0)
        diffs[-1] = d;
    m.complex = PerfectComplex(b, {{-1, r}, {0, n}}, diffs, {{-1, enames}, {0, dnames}});
    return m;
}

CotangentModel kaehler(const AlgebraPtr& b)
{
    if (b->has_own_relations() && !b->smooth_flag() && !b->lci_flag())
        fail(ErrorKind::AmbiguousInput,
             fmt::format("{} has relations; declare it smooth or lci to compute its differentials",
                         b->name()));
    CotangentModel m = cotangent_lci(b);
    if (b->has_own_relations())
        m.notes.push_back("Kaehler differentials presented by the conormal complex (H^0 is the quotient)");
    return m;
}

KoszulCheck koszul_regularity(const AlgebraPtr& b, std::uint32_t bound)
{
    KoszulCheck out;
    out.bound = bound;
    std::vector<Generator> own;
    for (std::size_t k = 0; k < b->own_size(); ++k)
        own.push_back(b->ring().generator(b->own_index(k)));
    auto p = AlgebraPresentation::make(b->name() + "_P", b->base(), own, {});
    PerfectComplex k = PerfectComplex::unit(p);
    for (auto& f : b->own_relations()) {
        PolyMatrix m(1, 1);
        m(0, 0) = p->ring().reduce(f);
        k = tensor(k, PerfectComplex(p, {{-1, 1}, {0, 1}}, {{-1, m}}));
    }
    for (int deg = -static_cast<int>(b->own_relations().size()); deg <= 0; ++deg) {
        auto h = homology(k, deg, bound);
        out.homology.push_back(h);
        if (deg < 0 && h.dimension != 0)
            out.regular = false;
    }
    if (auto basis = b->ring().finite_basis())
        out.quotient_monomials = basis->size();
    else
        out.quotient_monomials = b->ring().standard_monomials(bound).size();
    return out;
}

AlgebraPtr koszul_model(const AlgebraPtr& b, std::uint32_t check_bound)
{
    if (!b->has_own_relations())
        return b;
    auto check = koszul_regularity(b, check_bound);
    if (!check.regular)
        fail(ErrorKind::NotRegular,
             fmt::format("relations of {} are not a regular sequence; no Koszul model", b->name()));
    std::vector<Generator> own;
    std::set<std::string> used;
    for (auto& g : b->ring().generators())
        used.insert(g.name);
    for (std::size_t k = 0; k < b->own_size(); ++k)
        own.push_back(b->ring().generator(b->own_index(k)));
    const std::size_t r = b->own_relations().size();
    for (std::size_t i = 0; i < r; ++i)
        own.push_back({unique_name(used, fmt::format("e{}", i + 1)), -1, 0});
    const std::size_t n = b->ring().size() + r;
    std::vector<Poly> d(n);
    for (std::size_t i = 0; i < r; ++i)
        d[b->ring().size() + i] = resize_poly(b->own_relations()[i], n);
    return AlgebraPresentation::make(b->name() + "_K", b->base(), own, {}, d);
}

DeRhamPtr de_rham(const AlgebraPtr& b, unsigned weight_bound)
{
    auto out = std::make_shared<DeRhamAlgebra>();
    out->owner = b;
    out->weight_bound = weight_bound;
    out->cotangent = cotangent_lci(b);
    out->model = koszul_model(b);
    const AlgebraPtr& model = out->model;
    const Ring& mr = model->ring();
    const std::size_t base = model->base_size();

    std::vector<Generator> gens = mr.generators();
    std::set<std::string> used;
    for (auto& g : gens)
        used.insert(g.name);
    std::vector<std::size_t> dindex(mr.size(), 0);
    for (std::size_t i = base; i < mr.size(); ++i) {
        dindex[i] = gens.size();
        gens.push_back({unique_name(used, "d" + mr.generator(i).name), mr.generator(i).degree - 1, 1});
    }
    const std::size_t n = gens.size();
    std::vector<Poly> relations;
    for (auto& r : mr.relations())
        relations.push_back(resize_poly(r, n));
    auto ring = std::make_shared<Ring>(gens, relations);

    std::vector<Poly> eps(n), d(n);
    for (std::size_t i = base; i < mr.size(); ++i)
        eps[i] = ring->var(dindex[i]);
    for (std::size_t i = 0; i < mr.size(); ++i)
        d[i] = resize_poly(model->differential()[i], n);
    for (std::size_t i = base; i < mr.size(); ++i)
        d[dindex[i]] = -ring->derive(d[i], eps, -1);

    GradedMixedPresentation::Data data;
    data.name = "DR(" + b->describe() + ")";
    data.owner = b;
    data.model = model;
    data.base_size = base;
    data.ring = ring;
    data.d = std::move(d);
    data.eps = std::move(eps);
    data.quasi_free = true;
    {
        std::vector<Poly> projection;
        for (std::size_t i = 0; i < mr.size(); ++i)
            projection.push_back(i < b->ring().size() ? b->ring().var(i) : Poly{});
        data.projection = std::move(projection);
    }
    data.provenance.push_back("de Rham algebra Sym(L[1]) with eps the de Rham differential");
    if (model != b)
        data.provenance.push_back(fmt::format("strict model via Koszul resolution {} of {}", model->name(), b->name()));
    out->gm = GradedMixedPresentation::make(std::move(data));
    return out;
}

GmMap de_rham_map(const AlgebraMap& f, const DeRhamPtr& source, const DeRhamPtr& target)
{
    if (f.source() != source->owner || f.target() != target->owner)
        fail(ErrorKind::IncompatibleOwner,
             fmt::format("{} does not go from {} to {}", f.name(), source->owner->name(), target->owner->name()));
    if (source->model != source->owner)
        fail(ErrorKind::UnsupportedInput,
             fmt::format("de Rham functoriality from the singular {} is not supported", source->owner->name()));
    f.validate();
    const Ring& s = source->gm->ring();
    const Ring& t = target->gm->ring();
    const Ring& tm = target->model->ring();
    std::vector<Poly> images(s.size());
    const std::size_t n0 = source->model->ring().size();
    for (std::size_t i = 0; i < n0; ++i) {
        // the image polynomial, read in the target model's variables
        Poly p = resize_poly(f.images()[i], tm.size());
        images[i] = t.reduce(resize_poly(p, t.size()));
    }
    for (std::size_t i = source->model->base_size(); i < n0; ++i) {
        const Poly& e = source->gm->eps_images()[i];
        auto& lm = e.leading_monomial();
        std::size_t j = static_cast<std::size_t>(std::find(lm.begin(), lm.end(), 1u) - lm.begin());
        images[j] = target->gm->eps(images[i]);
    }
    GmMap g("DR(" + f.name() + ")", source->gm, target->gm, std::move(images));
    auto reason = g.defect();
    if (!reason.empty())
        fail(ErrorKind::NotAMap, fmt::format("DR({}) is not a map: {}", f.name(), reason));
    return g;
}

namespace {

class Coordinates {
public:
    std::size_t of(const Exponents& e)
    {
        auto [it, inserted] = index_.try_emplace(e, index_.size());
        return it->second;
    }

private:
    std::map<Exponents, std::size_t> index_;
};

SparseVec coordinates(const Poly& p, Coordinates& coords)
{
    SparseVec v;
    for (auto& [e, c] : p.terms())
        v[coords.of(e)] += c;
    return v;
}

} // namespace

CohomologyTable mixed_total_cohomology(const GradedMixedPresentation& f, std::optional<Window> window)
{
    const Ring& ring = f.ring();
    CohomologyTable table;
    std::vector<Exponents> monomials;
    if (auto basis = ring.finite_basis()) {
        monomials = *basis;
        table.truncated = false;
        if (window)
            table.window = *window;
    } else {
        if (!window)
            fail(ErrorKind::MissingBound, fmt::format("{} is infinite; a window is required", f.name()));
        table.window = *window;
        for (auto& m : ring.standard_monomials(window->poly_degree))
            if (ring.weight(m) <= static_cast<int>(window->weight))
                monomials.push_back(m);
    }
    std::map<int, std::vector<Exponents>> by_total;
    for (auto& m : monomials)
        by_total[ring.degree(m) + 2 * ring.weight(m)].push_back(m);
    auto total_d = [&](const Exponents& m) {
        Poly p = Poly::monomial(m);
        Poly e = f.eps(p);
        if (ring.weight(m) % 2 != 0)
            e *= Rational(-1);
        return f.d(p) + e;
    };
    for (auto& [t, space] : by_total) {
        std::size_t rank_out = 0;
        {
            Coordinates coords;
            Echelon ech;
            for (auto& m : space)
                ech.insert(coordinates(total_d(m), coords));
            rank_out = ech.rank();
        }
        std::size_t boundaries = 0;
        auto prev = by_total.find(t - 1);
        if (prev != by_total.end()) {
            Coordinates coords;
            for (auto& m : space)
                coords.of(m);
            Echelon all, outside;
            for (auto& m : prev->second) {
                SparseVec v = coordinates(total_d(m), coords);
                SparseVec o(v.lower_bound(space.size()), v.end());
                all.insert(std::move(v));
                outside.insert(std::move(o));
            }
            boundaries = all.rank() - outside.rank();
        }
        table.dimensions[t] = space.size() - rank_out - boundaries;
    }
    return table;
}

CohomologyTable de_rham_cohomology(const DeRhamAlgebra& d, std::optional<Window> window)
{
    return mixed_total_cohomology(*d.gm, window);
}

} // namespace folwerk
