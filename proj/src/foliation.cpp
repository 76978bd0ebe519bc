#include "folwerk/foliation.hpp"

#include "folwerk/error.hpp"

#include <fmt/format.h>

#include <set>

namespace folwerk {

const char* kind_name(FoliationKind kind)
{
    switch (kind) {
    case FoliationKind::Final: return "final";
    case FoliationKind::Zero: return "zero";
    case FoliationKind::Custom: return "custom";
    case FoliationKind::Pullback: return "pullback";
    case FoliationKind::Pushforward: return "pushforward";
    }
    return "?";
}

FoliationPtr FoliationPresentation::make(Data data)
{
    if (!data.gm)
        fail(ErrorKind::InvalidInput, "foliation without a graded mixed algebra");
    PerfectComplex l = weight_one_complex(*data.gm);
    if (!data.base_cotangent.owner)
        data.base_cotangent = cotangent_lci(data.gm->owner());
    if (data.base_cotangent.owner != data.gm->owner())
        fail(ErrorKind::IncompatibleOwner, "cotangent of the base lives over another algebra");
    if (!data.anchor.source().owner())
        data.anchor = ChainMap::zero(data.base_cotangent.complex, l);
    if (!(data.anchor.source() == data.base_cotangent.complex))
        fail(ErrorKind::InvalidInput, fmt::format("anchor of {} does not start at L_{}", data.name,
                                                  data.gm->owner()->describe()));
    if (!(data.anchor.target() == l))
        fail(ErrorKind::InvalidInput, fmt::format("anchor of {} does not land in its cotangent", data.name));
    return FoliationPtr(new FoliationPresentation(std::move(data), std::move(l)));
}

FoliationPtr final_foliation(const AlgebraPtr& b, std::string name)
{
    auto dr = de_rham(b);
    FoliationPresentation::Data data;
    data.name = name.empty() ? "final(" + b->describe() + ")" : std::move(name);
    data.kind = FoliationKind::Final;
    data.gm = dr->gm;
    data.base_cotangent = dr->cotangent;
    PerfectComplex l = weight_one_complex(*dr->gm);
    std::map<int, PolyMatrix> comps;
    for (int k : l.degrees())
        comps[k] = PolyMatrix::identity(b->ring(), l.rank(k));
    data.anchor = ChainMap(dr->cotangent.complex, l, std::move(comps));
    data.notes = dr->gm->provenance();
    if (dr->model != b)
        data.notes.push_back(fmt::format("weight 0 is the Koszul model {}", dr->model->name()));
    return FoliationPresentation::make(std::move(data));
}

FoliationPtr zero_foliation(const AlgebraPtr& b, std::string name)
{
    AlgebraPtr model = koszul_model(b);
    GradedMixedPresentation::Data gm;
    gm.name = "Sym(0 over " + b->describe() + ")";
    gm.owner = b;
    gm.model = model;
    gm.base_size = model->base_size();
    gm.ring = model->ring_ptr();
    gm.d = model->differential();
    gm.quasi_free = true;
    FoliationPresentation::Data data;
    data.name = name.empty() ? "zero(" + b->describe() + ")" : std::move(name);
    data.kind = FoliationKind::Zero;
    data.gm = GradedMixedPresentation::make(std::move(gm));
    if (model != b)
        data.notes.push_back(fmt::format("weight 0 is the Koszul model {}", model->name()));
    return FoliationPresentation::make(std::move(data));
}

FoliationPtr custom_foliation(const CustomFoliationSpec& spec)
{
    const AlgebraPtr& b = spec.owner;
    const PerfectComplex& l = spec.cotangent;
    if (l.owner() != b)
        fail(ErrorKind::IncompatibleOwner, fmt::format("cotangent of {} is not over {}", spec.name, b->name()));
    l.validate();
    if (auto top = l.max_degree(); top && *top > 0)
        fail(ErrorKind::InvalidInput,
             fmt::format("cotangent of {} has a term in positive degree {}", spec.name, *top));
    const Ring& br = b->ring();
    std::vector<Generator> gens = br.generators();
    std::set<std::string> used;
    for (auto& g : gens)
        used.insert(g.name);
    std::map<std::pair<int, std::size_t>, std::size_t> index;
    for (int k : l.degrees())
        for (std::size_t j = 0; j < l.rank(k); ++j) {
            const std::string& label = l.labels(k)[j];
            if (!used.insert(label).second)
                fail(ErrorKind::InvalidInput,
                     fmt::format("basis label {} of {} is already a generator name", label, spec.name));
            index[{k, j}] = gens.size();
            gens.push_back({label, k - 1, 1});
        }
    const std::size_t n = gens.size();
    std::vector<Poly> relations;
    for (auto& r : br.groebner())
        relations.push_back(resize_poly(r, n));
    auto ring = std::make_shared<Ring>(gens, relations);

    std::vector<Poly> d(n), eps(n);
    for (std::size_t i = 0; i < br.size(); ++i)
        d[i] = resize_poly(b->differential()[i], n);
    for (auto& [slot, g] : index) {
        auto [k, j] = slot;
        PolyMatrix m = l.differential(k);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (!m(i, j).is_zero())
                d[g] -= ring->mul(resize_poly(m(i, j), n), ring->var(index.at({k + 1, i})));
    }

    CotangentModel base = cotangent_lci(b);
    ChainMap anchor = spec.anchor ? *spec.anchor : ChainMap::zero(base.complex, l);
    PolyMatrix a0 = anchor.component(0);
    for (std::size_t k = 0; k < b->own_size(); ++k) {
        std::size_t col = base.differentials[k];
        Poly e;
        for (std::size_t i = 0; i < a0.rows(); ++i)
            if (!a0(i, col).is_zero())
                e += ring->mul(resize_poly(a0(i, col), n), ring->var(index.at({0, i})));
        eps[b->own_index(k)] = e;
    }
    for (auto& [gen, text] : spec.eps) {
        auto i = ring->index_of(gen);
        if (!i)
            fail(ErrorKind::UnknownName, fmt::format("{} is not a generator of {}", gen, spec.name));
        if (*i < b->base_size())
            fail(ErrorKind::InvalidInput, fmt::format("eps must vanish on the base generator {}", gen));
        eps[*i] = parse_poly(*ring, text);
    }

    GradedMixedPresentation::Data gm;
    gm.name = "Sym(" + spec.name + ")";
    gm.owner = b;
    gm.model = b;
    gm.base_size = b->base_size();
    gm.ring = ring;
    gm.d = std::move(d);
    gm.eps = std::move(eps);
    gm.quasi_free = true;
    FoliationPresentation::Data data;
    data.name = spec.name;
    data.kind = FoliationKind::Custom;
    data.gm = GradedMixedPresentation::make(std::move(gm));
    data.base_cotangent = base;
    data.anchor = ChainMap(base.complex, weight_one_complex(*data.gm), [&] {
        std::map<int, PolyMatrix> comps;
        for (int k : base.complex.degrees())
            comps[k] = anchor.component(k);
        return comps;
    }());
    return FoliationPresentation::make(std::move(data));
}

// ---------------------------------------------------------------------------
// verification

bool FoliationReport::passed() const
{
    for (auto& c : conditions)
        if (!c.passed)
            return false;
    return true;
}

namespace {

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (auto& p : parts)
        out += (out.empty() ? "" : ", ") + p;
    return out;
}

// Weight 0 either equals B or is a model of it built from two kinds of extra
// generators: Koszul generators e with d(e) a relation of B (regular sequence),
// and pairs (u, k) with d(k) = u - q, q free of every u.
ConditionCheck weight_zero_check(const GradedMixedPresentation& f)
{
    ConditionCheck c{"weight_zero", true, {}};
    const AlgebraPtr& b = f.owner();
    const AlgebraPtr& model = f.model() ? f.model() : b;
    if (model == b) {
        c.detail = fmt::format("weight 0 is {} itself", b->name());
        return c;
    }
    AlgebraMap proj = f.projection();
    if (auto reason = proj.defect(); !reason.empty()) {
        c.passed = false;
        c.detail = "projection to " + b->name() + " is not a map: " + reason;
        return c;
    }
    const Ring& mr = model->ring();
    const Ring& br = b->ring();
    std::vector<bool> kept(mr.size(), false);
    std::size_t kept_count = 0;
    for (std::size_t i = model->base_size(); i < mr.size(); ++i) {
        auto j = br.index_of(mr.generator(i).name);
        if (j && br.generator(*j).degree == mr.generator(i).degree && proj.images()[i] == br.var(*j)) {
            kept[i] = true;
            ++kept_count;
        }
    }
    if (kept_count != b->own_size()) {
        c.passed = false;
        c.detail = fmt::format("model {} does not contain the generators of {}", model->name(), b->name());
        return c;
    }
    std::vector<Poly> by_name(mr.size());
    for (std::size_t i = 0; i < mr.size(); ++i)
        if (i < model->base_size() || kept[i])
            by_name[i] = b->free_ring().var(*br.index_of(mr.generator(i).name));

    std::set<std::size_t> us, paired;
    for (std::size_t i = model->base_size(); i < mr.size(); ++i)
        if (!kept[i] && !mr.odd(i))
            us.insert(i);
    auto mentions_u = [&](const Poly& p) {
        for (auto& [e, coeff] : p.terms())
            for (auto u : us)
                if (e[u] != 0)
                    return true;
        return false;
    };
    std::size_t koszul = 0, triangular = 0;
    std::vector<std::string> problems;
    std::vector<Poly> relations = b->own_relations();
    for (std::size_t i = model->base_size(); i < mr.size(); ++i) {
        if (kept[i] || !mr.odd(i))
            continue;
        const Poly& dk = model->differential()[i];
        std::optional<std::size_t> u;
        for (auto cand : us) {
            Poly rest = dk - mr.var(cand);
            if (!paired.count(cand) && !mentions_u(rest)) {
                u = cand;
                break;
            }
        }
        if (u) {
            paired.insert(*u);
            ++triangular;
            continue;
        }
        Poly image = mentions_u(dk) ? Poly{} : model->free_ring().substitute(dk, by_name, b->free_ring());
        auto it = std::find(relations.begin(), relations.end(), image);
        if (!image.is_zero() && it != relations.end()) {
            relations.erase(it);
            ++koszul;
            continue;
        }
        problems.push_back(fmt::format("{} with d = {}", mr.generator(i).name, mr.format(dk)));
    }
    for (auto u : us)
        if (!paired.count(u))
            problems.push_back(fmt::format("{} is not killed", mr.generator(u).name));
    if (!relations.empty())
        problems.push_back(fmt::format("{} relations of {} have no Koszul generator", relations.size(), b->name()));
    if (koszul > 0) {
        auto check = koszul_regularity(b);
        if (!check.regular)
            problems.push_back(fmt::format("relations of {} are not regular up to degree {}", b->name(), check.bound));
    }
    if (!problems.empty()) {
        c.passed = false;
        c.detail = fmt::format("{} is not recognised as a resolution of {}: {}", model->name(), b->name(),
                               join(problems));
        return c;
    }
    c.detail = fmt::format("weight 0 is the semi-free model {} of {} ({} Koszul, {} triangular generators)",
                           model->name(), b->name(), koszul, triangular);
    return c;
}

ConditionCheck anchor_check(const FoliationPresentation& f)
{
    ConditionCheck c{"anchor", true, {}};
    if (auto reason = f.anchor().defect(); !reason.empty()) {
        c.passed = false;
        c.detail = "anchor is not a chain map: " + reason;
        return c;
    }
    // eps on B must be the anchor applied to the universal derivation
    const GradedMixedPresentation& gm = *f.gm();
    const AlgebraPtr& b = f.owner();
    const CotangentModel& base = f.base_cotangent();
    PolyMatrix a0 = f.anchor().component(0);
    for (std::size_t k = 0; k < b->own_size(); ++k) {
        const std::string& name = b->ring().generator(b->own_index(k)).name;
        auto i = gm.ring().index_of(name);
        if (!i)
            continue;
        std::vector<Poly> col = linear_column(gm, gm.eps_images()[*i], 0);
        for (std::size_t r = 0; r < col.size(); ++r)
            if (!(col[r] == a0(r, base.differentials[k]))) {
                c.passed = false;
                c.detail = fmt::format("eps({}) differs from the anchor of d{}", name, name);
                return c;
            }
    }
    c.detail = "chain map; eps on B factors through the anchor";
    return c;
}

} // namespace

FoliationReport verify_foliation(const FoliationPresentation& f, std::optional<Window> window)
{
    FoliationReport out;
    const PerfectComplex& l = f.cotangent();
    for (int k : l.degrees())
        out.cotangent_ranks[k] = l.rank(k);

    out.conditions.push_back(weight_zero_check(*f.gm()));

    out.quasi_free = quasi_free_ranks(*f.gm(), window ? window->weight : 3);
    out.conditions.push_back({"quasi_free", out.quasi_free.passed,
                              out.quasi_free.passed ? "weightwise ranks agree with Sym of weight 1"
                                                    : out.quasi_free.reason});

    ConditionCheck perfect{"perfect", true, {}};
    if (auto reason = l.defect(); !reason.empty()) {
        perfect.passed = false;
        perfect.detail = reason;
    } else if (auto top = l.max_degree(); top && *top > 0) {
        perfect.passed = false;
        perfect.detail = fmt::format("cotangent has a term in degree {}", *top);
    } else {
        perfect.detail = fmt::format("finite free, total rank {}", l.total_rank());
    }
    out.conditions.push_back(perfect);

    out.conditions.push_back(anchor_check(f));

    out.mixed = verify_mixed(*f.gm(), window);
    ConditionCheck mixed{"mixed", out.mixed.passed(), {}};
    if (auto* bad = out.mixed.first_failure())
        mixed.detail = fmt::format("{} fails at {}: {}", bad->identity, bad->first_failure, bad->value);
    else
        mixed.detail = fmt::format("{} monomials", out.mixed.monomials);
    out.conditions.push_back(mixed);
    return out;
}

PerfectComplex tangent(const FoliationPresentation& f)
{
    return dual(f.cotangent());
}

// ---------------------------------------------------------------------------
// pull-back

ChainMap jacobian(const AlgebraMap& map, const CotangentModel& source, const CotangentModel& target)
{
    if (map.source() != source.owner || map.target() != target.owner)
        fail(ErrorKind::IncompatibleOwner, fmt::format("{} does not match the cotangent models", map.name()));
    if (source.complex.rank(-1) != 0)
        fail(ErrorKind::UnsupportedInput,
             fmt::format("{} has relations; only polynomial sources are supported", source.owner->name()));
    PerfectComplex pulled = base_change(source.complex, map);
    const AlgebraPtr& b = source.owner;
    PolyMatrix m(target.complex.rank(0), pulled.rank(0));
    for (std::size_t k = 0; k < b->own_size(); ++k) {
        std::vector<Poly> col = target.derivation(map.images()[b->own_index(k)]);
        for (std::size_t i = 0; i < col.size(); ++i)
            m(i, source.differentials[k]) = col[i];
    }
    std::map<int, PolyMatrix> comps;
    if (pulled.rank(0) > 0)
        comps[0] = m;
    return ChainMap(pulled, target.complex, std::move(comps));
}

PushoutCotangent pushout_cotangent(const PerfectComplex& l_f, const ChainMap& anchor, const AlgebraMap& map,
                                   const CotangentModel& target)
{
    CotangentModel source;
    source.owner = map.source();
    source.complex = anchor.source();
    for (std::size_t k = 0; k < map.source()->own_size(); ++k)
        source.differentials.push_back(k);
    ChainMap j = jacobian(map, source, target);
    ChainMap fa = base_change(anchor, map);
    PerfectComplex fl = base_change(l_f, map);
    PerfectComplex q = direct_sum(fl, target.complex);
    std::map<int, PolyMatrix> comps;
    for (int k : j.source().degrees()) {
        PolyMatrix top = fa.component(k);
        PolyMatrix bottom = j.component(k).negated();
        comps[k] = block(top, PolyMatrix(top.rows(), 0), bottom, PolyMatrix(bottom.rows(), 0));
    }
    ChainMap phi(j.source(), q, std::move(comps));
    PushoutCotangent out;
    out.complex = cone(phi);
    std::map<int, PolyMatrix> incl;
    for (int k : target.complex.degrees()) {
        PolyMatrix m(out.complex.rank(k), target.complex.rank(k));
        std::size_t offset = j.source().rank(k + 1) + fl.rank(k);
        for (std::size_t i = 0; i < target.complex.rank(k); ++i)
            m(offset + i, i) = map.target()->ring().one();
        incl[k] = m;
    }
    out.anchor = ChainMap(target.complex, out.complex, std::move(incl));
    return out;
}

ChainMap iterated_pushout_comparison(const PerfectComplex& l_f, const ChainMap& anchor, const AlgebraMap& f,
                                     const AlgebraMap& g)
{
    CotangentModel c1 = cotangent_lci(f.target());
    CotangentModel c2 = cotangent_lci(g.target());
    auto once = pushout_cotangent(l_f, anchor, f, c1);
    auto twice = pushout_cotangent(once.complex, once.anchor, g, c2);
    AlgebraMap gf = f.then(g);
    auto direct = pushout_cotangent(l_f, anchor, gf, c2);
    ChainMap jg = jacobian(g, c1, c2);

    const PerfectComplex& lb = anchor.source();
    const Ring& r = g.target()->ring();
    std::map<int, PolyMatrix> comps;
    for (int k : twice.complex.degrees()) {
        // twice^k = [s g*L_B' | s L_B | L_F | g*L_B' | L_B''], direct^k = [s L_B | L_F | L_B'']
        std::size_t sb1 = c1.complex.rank(k + 1), sb = lb.rank(k + 1), lf = l_f.rank(k);
        std::size_t b1 = c1.complex.rank(k), b2 = c2.complex.rank(k);
        PolyMatrix m(direct.complex.rank(k), twice.complex.rank(k));
        for (std::size_t i = 0; i < sb + lf; ++i)
            m(i, sb1 + i) = r.one();
        PolyMatrix jk = jg.component(k);
        for (std::size_t i = 0; i < b2; ++i) {
            for (std::size_t c = 0; c < b1; ++c)
                m(sb + lf + i, sb1 + sb + lf + c) = jk(i, c);
            m(sb + lf + i, sb1 + sb + lf + b1 + i) = r.one();
        }
        comps[k] = m;
    }
    return ChainMap(twice.complex, direct.complex, std::move(comps));
}

PulledFoliation pullback_foliation(const FoliationPtr& f, const AlgebraMap& map, std::string name)
{
    if (map.source() != f->owner())
        fail(ErrorKind::IncompatibleOwner,
             fmt::format("{} starts at {}, the foliation {} lives over {}", map.name(), map.source()->name(),
                         f->name(), f->owner()->name()));
    map.validate();
    PulledFoliation out;
    out.original = f;
    out.source_de_rham = de_rham(map.source());
    out.target_de_rham = de_rham(map.target());
    out.de_rham_map = de_rham_map(map, out.source_de_rham, out.target_de_rham);
    if (map.is_identity()) {
        out.foliation = f;
        return out;
    }
    GmPtr gm = pullback_gm(f->gm(), out.de_rham_map, &out.layout);

    // anchor: the de Rham generators of B' sit first in every degree of L
    const CotangentModel& lt = out.target_de_rham->cotangent;
    PerfectComplex l = weight_one_complex(*gm);
    std::map<int, PolyMatrix> comps;
    for (int k : lt.complex.degrees())
        comps[k] = PolyMatrix(l.rank(k), lt.complex.rank(k));
    const Ring& tr = out.target_de_rham->gm->ring();
    const Ring& pr = gm->ring();
    std::map<int, std::size_t> seen;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.generator(i).weight != 1)
            continue;
        int k = tr.generator(i).degree + 1;
        std::size_t j = seen[k]++;
        std::size_t row = 0;
        for (std::size_t h = 0; h < out.layout.target[i]; ++h)
            if (pr.generator(h).weight == 1 && pr.generator(h).degree + 1 == k)
                ++row;
        comps[k](row, j) = map.target()->ring().one();
    }

    FoliationPresentation::Data data;
    data.name = name.empty() ? map.name() + "^*" + f->name() : std::move(name);
    data.kind = FoliationKind::Pullback;
    data.gm = gm;
    data.base_cotangent = lt;
    data.anchor = ChainMap(lt.complex, l, std::move(comps));
    data.notes = f->notes();
    data.notes.push_back(fmt::format("cotangent is cone(f*L_{} -> f*L_F + L_{})", map.source()->name(),
                                     map.target()->name()));
    data.notes.push_back("mixed data transported on generators and re-verified");
    out.foliation = FoliationPresentation::make(std::move(data));
    return out;
}

GmMap final_comparison(const PulledFoliation& p)
{
    const FoliationPresentation& pulled = *p.foliation;
    const GmPtr& target = p.target_de_rham->gm;
    if (p.layout.target.empty()) {
        // pull-back along the identity
        std::vector<Poly> images;
        for (auto& g : pulled.gm()->ring().generators())
            images.push_back(target->ring().var(*target->ring().index_of(g.name)));
        return GmMap("compare", pulled.gm(), target, std::move(images));
    }
    if (p.original->kind() != FoliationKind::Final)
        fail(ErrorKind::UnsupportedInput,
             fmt::format("{} is not a final foliation; no comparison with the final foliation", p.original->name()));
    const Ring& pr = pulled.gm()->ring();
    const Ring& fr = p.original->gm()->ring();
    const Ring& src = p.source_de_rham->gm->ring();
    const std::size_t n = pr.size();
    std::vector<Poly> images(n);
    std::vector<bool> set(n, false);
    for (std::size_t i = 0; i < p.layout.target.size(); ++i) {
        images[p.layout.target[i]] = target->ring().var(i);
        set[p.layout.target[i]] = true;
    }
    for (std::size_t i = 0; i < p.layout.source.size(); ++i) {
        std::size_t at = p.layout.source[i];
        if (set[at])
            continue;
        auto s = src.index_of(fr.generator(i).name);
        if (!s)
            fail(ErrorKind::InvalidInput, fmt::format("{} is not a de Rham generator", fr.generator(i).name));
        images[at] = p.de_rham_map.images()[*s];
        set[at] = true;
    }
    for (auto idx : p.layout.k)
        set[idx] = true;
    for (auto idx : p.layout.dk)
        set[idx] = true;
    return GmMap("compare_final", pulled.gm(), target, std::move(images));
}

RelativeCotangent relative_cotangent(const AlgebraMap& f)
{
    const AlgebraPtr& b = f.source();
    const AlgebraPtr& b2 = f.target();
    if (b->has_own_relations() || b2->has_own_relations())
        fail(ErrorKind::UnsupportedInput, "relative cotangent needs polynomial algebras");
    const Ring& tr = b2->ring();
    std::set<std::size_t> hit;
    for (std::size_t k = 0; k < b->own_size(); ++k) {
        const Poly& img = f.images()[b->own_index(k)];
        std::optional<std::size_t> which;
        for (std::size_t i = b2->base_size(); i < tr.size(); ++i)
            if (img == tr.var(i))
                which = i;
        if (!which || !hit.insert(*which).second)
            fail(ErrorKind::UnsupportedInput, fmt::format("{} is not a coordinate inclusion", f.name()));
    }
    CotangentModel lb = cotangent_lci(b), lb2 = cotangent_lci(b2);
    RelativeCotangent out;
    out.transitivity = cone(jacobian(f, lb, lb2));
    std::vector<std::string> labels;
    std::vector<std::size_t> rows;
    for (std::size_t k = 0; k < b2->own_size(); ++k)
        if (!hit.count(b2->own_index(k))) {
            labels.push_back(lb2.complex.labels(0)[lb2.differentials[k]]);
            rows.push_back(lb2.differentials[k]);
        }
    out.kaehler = PerfectComplex::free(b2, 0, labels);
    PolyMatrix m(labels.size(), out.transitivity.rank(0));
    // cone^0 = L_B^1 + L_B'^0 and L_B^1 = 0
    for (std::size_t i = 0; i < rows.size(); ++i)
        m(i, rows[i]) = tr.one();
    std::map<int, PolyMatrix> comps;
    if (!labels.empty() || out.transitivity.rank(0) > 0)
        comps[0] = m;
    out.projection = ChainMap(out.transitivity, out.kaehler, std::move(comps));
    return out;
}

ChainMap zero_comparison(const PulledFoliation& p, const RelativeCotangent& rel)
{
    if (p.original->kind() != FoliationKind::Zero)
        fail(ErrorKind::UnsupportedInput, fmt::format("{} is not a zero foliation", p.original->name()));
    const PerfectComplex& l = p.foliation->cotangent();
    std::map<int, PolyMatrix> comps;
    for (int k : l.degrees()) {
        PolyMatrix m(rel.kaehler.rank(k), l.rank(k));
        for (std::size_t i = 0; i < rel.kaehler.rank(k); ++i)
            for (std::size_t j = 0; j < l.rank(k); ++j)
                if (rel.kaehler.labels(k)[i] == l.labels(k)[j])
                    m(i, j) = l.ring().one();
        comps[k] = m;
    }
    return ChainMap(l, rel.kaehler, std::move(comps));
}

} // namespace folwerk
