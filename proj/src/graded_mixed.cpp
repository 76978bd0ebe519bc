#include "folwerk/graded_mixed.hpp"

#include "folwerk/complex.hpp"
#include "folwerk/error.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include <fmt/format.h>

namespace folwerk {

namespace {

bool homogeneous_as(const Ring& ring, const Poly& p, int weight, int degree)
{
    if (p.is_zero())
        return true;
    auto w = ring.weight(p);
    auto d = ring.degree(p);
    return w && d && *w == weight && *d == degree;
}

} // namespace

// ---------------------------------------------------------------------------
// GradedMixedPresentation

GmPtr GradedMixedPresentation::make(Data data)
{
    if (!data.ring)
        fail(ErrorKind::InvalidInput, "graded mixed presentation without a ring");
    const Ring& ring = *data.ring;
    const std::size_t n = ring.size();
    data.d.resize(n);
    data.eps.resize(n);
    if (data.d.size() != n || data.eps.size() != n)
        fail(ErrorKind::InvalidInput, "d and eps must be given on every generator");
    for (auto& p : data.d)
        p = ring.reduce(resize_poly(p, n));
    for (auto& p : data.eps)
        p = ring.reduce(resize_poly(p, n));
    for (auto& g : ring.generators())
        if (g.weight < 0)
            fail(ErrorKind::InvalidInput, fmt::format("generator {} has negative weight", g.name));
    if (data.model) {
        const Ring& m = data.model->ring();
        if (m.size() > n)
            fail(ErrorKind::InvalidInput, "weight-0 model has more generators than the algebra");
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m.generator(i).name != ring.generator(i).name ||
                m.generator(i).degree != ring.generator(i).degree || ring.generator(i).weight != 0)
                fail(ErrorKind::InvalidInput,
                     fmt::format("generator {} does not match the weight-0 model", ring.generator(i).name));
    }
    if (data.base_size > n)
        fail(ErrorKind::InvalidInput, "base size exceeds the number of generators");
    return GmPtr(new GradedMixedPresentation(std::move(data)));
}

Poly GradedMixedPresentation::d(const Poly& p) const
{
    return ring().derive(p, data_.d, 1);
}

Poly GradedMixedPresentation::eps(const Poly& p) const
{
    return ring().derive(p, data_.eps, -1);
}

AlgebraMap GradedMixedPresentation::projection() const
{
    AlgebraPtr model = data_.model ? data_.model : data_.owner;
    if (!data_.projection.empty())
        return AlgebraMap("p_" + name(), model, data_.owner, data_.projection);
    const Ring& o = data_.owner->ring();
    std::vector<Poly> images;
    for (auto& g : model->ring().generators()) {
        auto i = o.index_of(g.name);
        images.push_back(i ? o.var(*i) : Poly{});
    }
    return AlgebraMap("p_" + name(), model, data_.owner, std::move(images));
}

std::size_t GradedMixedPresentation::weight(std::size_t generator) const
{
    return static_cast<std::size_t>(ring().generator(generator).weight);
}

// ---------------------------------------------------------------------------
// GmMap

GmMap::GmMap(std::string name, GmPtr source, GmPtr target, std::vector<Poly> images)
    : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)),
      images_(std::move(images))
{
    if (images_.size() != source_->ring().size())
        fail(ErrorKind::InvalidInput,
             fmt::format("map {} needs {} images, got {}", name_, source_->ring().size(), images_.size()));
    for (auto& p : images_)
        p = target_->ring().reduce(resize_poly(p, target_->ring().size()));
}

Poly GmMap::apply(const Poly& p) const
{
    return source_->ring().substitute(p, images_, target_->ring());
}

std::string GmMap::defect() const
{
    const Ring& s = source_->ring();
    const Ring& t = target_->ring();
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto& g = s.generator(i);
        if (!homogeneous_as(t, images_[i], g.weight, g.degree))
            return fmt::format("image of {} is not of weight {} and degree {}", g.name, g.weight, g.degree);
    }
    for (auto& r : s.groebner())
        if (!apply(r).is_zero())
            return fmt::format("relation {} does not map to zero", s.format(r));
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto& g = s.generator(i);
        if (!(target_->d(images_[i]) == apply(source_->d_images()[i])))
            return fmt::format("does not commute with d on {}", g.name);
        if (!(target_->eps(images_[i]) == apply(source_->eps_images()[i])))
            return fmt::format("does not commute with eps on {}", g.name);
    }
    return {};
}

bool GmMap::is_identity() const
{
    if (source_ != target_)
        return false;
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (!(images_[i] == source_->ring().var(i)))
            return false;
    return true;
}

GmMap GmMap::then(const GmMap& next) const
{
    if (target_ != next.source_)
        fail(ErrorKind::IncompatibleOwner, fmt::format("cannot compose {} with {}", name_, next.name_));
    std::vector<Poly> images;
    for (auto& p : images_)
        images.push_back(next.apply(p));
    return GmMap(next.name_ + "." + name_, source_, next.target_, std::move(images));
}

// ---------------------------------------------------------------------------
// Verification

bool MixedVerificationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

const IdentityCheck* MixedVerificationReport::first_failure() const
{
    for (auto& c : checks)
        if (!c.passed)
            return &c;
    return nullptr;
}

std::vector<Exponents> window_monomials(const Ring& ring, const Window& window)
{
    std::vector<Exponents> out;
    for (auto& m : ring.standard_monomials(window.poly_degree)) {
        int w = ring.weight(m);
        int d = ring.degree(m);
        if (w <= static_cast<int>(window.weight) && d >= window.degree_min && d <= window.degree_max)
            out.push_back(m);
    }
    std::stable_sort(out.begin(), out.end(), [](const Exponents& a, const Exponents& b) {
        auto da = total_degree(a), db = total_degree(b);
        if (da != db)
            return da < db;
        return DegLex{}(b, a);
    });
    return out;
}

namespace {

void record(IdentityCheck& check, const std::string& where, const Ring& ring, const Poly& value)
{
    ++check.evaluations;
    if (check.passed && !value.is_zero()) {
        check.passed = false;
        check.first_failure = where;
        check.value = ring.format(value);
    }
}

} // namespace

MixedVerificationReport verify_mixed(const GradedMixedPresentation& f, std::optional<Window> window)
{
    const Ring& ring = f.ring();
    MixedVerificationReport report;
    std::vector<Exponents> monomials;
    if (window) {
        report.window = *window;
        monomials = window_monomials(ring, *window);
    } else {
        auto basis = ring.finite_basis();
        if (!basis)
            fail(ErrorKind::MissingBound,
                 fmt::format("{} is infinite; verify_mixed needs a window", f.name()));
        report.truncated = false;
        monomials = *basis;
        std::stable_sort(monomials.begin(), monomials.end(), [](const Exponents& a, const Exponents& b) {
            auto da = total_degree(a), db = total_degree(b);
            if (da != db)
                return da < db;
            return DegLex{}(b, a);
        });
    }
    report.monomials = monomials.size();

    auto named = [](const char* identity) {
        IdentityCheck c;
        c.identity = identity;
        return c;
    };
    IdentityCheck homogeneity = named("homogeneity"), base_linear = named("base_linearity"),
                  relations = named("relations");
    for (std::size_t i = 0; i < ring.size(); ++i) {
        auto& g = ring.generator(i);
        ++homogeneity.evaluations;
        if (homogeneity.passed) {
            if (!homogeneous_as(ring, f.d_images()[i], g.weight, g.degree + 1)) {
                homogeneity.passed = false;
                homogeneity.first_failure = g.name;
                homogeneity.value = "d(" + g.name + ") = " + ring.format(f.d_images()[i]);
            } else if (!homogeneous_as(ring, f.eps_images()[i], g.weight + 1, g.degree - 1)) {
                homogeneity.passed = false;
                homogeneity.first_failure = g.name;
                homogeneity.value = "eps(" + g.name + ") = " + ring.format(f.eps_images()[i]);
            }
        }
        if (i < f.base_size())
            record(base_linear, g.name, ring, f.eps_images()[i]);
    }
    for (auto& r : ring.groebner()) {
        record(relations, "d(" + ring.format(r) + ")", ring, f.d(r));
        record(relations, "eps(" + ring.format(r) + ")", ring, f.eps(r));
    }

    IdentityCheck dd = named("d_squared"), ee = named("eps_squared"), anti = named("d_eps_anticommute");
    for (auto& m : monomials) {
        Poly p = Poly::monomial(m);
        Poly dp = f.d(p), ep = f.eps(p);
        std::string where = ring.format(m);
        record(dd, where, ring, f.d(dp));
        record(ee, where, ring, f.eps(ep));
        record(anti, where, ring, f.d(ep) + f.eps(dp));
    }

    IdentityCheck leib_d = named("leibniz_d"), leib_e = named("leibniz_eps");
    const auto bound = window ? window->poly_degree : ~0u;
    for (std::size_t i = 0; i < monomials.size(); ++i) {
        const auto& a = monomials[i];
        if (total_degree(a) == 0)
            continue;
        for (std::size_t j = 0; j < monomials.size(); ++j) {
            const auto& b = monomials[j];
            if (total_degree(b) == 0 || total_degree(a) + total_degree(b) > bound)
                continue;
            Poly pa = Poly::monomial(a), pb = Poly::monomial(b);
            Poly ab = ring.mul(pa, pb);
            Rational sign = ring.odd(a) ? -1 : 1;
            std::string where = ring.format(a) + " * " + ring.format(b);
            record(leib_d, where, ring,
                   f.d(ab) - ring.mul(f.d(pa), pb) - ring.mul(pa, f.d(pb)) * sign);
            record(leib_e, where, ring,
                   f.eps(ab) - ring.mul(f.eps(pa), pb) - ring.mul(pa, f.eps(pb)) * sign);
        }
    }
    report.checks = {homogeneity, base_linear, relations, dd, ee, anti, leib_d, leib_e};
    return report;
}

GmPtr forget_gr(const GradedMixedPresentation& f)
{
    auto data = f.data();
    data.name = f.name() + "^gr";
    data.eps.assign(f.ring().size(), Poly{});
    data.structure = nullptr;
    data.provenance.push_back("forget_gr: mixed differential discarded");
    return GradedMixedPresentation::make(std::move(data));
}

QuasiFreeReport quasi_free_ranks(const GradedMixedPresentation& f, unsigned max_weight)
{
    const Ring& ring = f.ring();
    QuasiFreeReport report;
    std::size_t even = 0, odd = 0;
    std::vector<std::size_t> positive;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        int w = ring.generator(i).weight;
        if (w == 0)
            continue;
        positive.push_back(i);
        if (w == 1)
            (ring.odd(i) ? odd : even) += 1;
    }
    for (auto& r : ring.groebner())
        for (auto& [e, c] : r.terms())
            for (auto i : positive)
                if (e[i] != 0 && report.passed) {
                    report.passed = false;
                    report.reason = "relation involves the positive-weight generator " + ring.generator(i).name;
                }
    // monomials in the positive-weight generators, counted by weight
    for (unsigned n = 1; n <= max_weight; ++n) {
        std::size_t count = 0;
        Exponents cur = ring.unit_exponents();
        std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
            if (k == positive.size()) {
                if (left == 0 && ring.is_standard(cur))
                    ++count;
                return;
            }
            std::size_t g = positive[k];
            int w = ring.generator(g).weight;
            int cap = ring.odd(g) ? 1 : left / w;
            for (int e = 0; e <= cap && e * w <= left; ++e) {
                cur[g] = static_cast<std::uint32_t>(e);
                rec(k + 1, left - e * w);
            }
            cur[g] = 0;
        };
        rec(0, static_cast<int>(n));
        std::size_t expected = sym_rank_formula(even, odd, n);
        report.ranks.emplace_back(count, expected);
        if (count != expected && report.passed) {
            report.passed = false;
            report.reason = fmt::format("weight {}: {} monomials, Sym of weight 1 has rank {}", n, count, expected);
        }
    }
    return report;
}

namespace {

struct LinearLayout {
    std::vector<std::size_t> generators;                 // weight-1 generators in ring order
    std::map<std::size_t, std::pair<int, std::size_t>> slot; // generator -> (L degree, index)
    std::map<int, std::size_t> ranks;
    std::map<int, std::vector<std::string>> labels;
};

LinearLayout linear_layout(const GradedMixedPresentation& f)
{
    LinearLayout out;
    const Ring& ring = f.ring();
    for (std::size_t i = 0; i < ring.size(); ++i) {
        int w = ring.generator(i).weight;
        if (w == 0)
            continue;
        if (w != 1)
            fail(ErrorKind::UnsupportedInput,
                 fmt::format("{} has a generator {} of weight {}", f.name(), ring.generator(i).name, w));
        int k = ring.generator(i).degree + 1;
        out.generators.push_back(i);
        out.slot[i] = {k, out.ranks[k]++};
        out.labels[k].push_back(ring.generator(i).name);
    }
    return out;
}

// Splits a weight-1 polynomial into owner coefficients of weight-1 generators.
std::map<std::size_t, Poly> linear_coefficients(const GradedMixedPresentation& f, const Poly& p,
                                                const AlgebraMap& projection)
{
    const Ring& ring = f.ring();
    const std::size_t m = projection.source()->ring().size();
    std::map<std::size_t, Poly> out;
    for (auto& [e, c] : p.terms()) {
        std::size_t which = ring.size();
        for (std::size_t i = m; i < ring.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (which != ring.size() || e[i] != 1 || ring.generator(i).weight != 1)
                fail(ErrorKind::UnsupportedInput,
                     fmt::format("{} is not linear in the weight-1 generators", ring.format(p)));
            which = i;
        }
        if (which == ring.size())
            fail(ErrorKind::UnsupportedInput, fmt::format("{} has a weight-0 term", ring.format(p)));
        // the weight-1 generator sits after the weight-0 part, so no sign
        Exponents low(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(m));
        out[which] += projection.apply(Poly::monomial(low, c));
    }
    return out;
}

} // namespace

PerfectComplex weight_one_complex(const GradedMixedPresentation& f)
{
    auto layout = linear_layout(f);
    AlgebraMap proj = f.projection();
    std::map<int, PolyMatrix> diffs;
    for (auto& [k, r] : layout.ranks)
        if (layout.ranks.count(k + 1))
            diffs[k] = PolyMatrix(layout.ranks[k + 1], r);
    for (auto g : layout.generators) {
        auto [k, j] = layout.slot[g];
        for (auto& [h, coeff] : linear_coefficients(f, f.d_images()[g], proj)) {
            auto [k2, i] = layout.slot.at(h);
            if (k2 != k + 1)
                fail(ErrorKind::InvalidInput, "internal differential is not of degree +1");
            diffs[k](i, j) -= coeff;
        }
    }
    return PerfectComplex(f.owner(), layout.ranks, diffs, layout.labels);
}

std::vector<Poly> linear_column(const GradedMixedPresentation& f, const Poly& p, int k)
{
    auto layout = linear_layout(f);
    std::vector<Poly> out(layout.ranks.count(k) ? layout.ranks[k] : 0);
    for (auto& [h, coeff] : linear_coefficients(f, p, f.projection())) {
        auto [k2, i] = layout.slot.at(h);
        if (k2 != k)
            fail(ErrorKind::InvalidInput, fmt::format("{} is not of degree {}", f.ring().format(p), k - 1));
        out[i] += coeff;
    }
    return out;
}

ChainMap weight_one_map(const GmMap& g)
{
    const auto& s = *g.source();
    const auto& t = *g.target();
    if (s.owner() != t.owner())
        fail(ErrorKind::IncompatibleOwner, "linear parts live over different owners");
    auto ls = linear_layout(s);
    auto lt = linear_layout(t);
    AlgebraMap proj = t.projection();
    std::map<int, PolyMatrix> comps;
    for (auto& [k, r] : ls.ranks)
        comps[k] = PolyMatrix(lt.ranks.count(k) ? lt.ranks[k] : 0, r);
    for (auto gen : ls.generators) {
        auto [k, j] = ls.slot[gen];
        for (auto& [h, coeff] : linear_coefficients(t, g.images()[gen], proj)) {
            auto [k2, i] = lt.slot.at(h);
            if (k2 != k)
                fail(ErrorKind::InvalidInput, "map does not preserve degree");
            comps[k](i, j) += coeff;
        }
    }
    return ChainMap(weight_one_complex(s), weight_one_complex(t), std::move(comps));
}

GmMap canonical_structure(const GmPtr& de_rham, const GmPtr& f)
{
    const Ring& s = de_rham->ring();
    const Ring& t = f->ring();
    std::vector<Poly> images(s.size());
    std::vector<bool> done(s.size(), false);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.generator(i).weight != 0)
            continue;
        auto j = t.index_of(s.generator(i).name);
        if (!j)
            fail(ErrorKind::IncompatibleOwner,
                 fmt::format("{} has no generator {}", f->name(), s.generator(i).name));
        images[i] = t.var(*j);
        done[i] = true;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!done[i])
            continue;
        const Poly& e = de_rham->eps_images()[i];
        if (e.size() != 1 || e.leading_coefficient() != 1 || total_degree(e.leading_monomial()) != 1)
            continue;
        auto& lm = e.leading_monomial();
        std::size_t j = static_cast<std::size_t>(std::find(lm.begin(), lm.end(), 1u) - lm.begin());
        images[j] = f->eps(images[i]);
        done[j] = true;
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        if (!done[i])
            fail(ErrorKind::InvalidInput,
                 fmt::format("{} is not a de Rham algebra: {} is not a differential", de_rham->name(),
                             s.generator(i).name));
    return GmMap("str_" + f->name(), de_rham, f, std::move(images));
}

GmPtr pushforward_gm(const GmPtr& f, const GmMap& g)
{
    auto reason = g.defect();
    if (!reason.empty())
        fail(ErrorKind::NotAMap, fmt::format("{} is not a map of graded mixed algebras: {}", g.name(), reason));
    GmMap str = f->structure() ? *f->structure() : canonical_structure(g.target(), f);
    if (str.source() != g.target())
        fail(ErrorKind::IncompatibleOwner,
             fmt::format("{} is not a de Rham algebra over {}", g.target()->name(), f->name()));
    if (g.is_identity())
        return f;
    auto data = f->data();
    data.name = f->name() + "_push";
    data.owner = g.source()->owner();
    data.structure = std::make_shared<GmMap>(g.then(str));
    data.provenance.push_back(fmt::format("push-forward along {}: structure restricted, data unchanged", g.name()));
    return GradedMixedPresentation::make(std::move(data));
}

GmPtr pullback_gm(const GmPtr& f, const GmMap& g, PullbackLayout* layout)
{
    if (g.is_identity())
        return f;
    auto reason = g.defect();
    if (!reason.empty())
        fail(ErrorKind::NotAMap, fmt::format("{} is not a map of graded mixed algebras: {}", g.name(), reason));
    if (!f->quasi_free())
        fail(ErrorKind::UnsupportedInput,
             fmt::format("{} is not quasi-free; resolving it is not supported", f->name()));
    if (f->structure() || f->model() != f->owner())
        fail(ErrorKind::UnsupportedInput,
             fmt::format("{} must be presented strictly over its own base to be pulled back", f->name()));
    const GmPtr& src = g.source();
    const GmPtr& tgt = g.target();
    if (src->owner() != f->owner())
        fail(ErrorKind::IncompatibleOwner,
             fmt::format("{} is over {}, the map starts at {}", f->name(), f->owner()->name(), src->owner()->name()));
    const Ring& rf = f->ring();
    const Ring& rs = src->ring();
    const Ring& rt = tgt->ring();
    const AlgebraPtr& b = f->owner();
    const std::size_t base = f->base_size();
    if (tgt->base_size() != base)
        fail(ErrorKind::UnsupportedInput, "base change must keep the base algebra");
    for (std::size_t i = 0; i < base; ++i) {
        if (rt.generator(i).name != rf.generator(i).name ||
            !(g.images()[i] == rt.var(i)))
            fail(ErrorKind::UnsupportedInput, "base change must be the identity on the base algebra");
    }
    for (std::size_t i = base; i < b->ring().size(); ++i)
        if (!b->differential()[i].is_zero())
            fail(ErrorKind::UnsupportedInput,
                 fmt::format("{} is a dg presentation; only polynomial sources are supported", b->name()));

    const std::size_t n_src = b->ring().size() - base; // own generators x of B
    const std::size_t t_model = tgt->model()->ring().size();
    std::set<std::string> used;
    std::vector<Generator> gens;
    auto add = [&](std::string name, int degree, int weight) {
        while (used.count(name))
            name += "'";
        used.insert(name);
        gens.push_back({name, degree, weight});
        return gens.size() - 1;
    };
    std::vector<std::size_t> t_index(rt.size()), f_index(rf.size());
    for (std::size_t i = 0; i < t_model; ++i)
        t_index[i] = add(rt.generator(i).name, rt.generator(i).degree, 0);
    for (std::size_t i = 0; i < base; ++i)
        f_index[i] = t_index[i];
    for (std::size_t k = 0; k < n_src; ++k) {
        auto& x = rf.generator(base + k);
        f_index[base + k] = add("u_" + x.name, x.degree, 0);
    }
    std::vector<std::size_t> k_index(n_src), dk_index(n_src);
    for (std::size_t k = 0; k < n_src; ++k) {
        auto& x = rf.generator(base + k);
        k_index[k] = add("k_" + x.name, x.degree - 1, 0);
    }
    const std::size_t model_size = gens.size();
    for (std::size_t i = t_model; i < rt.size(); ++i)
        t_index[i] = add(rt.generator(i).name, rt.generator(i).degree, rt.generator(i).weight);
    for (std::size_t i = b->ring().size(); i < rf.size(); ++i) {
        if (rf.generator(i).weight == 0)
            fail(ErrorKind::UnsupportedInput,
                 fmt::format("{} has extra weight-0 generator {}", f->name(), rf.generator(i).name));
        f_index[i] = add(rf.generator(i).name, rf.generator(i).degree, rf.generator(i).weight);
    }
    for (std::size_t k = 0; k < n_src; ++k) {
        auto& x = rf.generator(base + k);
        dk_index[k] = add("dk_" + x.name, x.degree - 2, 1);
    }
    const std::size_t n = gens.size();

    Ring free(gens);
    std::vector<Poly> emb_t(rt.size()), emb_f(rf.size());
    for (std::size_t i = 0; i < rt.size(); ++i)
        emb_t[i] = free.var(t_index[i]);
    for (std::size_t i = 0; i < rf.size(); ++i)
        emb_f[i] = free.var(f_index[i]);
    std::vector<Poly> relations;
    for (auto& r : rt.groebner())
        relations.push_back(rt.substitute(r, emb_t, free));
    for (auto& r : rf.groebner())
        relations.push_back(rf.substitute(r, emb_f, free));
    auto ring = std::make_shared<Ring>(gens, relations);
    auto to_t = [&](const Poly& p) { return rt.substitute(p, emb_t, *ring); };
    auto to_f = [&](const Poly& p) { return rf.substitute(p, emb_f, *ring); };

    std::vector<Poly> d(n), eps(n);
    for (std::size_t i = 0; i < rt.size(); ++i) {
        d[t_index[i]] = to_t(tgt->d_images()[i]);
        eps[t_index[i]] = to_t(tgt->eps_images()[i]);
    }
    for (std::size_t i = base; i < rf.size(); ++i) {
        d[f_index[i]] = to_f(f->d_images()[i]);
        eps[f_index[i]] = to_f(f->eps_images()[i]);
    }
    for (std::size_t k = 0; k < n_src; ++k) {
        const std::string& xname = rf.generator(base + k).name;
        auto xs = rs.index_of(xname);
        if (!xs)
            fail(ErrorKind::IncompatibleOwner, fmt::format("{} has no generator {}", src->name(), xname));
        Poly gx = to_t(g.images()[*xs]);
        Poly u = ring->var(f_index[base + k]);
        d[k_index[k]] = u - gx;
        eps[k_index[k]] = ring->var(dk_index[k]);
        // d(dk) = -eps(u - g(x)): glues str(dx) to the de Rham differential of g(x)
        d[dk_index[k]] = -(to_f(f->eps_images()[base + k]) - to_t(tgt->eps(g.images()[*xs])));
    }

    // weight-0 model over the base: B' model generators, u_x, k_x
    std::vector<Generator> own(gens.begin() + static_cast<std::ptrdiff_t>(base),
                               gens.begin() + static_cast<std::ptrdiff_t>(model_size));
    std::vector<Poly> model_d(model_size);
    std::vector<Poly> model_rel;
    for (std::size_t i = 0; i < model_size; ++i) {
        Poly p;
        for (auto& [e, c] : d[i].terms())
            p.add_term(Exponents(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(model_size)), c);
        model_d[i] = p;
    }
    for (auto& r : tgt->model()->own_relations()) {
        Poly p;
        for (auto& [e, c] : r.terms()) {
            Exponents x = e;
            x.resize(model_size, 0);
            p.add_term(x, c);
        }
        model_rel.push_back(p);
    }
    AlgebraPtr a = tgt->model()->base();
    auto model = AlgebraPresentation::make(tgt->model()->name() + "_res", a, own, model_rel, model_d);

    // model -> B': B' model generators project as in the target, u_x -> g(x), k_x -> 0
    AlgebraMap tproj = tgt->projection();
    std::vector<Poly> projection(model_size);
    for (std::size_t i = 0; i < t_model; ++i)
        projection[t_index[i]] = tproj.images()[i];
    for (std::size_t k = 0; k < n_src; ++k) {
        auto xs = rs.index_of(rf.generator(base + k).name);
        Poly gx;
        for (auto& [e, c] : g.images()[*xs].terms())
            gx.add_term(Exponents(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(t_model)), c);
        projection[f_index[base + k]] = tproj.apply(gx);
    }

    if (layout)
        *layout = {t_index, f_index, k_index, dk_index};
    GradedMixedPresentation::Data data;
    data.projection = std::move(projection);
    data.name = f->name() + "_pull";
    data.owner = tgt->owner();
    data.model = model;
    data.base_size = base;
    data.ring = ring;
    data.d = std::move(d);
    data.eps = std::move(eps);
    data.quasi_free = true;
    data.provenance = f->provenance();
    data.provenance.push_back(fmt::format(
        "pull-back along {}: weight 0 is {}[u, k] with d(k_x) = u_x - g(x), a semi-free model of {}",
        g.name(), tgt->model()->name(), tgt->owner()->name()));
    return GradedMixedPresentation::make(std::move(data));
}

} // namespace folwerk
