#include "folwerk/pushforward.hpp"

#include "folwerk/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <random>
#include <set>

namespace folwerk {

namespace {

std::size_t ring_size(const AlgebraPtr& a)
{
    return a ? a->ring().size() : 0;
}

bool over_rationals(const AlgebraPtr& a)
{
    return !a->base() || a->base()->ring().size() == 0;
}

Coords unit_vector(std::size_t n, std::size_t i, const Ring& k)
{
    Coords out(n);
    out[i] = k.one();
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// FiniteFreeMap

FiniteFreeMap FiniteFreeMap::make(std::string name, AlgebraPtr base, std::vector<std::string> basis,
                                  std::map<std::pair<std::size_t, std::size_t>, Coords> table)
{
    if (!base)
        base = AlgebraPresentation::rationals();
    if (basis.empty() || basis[0] != "1")
        fail(ErrorKind::InvalidInput, fmt::format("basis of {} must start with 1", name));
    if (!base->concentrated_in_degree_zero())
        fail(ErrorKind::UnsupportedInput, fmt::format("{} needs a base concentrated in degree 0", name));
    const std::size_t n = basis.size();
    const Ring& a = base->ring();
    FiniteFreeMap out;
    out.name_ = std::move(name);
    out.base_ = base;
    out.basis_ = std::move(basis);
    out.table_.assign(n, std::vector<Coords>(n));
    for (std::size_t i = 0; i < n; ++i) {
        out.table_[0][i] = unit_vector(n, i, a);
        out.table_[i][0] = unit_vector(n, i, a);
    }
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            auto it = table.find({i, j});
            if (it == table.end())
                it = table.find({j, i});
            if (it == table.end())
                fail(ErrorKind::InvalidInput, fmt::format("{}: product {}*{} is not given", out.name_,
                                                          out.basis_[i], out.basis_[j]));
            Coords c = it->second;
            if (c.size() != n)
                fail(ErrorKind::InvalidInput, fmt::format("{}: product {}*{} needs {} coordinates", out.name_,
                                                          out.basis_[i], out.basis_[j], n));
            for (auto& p : c)
                p = a.reduce(resize_poly(p, a.size()));
            out.table_[i][j] = c;
            out.table_[j][i] = c;
        }
    if (auto reason = out.defect(); !reason.empty())
        fail(ErrorKind::InvalidInput, fmt::format("{}: {}", out.name_, reason));

    std::vector<Generator> gens;
    for (std::size_t i = 1; i < n; ++i)
        gens.push_back({out.basis_[i], 0, 0});
    const std::size_t total = a.size() + n - 1;
    Ring free([&] {
        std::vector<Generator> all = a.generators();
        all.insert(all.end(), gens.begin(), gens.end());
        return all;
    }());
    auto b = [&](std::size_t i) { return i == 0 ? free.one() : free.var(a.size() + i - 1); };
    std::vector<Poly> relations;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Poly r = free.mul(b(i), b(j));
            for (std::size_t k = 0; k < n; ++k)
                if (!out.table_[i][j][k].is_zero())
                    r -= free.mul(resize_poly(out.table_[i][j][k], total), b(k));
            relations.push_back(r);
        }
    out.algebra_ = AlgebraPresentation::make(out.name_ + "_B", base, gens, relations);
    return out;
}

FiniteFreeMap FiniteFreeMap::parse(std::string name, AlgebraPtr base, std::vector<std::string> basis,
                                   const std::vector<std::string>& products)
{
    if (!base)
        base = AlgebraPresentation::rationals();
    const Ring& a = base->ring();
    const std::size_t n = basis.size();
    if (n == 0 || basis[0] != "1")
        fail(ErrorKind::InvalidInput, fmt::format("basis of {} must start with 1", name));
    std::vector<Generator> all = a.generators();
    for (std::size_t i = 1; i < n; ++i)
        all.push_back({basis[i], 0, 0});
    Ring free(all);
    std::map<std::pair<std::size_t, std::size_t>, Coords> table;
    for (auto& text : products) {
        auto eq = text.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::Syntax, fmt::format("{}: product '{}' has no '='", name, text));
        Poly lhs = parse_poly(free, text.substr(0, eq));
        Poly rhs = parse_poly(free, text.substr(eq + 1));
        // lhs must be b_i*b_j
        if (lhs.size() != 1 || lhs.leading_coefficient() != 1)
            fail(ErrorKind::Syntax, fmt::format("{}: '{}' is not a product of two basis elements", name, text));
        std::vector<std::size_t> factors;
        const Exponents& e = lhs.leading_monomial();
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (e[v] > 0 && v < a.size())
                fail(ErrorKind::Syntax, fmt::format("{}: '{}' is not a product of basis elements", name, text));
            for (unsigned k = 0; k < e[v]; ++k)
                factors.push_back(v - a.size() + 1);
        }
        if (factors.size() != 2)
            fail(ErrorKind::Syntax, fmt::format("{}: '{}' is not a product of two basis elements", name, text));
        Coords c(n);
        for (auto& [m, coeff] : rhs.terms()) {
            std::size_t which = 0;
            Exponents low(a.size(), 0);
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0)
                    continue;
                if (v < a.size()) {
                    low[v] = m[v];
                    continue;
                }
                if (which != 0 || m[v] != 1)
                    fail(ErrorKind::Syntax, fmt::format("{}: '{}' is not linear in the basis", name, text));
                which = v - a.size() + 1;
            }
            c[which].add_term(low, coeff);
        }
        table[{factors[0], factors[1]}] = c;
    }
    return make(std::move(name), base, std::move(basis), std::move(table));
}

Coords FiniteFreeMap::multiply(const Coords& x, const Coords& y, const Ring& k) const
{
    const std::size_t n = rank();
    Coords out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i].is_zero())
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (y[j].is_zero())
                continue;
            Poly xy = k.mul(x[i], y[j]);
            for (std::size_t l = 0; l < n; ++l)
                if (!table_[i][j][l].is_zero())
                    out[l] += k.mul(xy, resize_poly(table_[i][j][l], k.size()));
        }
    }
    for (auto& p : out)
        p = k.reduce(p);
    return out;
}

Coords evaluate_in(const Ring& source, const Poly& p, const std::vector<Coords>& images,
                   const FiniteFreeMap& algebra, const Ring& k)
{
    const std::size_t n = algebra.rank();
    Coords out(n);
    for (auto& [e, c] : p.terms()) {
        Coords acc(n);
        acc[0] = k.constant(c);
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0)
                continue;
            if (source.generator(v).degree != 0)
                fail(ErrorKind::UnsupportedInput,
                     fmt::format("cannot evaluate {} of nonzero degree", source.generator(v).name));
            for (unsigned r = 0; r < e[v]; ++r)
                acc = algebra.multiply(acc, images[v], k);
        }
        for (std::size_t i = 0; i < n; ++i)
            out[i] += acc[i];
    }
    for (auto& q : out)
        q = k.reduce(q);
    return out;
}

Coords FiniteFreeMap::coordinates(const Poly& p) const
{
    const Ring& a = base_->ring();
    const Ring& b = algebra_->ring();
    std::vector<Coords> images(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        images[i] = Coords(rank());
        images[i][0] = a.var(i);
    }
    for (std::size_t i = 1; i < rank(); ++i)
        images[basis_generator(i)] = unit_vector(rank(), i, a);
    return evaluate_in(b, p, images, *this, a);
}

PolyMatrix FiniteFreeMap::multiplication_matrix(const Poly& p) const
{
    const Ring& a = base_->ring();
    const std::size_t n = rank();
    Coords x = coordinates(p);
    PolyMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Coords col = multiply(x, unit_vector(n, j, a), a);
        for (std::size_t i = 0; i < n; ++i)
            m(i, j) = col[i];
    }
    return m;
}

FiniteFreeMap FiniteFreeMap::base_change(const AlgebraMap& g, std::string name) const
{
    if (g.source() != base_ && !(ring_size(g.source()) == 0 && base_->ring().size() == 0))
        fail(ErrorKind::IncompatibleOwner, fmt::format("{} does not start at the base of {}", g.name(), name_));
    std::map<std::pair<std::size_t, std::size_t>, Coords> table;
    for (std::size_t i = 1; i < rank(); ++i)
        for (std::size_t j = i; j < rank(); ++j) {
            Coords c;
            for (auto& p : table_[i][j])
                c.push_back(g.apply(p));
            table[{i, j}] = c;
        }
    return make(name.empty() ? name_ + "'" : std::move(name), g.target(), basis_, std::move(table));
}

std::string FiniteFreeMap::defect() const
{
    const Ring& a = base_->ring();
    const std::size_t n = rank();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!(table_[i][j] == table_[j][i]))
                return fmt::format("{}*{} is not commutative", basis_[i], basis_[j]);
            for (std::size_t k = 0; k < n; ++k) {
                Coords left = multiply(table_[i][j], unit_vector(n, k, a), a);
                Coords right = multiply(unit_vector(n, i, a), table_[j][k], a);
                if (!(left == right))
                    return fmt::format("({}*{})*{} differs from {}*({}*{})", basis_[i], basis_[j], basis_[k],
                                       basis_[i], basis_[j], basis_[k]);
            }
        }
    return {};
}

// ---------------------------------------------------------------------------
// Weil restriction

WeilRestriction weil_restrict(const AlgebraPtr& c, const FiniteFreeMap& f)
{
    if (c->base() != f.algebra())
        fail(ErrorKind::IncompatibleOwner,
             fmt::format("{} is not presented over {}", c->name(), f.algebra()->name()));
    if (c->is_dg())
        fail(ErrorKind::UnsupportedInput, fmt::format("{} is a dg algebra", c->name()));
    const Ring& a = f.base()->ring();
    const Ring& cr = c->ring();
    const std::size_t n = f.rank();
    for (std::size_t k = 0; k < c->own_size(); ++k)
        if (cr.generator(c->own_index(k)).degree != 0)
            fail(ErrorKind::UnsupportedInput, fmt::format("{} has generators of nonzero degree", c->name()));

    WeilRestriction w;
    w.map = f;
    w.source = c;
    std::set<std::string> used;
    for (auto& g : a.generators())
        used.insert(g.name);
    std::vector<Generator> zgens;
    w.coordinates.assign(c->own_size(), {});
    for (std::size_t k = 0; k < c->own_size(); ++k)
        for (std::size_t i = 0; i < n; ++i) {
            std::string name = cr.generator(c->own_index(k)).name + std::to_string(i);
            while (!used.insert(name).second)
                name += "'";
            w.coordinates[k].push_back(a.size() + zgens.size());
            zgens.push_back({name, 0, 0});
        }
    std::vector<Generator> all = a.generators();
    all.insert(all.end(), zgens.begin(), zgens.end());
    std::vector<Poly> arel;
    for (auto& r : a.groebner())
        arel.push_back(resize_poly(r, all.size()));
    Ring work(all, arel);

    std::vector<Coords> images(cr.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        images[i] = Coords(n);
        images[i][0] = work.var(i);
    }
    for (std::size_t i = 1; i < n; ++i)
        images[a.size() + i - 1] = unit_vector(n, i, work);
    for (std::size_t k = 0; k < c->own_size(); ++k) {
        Coords z(n);
        for (std::size_t i = 0; i < n; ++i)
            z[i] = work.var(w.coordinates[k][i]);
        images[c->own_index(k)] = z;
    }
    std::vector<Poly> relations;
    for (auto& r : c->own_relations())
        for (auto& coeff : evaluate_in(cr, r, images, f, work))
            if (!coeff.is_zero())
                relations.push_back(coeff);
    w.result = AlgebraPresentation::make(f.name() + "_*" + c->name(), f.base(), zgens, relations);
    w.pi = f.base_change(AlgebraMap::structure(w.result), "pi_" + f.name());

    // ev : C -> f_*C ⊗ B
    const AlgebraPtr& pb = w.pi.algebra();
    const Ring& pr = pb->ring();
    std::vector<Poly> ev(cr.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        ev[i] = pr.var(i);
    for (std::size_t i = 1; i < n; ++i)
        ev[a.size() + i - 1] = pr.var(w.pi.basis_generator(i));
    for (std::size_t k = 0; k < c->own_size(); ++k) {
        Poly sum;
        for (std::size_t i = 0; i < n; ++i) {
            Poly z = pr.var(w.coordinates[k][i]);
            sum += i == 0 ? z : pr.mul(z, pr.var(w.pi.basis_generator(i)));
        }
        ev[c->own_index(k)] = pr.reduce(sum);
    }
    w.counit = AlgebraMap("ev", c, pb, std::move(ev));
    w.counit.validate();
    return w;
}

AlgebraPtr fibre_product(const FiniteFreeMap& x, const AlgebraPtr& y)
{
    if (ring_size(y->base()) != x.base()->ring().size() || x.base()->ring().size() != 0)
        fail(ErrorKind::UnsupportedInput, "mapping schemes are built over S = Spec Q");
    const Ring& yr = y->ring();
    const Ring& br = x.algebra()->ring();
    std::vector<Generator> own;
    for (std::size_t k = 0; k < y->own_size(); ++k)
        own.push_back(yr.generator(y->own_index(k)));
    const std::size_t total = br.size() + own.size();
    std::vector<Poly> relations;
    for (auto& r : y->own_relations()) {
        Poly p;
        for (auto& [e, c] : r.terms()) {
            Exponents m(total, 0);
            for (std::size_t v = 0; v < e.size(); ++v)
                m[br.size() + v] = e[v];
            p.add_term(m, c);
        }
        relations.push_back(p);
    }
    return AlgebraPresentation::make(x.algebra()->name() + "x" + y->name(), x.algebra(), own, relations);
}

WeilRestriction mapping_scheme(const FiniteFreeMap& x, const AlgebraPtr& y)
{
    return weil_restrict(fibre_product(x, y), x);
}

// ---------------------------------------------------------------------------
// functor of points

bool PointsReport::bijection() const
{
    return ideals_equal && lhs_points == rhs_points && round_trip;
}

namespace {

// B ⊗ T over Q, basis index i * dim T + a.
FiniteFreeMap tensor_algebra(const FiniteFreeMap& b, const FiniteFreeMap& t)
{
    const std::size_t n = b.rank(), d = t.rank();
    std::vector<std::string> basis{"1"};
    for (std::size_t p = 1; p < n * d; ++p)
        basis.push_back(fmt::format("u{}_{}", p / d, p % d));
    Ring q({});
    std::map<std::pair<std::size_t, std::size_t>, Coords> table;
    for (std::size_t p = 1; p < n * d; ++p)
        for (std::size_t r = p; r < n * d; ++r) {
            std::size_t i = p / d, a = p % d, j = r / d, c = r % d;
            Coords out(n * d);
            const Coords& bb = b.product(i, j);
            const Coords& tt = t.product(a, c);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < d; ++l)
                    out[k * d + l] = q.mul(bb[k], tt[l]);
            table[{p, r}] = out;
        }
    return FiniteFreeMap::make(b.name() + "x" + t.name(), AlgebraPresentation::rationals(), basis, table);
}

struct Census {
    std::string shape;
    std::optional<std::size_t> points;
};

Census census(const Ring& r)
{
    if (r.is_unit_ideal())
        return {"empty", 0};
    if (auto basis = r.finite_basis())
        return {"finite", basis->size()};
    return {"positive-dimensional", std::nullopt};
}

} // namespace

PointsReport check_functor_of_points(const WeilRestriction& w, const FiniteFreeMap& t, unsigned samples)
{
    if (w.map.base()->ring().size() != 0 || t.base()->ring().size() != 0)
        fail(ErrorKind::UnsupportedInput, "points are enumerated over finite algebras over Q");
    const AlgebraPtr& c = w.source;
    const Ring& cr = c->ring();
    const Ring& rr = w.result->ring();
    const std::size_t m = c->own_size(), n = w.map.rank(), d = t.rank();
    PointsReport out;
    out.test_algebra = t.name();
    out.test_dimension = d;

    std::vector<Generator> vars;
    auto idx = [&](std::size_t g, std::size_t i, std::size_t a) { return (g * n + i) * d + a; };
    for (std::size_t g = 0; g < m; ++g)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < d; ++a)
                vars.push_back({fmt::format("{}_{}", rr.generator(w.coordinates[g][i]).name, a), 0, 0});
    Ring v(vars);

    // maps f_*C -> T: z_{g,i} -> sum_a w_{g,i,a} t_a
    std::vector<Coords> lhs_images(rr.size());
    for (std::size_t g = 0; g < m; ++g)
        for (std::size_t i = 0; i < n; ++i) {
            Coords z(d);
            for (std::size_t a = 0; a < d; ++a)
                z[a] = v.var(idx(g, i, a));
            lhs_images[w.coordinates[g][i]] = z;
        }
    std::vector<Poly> lhs;
    for (auto& r : w.result->own_relations())
        for (auto& e : evaluate_in(rr, r, lhs_images, t, v))
            if (!e.is_zero())
                lhs.push_back(e);

    // maps C -> T ⊗ B: g -> sum_{i,a} w_{g,i,a} b_i t_a
    FiniteFreeMap bt = tensor_algebra(w.map, t);
    std::vector<Coords> rhs_images(cr.size());
    for (std::size_t i = 1; i < n; ++i)
        rhs_images[i - 1] = unit_vector(n * d, i * d, v);
    for (std::size_t g = 0; g < m; ++g) {
        Coords x(n * d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < d; ++a)
                x[i * d + a] = v.var(idx(g, i, a));
        rhs_images[c->own_index(g)] = x;
    }
    std::vector<Poly> rhs;
    for (auto& r : c->own_relations())
        for (auto& e : evaluate_in(cr, r, rhs_images, bt, v))
            if (!e.is_zero())
                rhs.push_back(e);

    out.lhs_equations = lhs.size();
    out.rhs_equations = rhs.size();
    // both systems extract the same coefficients, so the generating sets
    // usually agree verbatim; Groebner bases decide otherwise
    auto contains = [](const std::vector<Poly>& xs, const Poly& p) {
        return std::find(xs.begin(), xs.end(), p) != xs.end();
    };
    bool same_generators = lhs.size() == rhs.size() &&
                           std::all_of(lhs.begin(), lhs.end(), [&](const Poly& p) { return contains(rhs, p); }) &&
                           std::all_of(rhs.begin(), rhs.end(), [&](const Poly& p) { return contains(lhs, p); });
    std::optional<Ring> left, right;
    try {
        left.emplace(vars, lhs);
        right.emplace(vars, same_generators ? lhs : rhs);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded || !same_generators)
            throw;
    }
    out.ideals_equal = same_generators || left->groebner() == right->groebner();
    if (!left) {
        out.shape = "undetermined";
        return out;
    }
    auto lc = census(*left), rc = census(*right);
    out.shape = lc.shape == rc.shape ? lc.shape : lc.shape + "/" + rc.shape;
    out.lhs_points = lc.points;
    out.rhs_points = rc.points;

    // sampled points of a free solution set, sent across and back through ev
    if (lc.shape == "positive-dimensional" && left->groebner().empty() && right->groebner().empty()) {
        std::mt19937 rng(20261019u);
        std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
        Ring q({});
        const Ring& pr = w.pi.algebra()->ring();
        for (unsigned s = 0; s < samples; ++s) {
            std::vector<Rational> value(vars.size());
            for (auto& x : value)
                x = Rational(num(rng), den(rng));
            // psi : f_*C -> T and phi : C -> T ⊗ B
            std::vector<Coords> psi(pr.size()), phi(cr.size());
            for (std::size_t i = 1; i < n; ++i)
                psi[w.pi.basis_generator(i)] = unit_vector(n * d, i * d, q);
            for (std::size_t g = 0; g < m; ++g) {
                Coords x(n * d);
                for (std::size_t i = 0; i < n; ++i) {
                    Coords zi(n * d);
                    for (std::size_t a = 0; a < d; ++a) {
                        zi[a] = q.constant(value[idx(g, i, a)]);
                        x[i * d + a] = q.constant(value[idx(g, i, a)]);
                    }
                    psi[w.coordinates[g][i]] = zi;
                }
                phi[c->own_index(g)] = x;
            }
            for (std::size_t i = 1; i < n; ++i)
                phi[i - 1] = unit_vector(n * d, i * d, q);
            // (psi ⊗ B) ∘ ev must give phi back on every generator of C
            for (std::size_t g = 0; g < m; ++g) {
                Coords back = evaluate_in(pr, w.counit.images()[c->own_index(g)], psi, bt, q);
                if (!(back == phi[c->own_index(g)]))
                    out.round_trip = false;
            }
            for (auto& r : c->own_relations())
                for (auto& e : evaluate_in(cr, r, phi, bt, q))
                    if (!e.is_zero())
                        out.round_trip = false;
            ++out.samples;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// f_+

PerfectComplex restrict_scalars(const PerfectComplex& e, const FiniteFreeMap& f)
{
    if (e.owner() != f.algebra())
        fail(ErrorKind::IncompatibleOwner,
             fmt::format("complex over {} restricted along {}", e.owner()->name(), f.name()));
    const std::size_t n = f.rank();
    std::map<int, std::size_t> ranks;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, PolyMatrix> diffs;
    for (int k : e.degrees()) {
        ranks[k] = e.rank(k) * n;
        for (auto& l : e.labels(k))
            for (std::size_t j = 0; j < n; ++j)
                labels[k].push_back(l + std::to_string(j));
        if (e.rank(k + 1) == 0)
            continue;
        PolyMatrix d = e.differential(k);
        PolyMatrix m(d.rows() * n, d.cols() * n);
        for (std::size_t r = 0; r < d.rows(); ++r)
            for (std::size_t c = 0; c < d.cols(); ++c) {
                if (d(r, c).is_zero())
                    continue;
                PolyMatrix block = f.multiplication_matrix(d(r, c));
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        m(r * n + i, c * n + j) = block(i, j);
            }
        diffs[k] = m;
    }
    return PerfectComplex(f.base(), ranks, diffs, labels);
}

PerfectComplex f_plus(const PerfectComplex& e, const FiniteFreeMap& f)
{
    return dual(restrict_scalars(dual(e), f));
}

namespace {

// Strips the dual markers f_plus leaves on labels ("dz^0^" -> "dz0").
PerfectComplex clean_labels(const PerfectComplex& c)
{
    std::map<int, std::size_t> ranks;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, PolyMatrix> diffs;
    for (int k : c.degrees()) {
        ranks[k] = c.rank(k);
        for (auto l : c.labels(k)) {
            std::string out;
            for (char ch : l)
                if (ch != '^')
                    out += ch;
            labels[k].push_back(out);
        }
        if (c.rank(k + 1) > 0)
            diffs[k] = c.differential(k);
    }
    return PerfectComplex(c.owner(), ranks, diffs, labels);
}

} // namespace

PerfectComplex pushforward_cotangent(const PerfectComplex& l, const WeilRestriction& w)
{
    return clean_labels(f_plus(base_change(l, w.counit), w.pi));
}

PushedFoliation pushforward_foliation(const FoliationPtr& f, const FiniteFreeMap& map, std::string name)
{
    const GradedMixedPresentation& gm = *f->gm();
    if (!gm.strict_weight_zero())
        fail(ErrorKind::UnsupportedInput,
             fmt::format("{} is not presented strictly over {}", f->name(), f->owner()->name()));
    for (std::size_t i = 0; i < gm.ring().size(); ++i)
        if (gm.ring().generator(i).weight == 1 && !gm.eps_images()[i].is_zero())
            fail(ErrorKind::UnsupportedInput,
                 fmt::format("{}: eps on the cotangent generator {} is not transported by push-forward",
                             f->name(), gm.ring().generator(i).name));
    PushedFoliation out;
    out.restriction = weil_restrict(f->owner(), map);
    const WeilRestriction& w = out.restriction;
    PerfectComplex l = pushforward_cotangent(f->cotangent(), w);
    const std::size_t n = map.rank();

    // eps(z_{g,i}) pairs with e_l^v b_j to coord_i(b_j ev^*(eps_F(g))_l)
    const AlgebraPtr& r = w.result;
    CotangentModel base = cotangent_lci(r);
    const Ring& pr = w.pi.algebra()->ring();
    PolyMatrix a0(l.rank(0), base.complex.rank(0));
    const AlgebraPtr& c = f->owner();
    for (std::size_t k = 0; k < c->own_size(); ++k) {
        std::vector<Poly> x = linear_column(gm, gm.eps(gm.ring().var(c->own_index(k))), 0);
        for (std::size_t lidx = 0; lidx < x.size(); ++lidx) {
            Poly xl = w.counit.apply(x[lidx]);
            for (std::size_t j = 0; j < n; ++j) {
                Poly bj = j == 0 ? pr.one() : pr.var(w.pi.basis_generator(j));
                Coords coords = w.pi.coordinates(pr.mul(bj, xl));
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t col = base.differentials[w.coordinates[k][i] - r->base_size()];
                    a0(lidx * n + j, col) = coords[i];
                }
            }
        }
    }
    std::map<int, PolyMatrix> comps;
    for (int k : base.complex.degrees())
        comps[k] = k == 0 ? a0 : PolyMatrix(l.rank(k), base.complex.rank(k));
    CustomFoliationSpec spec;
    spec.name = name.empty() ? map.name() + "_*" + f->name() : std::move(name);
    spec.owner = r;
    spec.cotangent = l;
    spec.anchor = ChainMap(base.complex, l, std::move(comps));
    auto custom = custom_foliation(spec);
    auto data = custom->data();
    data.kind = FoliationKind::Pushforward;
    data.notes = f->notes();
    data.notes.push_back(fmt::format("cotangent is pi_+ ev^* L_F along {}", w.pi.name()));
    data.notes.push_back("eps on f_*C read off ev^*(eps_F); eps on the cotangent generators is zero");
    out.foliation = FoliationPresentation::make(std::move(data));
    return out;
}

// ---------------------------------------------------------------------------
// tangent formula

TangentComparison tangent_at_point(const FoliationPtr& f, const FiniteFreeMap& x,
                                   const std::map<std::string, Rational>& point)
{
    const AlgebraPtr& y = f->owner();
    if (!over_rationals(y) || x.base()->ring().size() != 0)
        fail(ErrorKind::UnsupportedInput, "the tangent formula is evaluated over S = Spec Q");
    TangentComparison out;
    for (auto& [name, value] : point)
        out.point += (out.point.empty() ? "" : ", ") + name + "=" + to_string(value);

    // Z = X ×_S Y, once over X (for the Weil restriction) and once over S
    AlgebraPtr c_rel = fibre_product(x, y);
    const Ring& cr = c_rel->ring();
    std::vector<Generator> gens = cr.generators();
    std::vector<Poly> relations;
    for (auto& r : x.algebra()->own_relations())
        relations.push_back(resize_poly(r, cr.size()));
    for (auto& r : c_rel->own_relations())
        relations.push_back(r);
    AlgebraPtr c_abs = AlgebraPresentation::make(c_rel->name(), nullptr, gens, relations);

    // pull F back along Z -> Y, then push forward along X -> S
    std::vector<Poly> pr_images;
    for (auto& g : y->ring().generators())
        pr_images.push_back(c_abs->ring().var(*c_abs->ring().index_of(g.name)));
    AlgebraMap pr("pr", y, c_abs, pr_images);
    auto lz = pushout_cotangent(f->cotangent(), f->anchor(), pr, cotangent_lci(c_abs));
    WeilRestriction w = weil_restrict(c_rel, x);
    AlgebraMap ev("ev", c_abs, w.pi.algebra(), w.counit.images());
    PerfectComplex lf = f_plus(base_change(lz.complex, ev), w.pi);

    const Ring& rr = w.result->ring();
    std::vector<Poly> values(rr.size());
    for (std::size_t i = 0; i < rr.size(); ++i) {
        auto it = point.find(rr.generator(i).name);
        if (it == point.end())
            fail(ErrorKind::InvalidInput, fmt::format("the point gives no value for {}", rr.generator(i).name));
        values[i] = Poly::monomial(Exponents{}, it->second);
    }
    AlgebraMap g("g", w.result, AlgebraPresentation::rationals(), values);
    g.validate();
    for (auto& h : homology_all(dual(base_change(lf, g))))
        if (h.dimension > 0)
            out.lhs[h.degree] = h.dimension;

    // Gamma(X, T_{X/S} ⊕ g^* T_F)
    const Ring& br = x.algebra()->ring();
    std::vector<Poly> sigma(y->ring().size());
    for (std::size_t k = 0; k < y->own_size(); ++k) {
        const std::string& name = y->ring().generator(y->own_index(k)).name;
        Poly v;
        for (std::size_t i = 0; i < x.rank(); ++i) {
            auto it = point.find(name + std::to_string(i));
            if (it == point.end())
                fail(ErrorKind::InvalidInput, fmt::format("the point gives no value for {}{}", name, i));
            v += (i == 0 ? br.one() : br.var(x.basis_generator(i))) * it->second;
        }
        sigma[y->own_index(k)] = v;
    }
    AlgebraMap s("sigma", y, x.algebra(), sigma);
    s.validate();
    PerfectComplex t = direct_sum(dual(cotangent_lci(x.algebra()).complex), dual(base_change(f->cotangent(), s)));
    for (auto& h : homology_all(restrict_scalars(t, x)))
        if (h.dimension > 0)
            out.rhs[h.degree] = h.dimension;
    return out;
}

} // namespace folwerk
