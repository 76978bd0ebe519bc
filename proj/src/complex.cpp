#include "folwerk/complex.hpp"

#include "folwerk/error.hpp"
#include "folwerk/linalg.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <fmt/format.h>

namespace folwerk {

// ---------------------------------------------------------------------------
// PolyMatrix

PolyMatrix PolyMatrix::identity(const Ring& ring, std::size_t n)
{
    PolyMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = ring.one();
    return m;
}

bool PolyMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Poly& p) { return p.is_zero(); });
}

PolyMatrix PolyMatrix::transpose() const
{
    PolyMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

PolyMatrix PolyMatrix::negated() const
{
    PolyMatrix m = *this;
    for (auto& p : m.data_)
        p *= Rational(-1);
    return m;
}

PolyMatrix multiply(const Ring& ring, const PolyMatrix& a, const PolyMatrix& b)
{
    if (a.cols() != b.rows())
        fail(ErrorKind::InvalidInput,
             fmt::format("matrix shapes {}x{} and {}x{} do not compose", a.rows(), a.cols(),
                         b.rows(), b.cols()));
    PolyMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (!b(k, j).is_zero())
                    out(i, j) += ring.mul(a(i, k), b(k, j));
        }
    return out;
}

PolyMatrix add(const PolyMatrix& a, const PolyMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(ErrorKind::InvalidInput, "matrix shapes differ in a sum");
    PolyMatrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) += b(i, j);
    return out;
}

PolyMatrix block(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c, const PolyMatrix& d)
{
    const std::size_t top = a.rows(), bottom = c.rows();
    const std::size_t left = a.cols(), right = b.cols();
    if (b.rows() != top || d.rows() != bottom || c.cols() != left || d.cols() != right)
        fail(ErrorKind::InvalidInput, "block matrix shapes do not agree");
    PolyMatrix out(top + bottom, left + right);
    for (std::size_t i = 0; i < top; ++i) {
        for (std::size_t j = 0; j < left; ++j)
            out(i, j) = a(i, j);
        for (std::size_t j = 0; j < right; ++j)
            out(i, left + j) = b(i, j);
    }
    for (std::size_t i = 0; i < bottom; ++i) {
        for (std::size_t j = 0; j < left; ++j)
            out(top + i, j) = c(i, j);
        for (std::size_t j = 0; j < right; ++j)
            out(top + i, left + j) = d(i, j);
    }
    return out;
}

PolyMatrix map_entries(const PolyMatrix& m, const AlgebraMap& f)
{
    PolyMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero())
                out(i, j) = f.apply(m(i, j));
    return out;
}

// ---------------------------------------------------------------------------
// PerfectComplex

PerfectComplex::PerfectComplex(AlgebraPtr owner, std::map<int, std::size_t> ranks,
                               std::map<int, PolyMatrix> differentials,
                               std::map<int, std::vector<std::string>> labels)
    : owner_(std::move(owner))
{
    if (!owner_->concentrated_in_degree_zero())
        fail(ErrorKind::UnsupportedInput,
             fmt::format("complexes over {} need an owner concentrated in degree 0",
                         owner_->name()));
    for (auto& [k, r] : ranks)
        if (r > 0)
            ranks_[k] = r;
    for (auto& [k, m] : differentials) {
        if (m.rows() != rank(k + 1) || m.cols() != rank(k))
            fail(ErrorKind::InvalidInput,
                 fmt::format("d^{} has shape {}x{}, expected {}x{}", k, m.rows(), m.cols(),
                             rank(k + 1), rank(k)));
        if (m.is_zero())
            continue;
        PolyMatrix reduced(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                reduced(i, j) = ring().reduce(m(i, j));
        if (!reduced.is_zero())
            diffs_[k] = std::move(reduced);
    }
    for (auto& [k, r] : ranks_) {
        auto it = labels.find(k);
        if (it != labels.end() && it->second.size() == r) {
            labels_[k] = it->second;
            continue;
        }
        std::vector<std::string> names;
        for (std::size_t i = 0; i < r; ++i)
            names.push_back(fmt::format("e{}_{}", k, i));
        labels_[k] = std::move(names);
    }
}

PerfectComplex PerfectComplex::zero(AlgebraPtr owner)
{
    return PerfectComplex(std::move(owner), {});
}

PerfectComplex PerfectComplex::unit(AlgebraPtr owner)
{
    return PerfectComplex(std::move(owner), {{0, 1}}, {}, {{0, {"1"}}});
}

PerfectComplex PerfectComplex::free(AlgebraPtr owner, int degree, std::vector<std::string> labels)
{
    std::size_t r = labels.size();
    return PerfectComplex(std::move(owner), {{degree, r}}, {}, {{degree, std::move(labels)}});
}

std::size_t PerfectComplex::rank(int k) const
{
    auto it = ranks_.find(k);
    return it == ranks_.end() ? 0 : it->second;
}

std::size_t PerfectComplex::total_rank() const
{
    std::size_t n = 0;
    for (auto& [k, r] : ranks_)
        n += r;
    return n;
}

std::vector<int> PerfectComplex::degrees() const
{
    std::vector<int> out;
    for (auto& [k, r] : ranks_)
        out.push_back(k);
    return out;
}

std::optional<int> PerfectComplex::min_degree() const
{
    if (ranks_.empty())
        return std::nullopt;
    return ranks_.begin()->first;
}

std::optional<int> PerfectComplex::max_degree() const
{
    if (ranks_.empty())
        return std::nullopt;
    return ranks_.rbegin()->first;
}

PolyMatrix PerfectComplex::differential(int k) const
{
    auto it = diffs_.find(k);
    if (it != diffs_.end())
        return it->second;
    return PolyMatrix(rank(k + 1), rank(k));
}

const std::vector<std::string>& PerfectComplex::labels(int k) const
{
    static const std::vector<std::string> none;
    auto it = labels_.find(k);
    return it == labels_.end() ? none : it->second;
}

std::string PerfectComplex::defect() const
{
    for (auto& [k, m] : diffs_) {
        PolyMatrix dd = multiply(ring(), differential(k + 1), m);
        if (!dd.is_zero())
            return fmt::format("d^{} d^{} is not zero", k + 1, k);
    }
    return {};
}

void PerfectComplex::validate() const
{
    auto reason = defect();
    if (!reason.empty())
        fail(ErrorKind::InvalidInput, "not a complex: " + reason);
}

bool operator==(const PerfectComplex& a, const PerfectComplex& b)
{
    return a.owner_ == b.owner_ && a.ranks_ == b.ranks_ && a.diffs_ == b.diffs_;
}

// ---------------------------------------------------------------------------
// ChainMap

ChainMap::ChainMap(PerfectComplex source, PerfectComplex target,
                   std::map<int, PolyMatrix> components)
    : source_(std::move(source)), target_(std::move(target))
{
    if (source_.owner() != target_.owner())
        fail(ErrorKind::IncompatibleOwner,
             fmt::format("chain map between complexes over {} and {}", source_.owner()->name(),
                         target_.owner()->name()));
    for (auto& [k, m] : components) {
        if (m.rows() != target_.rank(k) || m.cols() != source_.rank(k))
            fail(ErrorKind::InvalidInput,
                 fmt::format("chain map component in degree {} has shape {}x{}, expected {}x{}", k,
                             m.rows(), m.cols(), target_.rank(k), source_.rank(k)));
        if (!m.is_zero())
            components_[k] = m;
    }
}

ChainMap ChainMap::identity(const PerfectComplex& c)
{
    std::map<int, PolyMatrix> comps;
    for (int k : c.degrees())
        comps[k] = PolyMatrix::identity(c.ring(), c.rank(k));
    return ChainMap(c, c, std::move(comps));
}

ChainMap ChainMap::zero(const PerfectComplex& source, const PerfectComplex& target)
{
    return ChainMap(source, target, {});
}

PolyMatrix ChainMap::component(int k) const
{
    auto it = components_.find(k);
    if (it != components_.end())
        return it->second;
    return PolyMatrix(target_.rank(k), source_.rank(k));
}

std::string ChainMap::defect() const
{
    std::vector<int> degrees = source_.degrees();
    for (int k : target_.degrees())
        degrees.push_back(k - 1);
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    const Ring& ring = source_.ring();
    for (int k : degrees) {
        PolyMatrix lhs = multiply(ring, target_.differential(k), component(k));
        PolyMatrix rhs = multiply(ring, component(k + 1), source_.differential(k));
        if (!(add(lhs, rhs.negated()).is_zero()))
            return fmt::format("does not commute with d in degree {}", k);
    }
    return {};
}

void ChainMap::validate() const
{
    auto reason = defect();
    if (!reason.empty())
        fail(ErrorKind::NotAMap, "not a chain map: " + reason);
}

ChainMap ChainMap::then(const ChainMap& next) const
{
    if (!(target_ == next.source_))
        fail(ErrorKind::IncompatibleOwner, "chain maps do not compose");
    std::map<int, PolyMatrix> comps;
    for (int k : source_.degrees())
        comps[k] = multiply(source_.ring(), next.component(k), component(k));
    return ChainMap(source_, next.target_, std::move(comps));
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

std::map<int, std::size_t> ranks_of(const PerfectComplex& c)
{
    std::map<int, std::size_t> r;
    for (int k : c.degrees())
        r[k] = c.rank(k);
    return r;
}

std::vector<int> span_degrees(std::initializer_list<const PerfectComplex*> cs, int pad = 1)
{
    std::vector<int> out;
    for (auto* c : cs)
        for (int k : c->degrees())
            for (int p = -pad; p <= pad; ++p)
                out.push_back(k + p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

PerfectComplex shift(const PerfectComplex& c, int n)
{
    std::map<int, std::size_t> ranks;
    std::map<int, PolyMatrix> diffs;
    std::map<int, std::vector<std::string>> labels;
    for (int k : c.degrees()) {
        ranks[k - n] = c.rank(k);
        labels[k - n] = c.labels(k);
        PolyMatrix d = c.differential(k);
        diffs[k - n] = (n % 2 != 0) ? d.negated() : d;
    }
    return PerfectComplex(c.owner(), ranks, diffs, labels);
}

PerfectComplex dual(const PerfectComplex& c)
{
    std::map<int, std::size_t> ranks;
    std::map<int, PolyMatrix> diffs;
    std::map<int, std::vector<std::string>> labels;
    for (int k : c.degrees()) {
        ranks[-k] = c.rank(k);
        std::vector<std::string> names;
        for (auto& l : c.labels(k)) {
            // dualizing twice gives back the original label
            if (l.size() > 1 && l.back() == '^' && l.front() != '^')
                names.push_back(l.substr(0, l.size() - 1));
            else
                names.push_back(l + "^");
        }
        labels[-k] = std::move(names);
    }
    // (d_dual)^{-k-1} : (C^{k+1})^v -> (C^k)^v is the transpose of d^k
    for (int k : span_degrees({&c}))
        diffs[-k - 1] = c.differential(k).transpose();
    for (auto it = diffs.begin(); it != diffs.end();)
        it = (it->second.rows() == 0 || it->second.cols() == 0) ? diffs.erase(it) : std::next(it);
    return PerfectComplex(c.owner(), ranks, diffs, labels);
}

PerfectComplex tensor(const PerfectComplex& a, const PerfectComplex& b)
{
    if (a.owner() != b.owner())
        fail(ErrorKind::IncompatibleOwner, "tensor of complexes over different owners");
    // offset[(k, p)]: position of the block a^p (x) b^{k-p} inside degree k
    std::map<int, std::map<int, std::size_t>> offset;
    std::map<int, std::size_t> ranks;
    std::map<int, std::vector<std::string>> labels;
    for (int p : a.degrees())
        for (int q : b.degrees()) {
            int k = p + q;
            offset[k][p] = ranks[k];
            ranks[k] += a.rank(p) * b.rank(q);
        }
    for (auto& [k, blocks] : offset)
        for (auto& [p, off] : blocks)
            for (auto& la : a.labels(p))
                for (auto& lb : b.labels(k - p))
                    labels[k].push_back(la + "." + lb);
    std::map<int, PolyMatrix> diffs;
    for (auto& [k, blocks] : offset) {
        PolyMatrix d(ranks.count(k + 1) ? ranks[k + 1] : 0, ranks[k]);
        for (auto& [p, off] : blocks) {
            int q = k - p;
            PolyMatrix da = a.differential(p);
            PolyMatrix db = b.differential(q);
            Rational sign = (p % 2 != 0) ? -1 : 1;
            for (std::size_t i = 0; i < a.rank(p); ++i)
                for (std::size_t j = 0; j < b.rank(q); ++j) {
                    std::size_t col = off + i * b.rank(q) + j;
                    if (a.rank(p + 1) > 0) {
                        std::size_t base = offset[k + 1][p + 1];
                        for (std::size_t i2 = 0; i2 < a.rank(p + 1); ++i2)
                            if (!da(i2, i).is_zero())
                                d(base + i2 * b.rank(q) + j, col) += da(i2, i);
                    }
                    if (b.rank(q + 1) > 0) {
                        std::size_t base = offset[k + 1][p];
                        for (std::size_t j2 = 0; j2 < b.rank(q + 1); ++j2)
                            if (!db(j2, j).is_zero())
                                d(base + i * b.rank(q + 1) + j2, col) += db(j2, j) * sign;
                    }
                }
        }
        if (d.rows() > 0)
            diffs[k] = std::move(d);
    }
    return PerfectComplex(a.owner(), ranks, diffs, labels);
}

PerfectComplex direct_sum(const PerfectComplex& a, const PerfectComplex& b)
{
    if (a.owner() != b.owner())
        fail(ErrorKind::IncompatibleOwner, "direct sum of complexes over different owners");
    std::map<int, std::size_t> ranks;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, PolyMatrix> diffs;
    auto degrees = span_degrees({&a, &b}, 0);
    for (int k : degrees) {
        ranks[k] = a.rank(k) + b.rank(k);
        labels[k] = a.labels(k);
        for (auto& l : b.labels(k))
            labels[k].push_back(l);
    }
    for (int k : degrees) {
        PolyMatrix zero_ab(a.rank(k + 1), b.rank(k));
        PolyMatrix zero_ba(b.rank(k + 1), a.rank(k));
        diffs[k] = block(a.differential(k), zero_ab, zero_ba, b.differential(k));
    }
    for (auto it = diffs.begin(); it != diffs.end();)
        it = (it->second.rows() == 0 || it->second.cols() == 0) ? diffs.erase(it) : std::next(it);
    return PerfectComplex(a.owner(), ranks, diffs, labels);
}

PerfectComplex cone(const ChainMap& f)
{
    const PerfectComplex& s = f.source();
    const PerfectComplex& t = f.target();
    std::map<int, std::size_t> ranks;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, PolyMatrix> diffs;
    std::vector<int> degrees;
    for (int k : s.degrees())
        degrees.push_back(k - 1);
    for (int k : t.degrees())
        degrees.push_back(k);
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    for (int k : degrees) {
        ranks[k] = s.rank(k + 1) + t.rank(k);
        for (auto& l : s.labels(k + 1))
            labels[k].push_back("s" + l);
        for (auto& l : t.labels(k))
            labels[k].push_back(l);
    }
    std::vector<int> with_prev = degrees;
    for (int k : degrees)
        with_prev.push_back(k - 1);
    std::sort(with_prev.begin(), with_prev.end());
    with_prev.erase(std::unique(with_prev.begin(), with_prev.end()), with_prev.end());
    for (int k : with_prev) {
        PolyMatrix m = block(s.differential(k + 1).negated(), PolyMatrix(s.rank(k + 2), t.rank(k)),
                             f.component(k + 1), t.differential(k));
        if (m.rows() > 0 && m.cols() > 0)
            diffs[k] = std::move(m);
    }
    return PerfectComplex(s.owner(), ranks, diffs, labels);
}

PerfectComplex base_change(const PerfectComplex& c, const AlgebraMap& f)
{
    if (c.owner() != f.source())
        fail(ErrorKind::IncompatibleOwner,
             fmt::format("base change along {} of a complex over {}", f.name(), c.owner()->name()));
    std::map<int, std::vector<std::string>> labels;
    std::map<int, PolyMatrix> diffs;
    for (int k : c.degrees()) {
        labels[k] = c.labels(k);
        if (c.rank(k + 1) > 0)
            diffs[k] = map_entries(c.differential(k), f);
    }
    return PerfectComplex(f.target(), ranks_of(c), diffs, labels);
}

ChainMap base_change(const ChainMap& m, const AlgebraMap& f)
{
    std::map<int, PolyMatrix> comps;
    for (int k : m.source().degrees())
        comps[k] = map_entries(m.component(k), f);
    return ChainMap(base_change(m.source(), f), base_change(m.target(), f), std::move(comps));
}

ChainMap shift(const ChainMap& m, int n)
{
    std::map<int, PolyMatrix> comps;
    for (int k : m.source().degrees())
        comps[k - n] = m.component(k);
    return ChainMap(shift(m.source(), n), shift(m.target(), n), std::move(comps));
}

ChainMap dual(const ChainMap& m)
{
    std::map<int, PolyMatrix> comps;
    for (int k : m.source().degrees())
        comps[-k] = m.component(k).transpose();
    return ChainMap(dual(m.target()), dual(m.source()), std::move(comps));
}

ChainMap direct_sum(const ChainMap& a, const ChainMap& b)
{
    PerfectComplex s = direct_sum(a.source(), b.source());
    PerfectComplex t = direct_sum(a.target(), b.target());
    std::map<int, PolyMatrix> comps;
    for (int k : s.degrees())
        comps[k] = block(a.component(k), PolyMatrix(a.target().rank(k), b.source().rank(k)),
                         PolyMatrix(b.target().rank(k), a.source().rank(k)), b.component(k));
    return ChainMap(std::move(s), std::move(t), std::move(comps));
}

// ---------------------------------------------------------------------------
// Homology

namespace {

class Coordinates {
public:
    std::size_t of(std::size_t basis, const Exponents& e)
    {
        auto [it, inserted] = index_.try_emplace({basis, e}, index_.size());
        return it->second;
    }
    std::size_t size() const { return index_.size(); }

private:
    std::map<std::pair<std::size_t, Exponents>, std::size_t> index_;
};

// image of (monomial m) * (basis element j) under d, as a coordinate vector
SparseVec image(const Ring& ring, const PolyMatrix& d, std::size_t j, const Exponents& m,
                Coordinates& coords)
{
    SparseVec v;
    Poly mono = Poly::monomial(m);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        if (d(i, j).is_zero())
            continue;
        Poly p = ring.mul(mono, d(i, j));
        for (auto& [e, c] : p.terms()) {
            Rational& slot = v[coords.of(i, e)];
            slot += c;
            if (slot == 0)
                v.erase(coords.of(i, e));
        }
    }
    return v;
}

} // namespace

HomologyReport homology(const PerfectComplex& c, int k, std::optional<std::uint32_t> bound)
{
    const Ring& ring = c.ring();
    HomologyReport report;
    report.degree = k;
    std::vector<Exponents> monomials;
    if (auto basis = ring.finite_basis()) {
        monomials = std::move(*basis);
    } else {
        if (!bound)
            fail(ErrorKind::MissingBound,
                 fmt::format("{} is infinite-dimensional over Q; a polynomial degree bound is required",
                             c.owner()->name()));
        monomials = ring.standard_monomials(*bound);
        report.truncated = true;
        report.degree_bound = *bound;
    }
    const std::size_t window = c.rank(k) * monomials.size();
    if (window == 0)
        return report;

    // cycles: kernel of d^k on the window, target unrestricted
    std::size_t rank_out = 0;
    {
        Coordinates coords;
        Echelon e;
        PolyMatrix d = c.differential(k);
        for (std::size_t j = 0; j < c.rank(k); ++j)
            for (auto& m : monomials)
                e.insert(image(ring, d, j, m, coords));
        rank_out = e.rank();
    }
    // boundaries of window chains that land inside the window
    std::size_t boundaries = 0;
    if (c.rank(k - 1) > 0) {
        Coordinates coords;
        for (std::size_t j = 0; j < c.rank(k); ++j)
            for (auto& m : monomials)
                coords.of(j, m);
        PolyMatrix d = c.differential(k - 1);
        Echelon all, outside;
        for (std::size_t j = 0; j < c.rank(k - 1); ++j)
            for (auto& m : monomials) {
                SparseVec v = image(ring, d, j, m, coords);
                SparseVec o(v.lower_bound(window), v.end());
                all.insert(std::move(v));
                outside.insert(std::move(o));
            }
        boundaries = all.rank() - outside.rank();
    }
    report.dimension = window - rank_out - boundaries;
    return report;
}

std::vector<HomologyReport> homology_all(const PerfectComplex& c, std::optional<std::uint32_t> bound)
{
    std::vector<HomologyReport> out;
    for (int k : c.degrees())
        out.push_back(homology(c, k, bound));
    return out;
}

bool is_acyclic(const PerfectComplex& c, std::optional<std::uint32_t> bound)
{
    for (auto& h : homology_all(c, bound))
        if (h.dimension != 0)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Sym

namespace {

struct SymRing {
    RingPtr ring;
    std::size_t owner_size = 0;
    std::map<std::pair<int, std::size_t>, std::size_t> index; // (degree in L, basis) -> generator
};

SymRing sym_ring(const PerfectComplex& l)
{
    const Ring& base = l.ring();
    SymRing s;
    s.owner_size = base.size();
    std::vector<Generator> gens = base.generators();
    std::set<std::string> names;
    for (auto& g : gens)
        names.insert(g.name);
    for (int k : l.degrees())
        for (std::size_t i = 0; i < l.rank(k); ++i) {
            std::string name = l.labels(k)[i];
            while (names.count(name))
                name += "'";
            names.insert(name);
            s.index[{k, i}] = gens.size();
            gens.push_back({name, k - 1, 1});
        }
    std::vector<Poly> relations;
    for (auto& r : base.relations()) {
        Poly w;
        for (auto& [e, c] : r.terms()) {
            Exponents x = e;
            x.resize(gens.size(), 0);
            w.add_term(x, c);
        }
        relations.push_back(w);
    }
    s.ring = std::make_shared<Ring>(gens, relations);
    return s;
}

Poly widen(const Poly& p, std::size_t n)
{
    Poly out;
    for (auto& [e, c] : p.terms()) {
        Exponents x = e;
        x.resize(n, 0);
        out.add_term(x, c);
    }
    return out;
}

// weight-n monomials in the shifted generators, grouped by degree
std::map<int, std::vector<Exponents>> sym_basis(const SymRing& s, unsigned n)
{
    const Ring& r = *s.ring;
    std::map<int, std::vector<Exponents>> out;
    Exponents cur = r.unit_exponents();
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i == r.size()) {
            if (left == 0)
                out[r.degree(cur)].push_back(cur);
            return;
        }
        unsigned cap = r.odd(i) ? std::min(1u, left) : left;
        for (unsigned k = 0; k <= cap; ++k) {
            cur[i] = k;
            rec(i + 1, left - k);
        }
        cur[i] = 0;
    };
    rec(s.owner_size, n);
    for (auto& [k, v] : out)
        std::sort(v.begin(), v.end(), [](const Exponents& a, const Exponents& b) { return DegLex{}(b, a); });
    return out;
}

// Splits a polynomial of the Sym ring into owner coefficients per shifted monomial.
std::map<Exponents, Poly> split(const Poly& p, std::size_t owner_size)
{
    std::map<Exponents, Poly> out;
    for (auto& [e, c] : p.terms()) {
        Exponents owner(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(owner_size));
        Exponents shifted = e;
        std::fill(shifted.begin(), shifted.begin() + static_cast<std::ptrdiff_t>(owner_size), 0u);
        out[shifted].add_term(owner, c);
    }
    return out;
}

PolyMatrix matrix_of(const std::vector<Poly>& columns, const std::vector<Exponents>& row_basis,
                     std::size_t owner_size)
{
    std::map<Exponents, std::size_t> row_of;
    for (std::size_t i = 0; i < row_basis.size(); ++i)
        row_of[row_basis[i]] = i;
    PolyMatrix m(row_basis.size(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (auto& [shifted, coeff] : split(columns[j], owner_size)) {
            auto it = row_of.find(shifted);
            if (it == row_of.end())
                fail(ErrorKind::InvalidInput, "symmetric power differential leaves its weight");
            m(it->second, j) = coeff;
        }
    return m;
}

} // namespace

std::vector<PerfectComplex> sym(const PerfectComplex& l, unsigned weight_bound)
{
    SymRing s = sym_ring(l);
    const Ring& r = *s.ring;
    // d on L[1] is -d_L, extended as a degree +1 derivation
    std::vector<Poly> d(r.size());
    for (auto& [key, gen] : s.index) {
        auto [k, j] = key;
        PolyMatrix m = l.differential(k);
        Poly img;
        for (std::size_t i = 0; i < l.rank(k + 1); ++i)
            if (!m(i, j).is_zero())
                img -= r.mul(widen(m(i, j), r.size()), r.var(s.index.at({k + 1, i})));
        d[gen] = img;
    }
    std::vector<PerfectComplex> out;
    for (unsigned n = 0; n <= weight_bound; ++n) {
        auto basis = sym_basis(s, n);
        std::map<int, std::size_t> ranks;
        std::map<int, std::vector<std::string>> labels;
        std::map<int, PolyMatrix> diffs;
        for (auto& [k, monos] : basis) {
            ranks[k] = monos.size();
            for (auto& m : monos)
                labels[k].push_back(r.format(m));
        }
        for (auto& [k, monos] : basis) {
            auto next = basis.find(k + 1);
            if (next == basis.end())
                continue;
            std::vector<Poly> cols;
            for (auto& m : monos)
                cols.push_back(r.derive(Poly::monomial(m), d, 1));
            diffs[k] = matrix_of(cols, next->second, s.owner_size);
        }
        out.emplace_back(l.owner(), ranks, diffs, labels);
    }
    return out;
}

std::vector<ChainMap> sym(const ChainMap& f, unsigned weight_bound)
{
    SymRing src = sym_ring(f.source());
    SymRing tgt = sym_ring(f.target());
    const Ring& rs = *src.ring;
    const Ring& rt = *tgt.ring;
    std::vector<Poly> images(rs.size());
    for (std::size_t i = 0; i < src.owner_size; ++i)
        images[i] = rt.var(i);
    for (auto& [key, gen] : src.index) {
        auto [k, j] = key;
        PolyMatrix m = f.component(k);
        Poly img;
        for (std::size_t i = 0; i < f.target().rank(k); ++i)
            if (!m(i, j).is_zero())
                img += rt.mul(widen(m(i, j), rt.size()), rt.var(tgt.index.at({k, i})));
        images[gen] = img;
    }
    auto source_pieces = sym(f.source(), weight_bound);
    auto target_pieces = sym(f.target(), weight_bound);
    std::vector<ChainMap> out;
    for (unsigned n = 0; n <= weight_bound; ++n) {
        auto sb = sym_basis(src, n);
        auto tb = sym_basis(tgt, n);
        std::map<int, PolyMatrix> comps;
        for (auto& [k, monos] : sb) {
            std::vector<Poly> cols;
            for (auto& m : monos)
                cols.push_back(rs.substitute(Poly::monomial(m), images, rt));
            auto it = tb.find(k);
            comps[k] = matrix_of(cols, it == tb.end() ? std::vector<Exponents>{} : it->second,
                                 tgt.owner_size);
        }
        out.emplace_back(source_pieces[n], target_pieces[n], std::move(comps));
    }
    return out;
}

std::size_t sym_rank_formula(std::size_t even, std::size_t odd, unsigned n)
{
    auto binom = [](std::size_t a, std::size_t b) -> std::size_t {
        if (b > a)
            return 0;
        std::size_t r = 1;
        for (std::size_t i = 1; i <= b; ++i)
            r = r * (a - b + i) / i;
        return r;
    };
    std::size_t total = 0;
    for (unsigned k = 0; k <= n; ++k) {
        std::size_t sym_even = even == 0 ? (k == 0 ? 1 : 0) : binom(even + k - 1, k);
        total += sym_even * binom(odd, n - k);
    }
    return total;
}

} // namespace folwerk
