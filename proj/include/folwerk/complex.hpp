#pragma once

#include "folwerk/algebra.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace folwerk {

/// Matrix of polynomials, row-major.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static PolyMatrix identity(const Ring& ring, std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Poly& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Poly& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const;
    PolyMatrix transpose() const;
    PolyMatrix negated() const;
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Poly> data_;
};

PolyMatrix multiply(const Ring& ring, const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix add(const PolyMatrix& a, const PolyMatrix& b);
/// Block matrix [[a, b], [c, d]]; blocks may be empty (0 x n) shapes.
PolyMatrix block(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c, const PolyMatrix& d);
PolyMatrix map_entries(const PolyMatrix& m, const AlgebraMap& f);

/// Bounded complex of finite free modules over an owner concentrated in
/// degree 0. Cohomological: d^k : C^k -> C^{k+1} is a rank(k+1) x rank(k)
/// matrix acting on columns.
class PerfectComplex {
public:
    PerfectComplex() = default;
    PerfectComplex(AlgebraPtr owner, std::map<int, std::size_t> ranks,
                   std::map<int, PolyMatrix> differentials = {},
                   std::map<int, std::vector<std::string>> labels = {});

    static PerfectComplex zero(AlgebraPtr owner);
    /// Owner in degree 0.
    static PerfectComplex unit(AlgebraPtr owner);
    static PerfectComplex free(AlgebraPtr owner, int degree, std::vector<std::string> labels);

    const AlgebraPtr& owner() const { return owner_; }
    const Ring& ring() const { return owner_->ring(); }
    std::size_t rank(int k) const;
    std::size_t total_rank() const;
    /// Degrees carrying nonzero terms, ascending.
    std::vector<int> degrees() const;
    bool is_zero() const { return total_rank() == 0; }
    std::optional<int> min_degree() const;
    std::optional<int> max_degree() const;

    /// d^k, always of shape rank(k+1) x rank(k).
    PolyMatrix differential(int k) const;
    const std::vector<std::string>& labels(int k) const;

    /// Empty when d∘d = 0 and shapes agree; otherwise a reason.
    std::string defect() const;
    void validate() const;

    friend bool operator==(const PerfectComplex& a, const PerfectComplex& b);

private:
    AlgebraPtr owner_;
    std::map<int, std::size_t> ranks_;
    std::map<int, PolyMatrix> diffs_;
    std::map<int, std::vector<std::string>> labels_;
};

/// Per-degree matrices source^k -> target^k.
class ChainMap {
public:
    ChainMap() = default;
    ChainMap(PerfectComplex source, PerfectComplex target, std::map<int, PolyMatrix> components);

    static ChainMap identity(const PerfectComplex& c);
    static ChainMap zero(const PerfectComplex& source, const PerfectComplex& target);

    const PerfectComplex& source() const { return source_; }
    const PerfectComplex& target() const { return target_; }
    PolyMatrix component(int k) const;

    std::string defect() const;
    void validate() const;

    ChainMap then(const ChainMap& next) const;

private:
    PerfectComplex source_;
    PerfectComplex target_;
    std::map<int, PolyMatrix> components_;
};

/// C[n]^k = C^{k+n}, differential (-1)^n d.
PerfectComplex shift(const PerfectComplex& c, int n);
/// (C^v)^k = (C^{-k})^v with the plain transposed differential.
PerfectComplex dual(const PerfectComplex& c);
/// d(a (x) b) = da (x) b + (-1)^{|a|} a (x) db.
PerfectComplex tensor(const PerfectComplex& a, const PerfectComplex& b);
PerfectComplex direct_sum(const PerfectComplex& a, const PerfectComplex& b);
/// Cone(f)^k = S^{k+1} (+) T^k with d = [[-d_S, 0], [f, d_T]].
PerfectComplex cone(const ChainMap& f);
PerfectComplex base_change(const PerfectComplex& c, const AlgebraMap& f);
ChainMap base_change(const ChainMap& m, const AlgebraMap& f);
ChainMap shift(const ChainMap& m, int n);
/// Transpose of a chain map, between the duals (direction reversed).
ChainMap dual(const ChainMap& m);
ChainMap direct_sum(const ChainMap& a, const ChainMap& b);

struct HomologyReport {
    int degree = 0;
    std::size_t dimension = 0;
    bool truncated = false;         ///< true when the owner is infinite-dimensional
    std::uint32_t degree_bound = 0; ///< polynomial degree bound used when truncated
};

/// Q-dimension of H^k. Exact when the owner is finite-dimensional over Q,
/// otherwise computed on module elements of polynomial degree <= bound
/// (cycles in the window modulo boundaries of window chains landing in it).
HomologyReport homology(const PerfectComplex& c, int k, std::optional<std::uint32_t> bound = {});
std::vector<HomologyReport> homology_all(const PerfectComplex& c, std::optional<std::uint32_t> bound = {});
bool is_acyclic(const PerfectComplex& c, std::optional<std::uint32_t> bound = {});

/// Sym^n of L[1] for n = 0..weight_bound; entry n is the weight-n complex.
/// Shifted generators of odd degree anticommute.
std::vector<PerfectComplex> sym(const PerfectComplex& l, unsigned weight_bound);
/// Induced maps Sym^n(f[1]) for n = 0..weight_bound.
std::vector<ChainMap> sym(const ChainMap& f, unsigned weight_bound);

/// Rank predicted by the graded-symmetric dimension formula.
std::size_t sym_rank_formula(std::size_t even, std::size_t odd, unsigned n);

} // namespace folwerk
