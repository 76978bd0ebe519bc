#pragma once

#include "folwerk/rational.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace folwerk {

using SparseVec = std::map<std::size_t, Rational>;

/// Incremental row echelon form over Q. Each inserted vector is fully reduced
/// against the current pivots; only independent vectors are kept.
class Echelon {
public:
    /// Returns true when `v` was independent of the vectors inserted so far.
    bool insert(SparseVec v);
    /// Reduces `v` against the pivots; zero result means v lies in the span.
    SparseVec reduce(SparseVec v) const;
    bool contains(const SparseVec& v) const { return reduce(v).empty(); }
    std::size_t rank() const { return rows_.size(); }

private:
    std::map<std::size_t, SparseVec> rows_; // pivot column -> row, pivot entry 1
};

std::size_t rank_of(const std::vector<SparseVec>& vectors);

/// Dense rational matrix, used for small explicit matrices in tests and reports.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::size_t rank() const;
    /// Basis of the right null space.
    std::vector<std::vector<Rational>> kernel() const;
    QMatrix transpose() const;
    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    friend bool operator==(const QMatrix& a, const QMatrix& b) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

} // namespace folwerk
