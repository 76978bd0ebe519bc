#include "folwerk/linalg.hpp"

#include <cassert>

namespace folwerk {

SparseVec Echelon::reduce(SparseVec v) const
{
    // pivots are processed in increasing column order; each row only has
    // entries at or after its pivot, so one sweep suffices
    auto it = v.begin();
    while (it != v.end()) {
        auto row = rows_.find(it->first);
        if (row == rows_.end()) {
            ++it;
            continue;
        }
        Rational factor = it->second;
        std::size_t col = it->first;
        for (auto& [c, x] : row->second) {
            Rational& slot = v[c];
            slot -= factor * x;
        }
        for (auto jt = v.begin(); jt != v.end();)
            jt = jt->second == 0 ? v.erase(jt) : std::next(jt);
        it = v.upper_bound(col);
    }
    return v;
}

bool Echelon::insert(SparseVec v)
{
    v = reduce(std::move(v));
    if (v.empty())
        return false;
    auto pivot = v.begin()->first;
    Rational inv = Rational(1) / v.begin()->second;
    for (auto& [c, x] : v)
        x *= inv;
    // keep the basis fully reduced: clear the new pivot column in other rows
    for (auto& [p, row] : rows_) {
        auto hit = row.find(pivot);
        if (hit == row.end())
            continue;
        Rational factor = hit->second;
        for (auto& [c, x] : v) {
            Rational& slot = row[c];
            slot -= factor * x;
        }
        for (auto jt = row.begin(); jt != row.end();)
            jt = jt->second == 0 ? row.erase(jt) : std::next(jt);
    }
    rows_.emplace(pivot, std::move(v));
    return true;
}

std::size_t rank_of(const std::vector<SparseVec>& vectors)
{
    Echelon e;
    for (auto& v : vectors)
        e.insert(v);
    return e.rank();
}

std::size_t QMatrix::rank() const
{
    Echelon e;
    for (std::size_t r = 0; r < rows_; ++r) {
        SparseVec v;
        for (std::size_t c = 0; c < cols_; ++c)
            if ((*this)(r, c) != 0)
                v.emplace(c, (*this)(r, c));
        e.insert(std::move(v));
    }
    return e.rank();
}

std::vector<std::vector<Rational>> QMatrix::kernel() const
{
    // reduced row echelon form, then read off the free columns
    QMatrix m = *this;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
        std::size_t p = r;
        while (p < rows_ && m(p, c) == 0)
            ++p;
        if (p == rows_)
            continue;
        for (std::size_t k = 0; k < cols_; ++k)
            std::swap(m(p, k), m(r, k));
        Rational inv = Rational(1) / m(r, c);
        for (std::size_t k = 0; k < cols_; ++k)
            m(r, k) *= inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || m(i, c) == 0)
                continue;
            Rational f = m(i, c);
            for (std::size_t k = 0; k < cols_; ++k)
                m(i, k) -= f * m(r, k);
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<std::vector<Rational>> basis;
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots)
        is_pivot[c] = true;
    for (std::size_t free = 0; free < cols_; ++free) {
        if (is_pivot[free])
            continue;
        std::vector<Rational> v(cols_);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -m(i, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

QMatrix QMatrix::transpose() const
{
    QMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b)
{
    assert(a.cols() == b.rows());
    QMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

} // namespace folwerk
