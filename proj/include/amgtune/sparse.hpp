#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "amgtune/dense.hpp"

namespace amgtune {

using index_t = std::int32_t;
using DenseVector = std::vector<double>;

struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// Sparse matrix in canonical compressed-row form: rows in order, column
/// indices sorted and unique within each row. Construction from coordinate
/// triplets sums duplicates (assembly semantics) and keeps stored zeros.
class SparseMatrix {
public:
    SparseMatrix() = default;

    SparseMatrix(index_t rows, index_t cols)
        : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {}

    static SparseMatrix from_triplets(index_t rows, index_t cols, std::vector<Triplet> t) {
        for (const Triplet& e : t) {
            if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
                throw std::invalid_argument("triplet index out of range");
        }
        // stable: duplicates accumulate in insertion order, which keeps
        // symmetric assemblies summing (i,j) and (j,i) in the same sequence
        std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        SparseMatrix m(rows, cols);
        m.col_idx_.reserve(t.size());
        m.values_.reserve(t.size());
        std::size_t k = 0;
        for (index_t i = 0; i < rows; ++i) {
            while (k < t.size() && t[k].row == i) {
                index_t c = t[k].col;
                double v = 0.0;
                while (k < t.size() && t[k].row == i && t[k].col == c) {
                    v += t[k].value;
                    ++k;
                }
                m.col_idx_.push_back(c);
                m.values_.push_back(v);
            }
            m.row_ptr_[static_cast<std::size_t>(i) + 1] = static_cast<index_t>(m.col_idx_.size());
        }
        return m;
    }

    static SparseMatrix identity(index_t n) {
        std::vector<Triplet> t;
        t.reserve(static_cast<std::size_t>(n));
        for (index_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
        return from_triplets(n, n, std::move(t));
    }

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    /// Dimension of a square matrix.
    index_t n() const {
        assert(is_square());
        return rows_;
    }
    index_t nnz() const { return static_cast<index_t>(values_.size()); }

    const std::vector<index_t>& row_ptr() const { return row_ptr_; }
    const std::vector<index_t>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    std::span<const index_t> row_cols(index_t i) const {
        return {col_idx_.data() + row_ptr_[i], col_idx_.data() + row_ptr_[i + 1]};
    }
    std::span<const double> row_vals(index_t i) const {
        return {values_.data() + row_ptr_[i], values_.data() + row_ptr_[i + 1]};
    }

    /// Coordinate view, row-major order.
    std::vector<Triplet> triplets() const {
        std::vector<Triplet> t;
        t.reserve(values_.size());
        for (index_t i = 0; i < rows_; ++i)
            for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                t.push_back({i, col_idx_[k], values_[k]});
        return t;
    }

    /// Stored value at (i, j), zero if not stored.
    double value_at(index_t i, index_t j) const {
        auto cols = row_cols(i);
        auto it = std::lower_bound(cols.begin(), cols.end(), j);
        if (it == cols.end() || *it != j) return 0.0;
        return values_[row_ptr_[i] + static_cast<index_t>(it - cols.begin())];
    }

    double diagonal(index_t i) const { return value_at(i, i); }

    bool operator==(const SparseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && row_ptr_ == o.row_ptr_ &&
               col_idx_ == o.col_idx_ && values_ == o.values_;
    }

    /// Entrywise exact symmetry of the stored entry set.
    bool is_symmetric() const;

    DenseMatrix to_dense() const {
        DenseMatrix d(static_cast<std::size_t>(rows_), static_cast<std::size_t>(cols_));
        for (index_t i = 0; i < rows_; ++i)
            for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                d(i, col_idx_[k]) = values_[k];
        return d;
    }

    /// Internal assembler used by the product routines; rows must be appended
    /// in order with sorted columns.
    void append_row(const std::vector<index_t>& cols, const std::vector<double>& vals) {
        assert(cols.size() == vals.size());
        col_idx_.insert(col_idx_.end(), cols.begin(), cols.end());
        values_.insert(values_.end(), vals.begin(), vals.end());
        rows_appended_++;
        row_ptr_[rows_appended_] = static_cast<index_t>(col_idx_.size());
    }

private:
    index_t rows_ = 0, cols_ = 0;
    std::vector<index_t> row_ptr_{0};
    std::vector<index_t> col_idx_;
    std::vector<double> values_;
    index_t rows_appended_ = 0;
};

// --- vector helpers ---------------------------------------------------------

inline double dot(const DenseVector& a, const DenseVector& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const DenseVector& x, DenseVector& y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// --- operations --------------------------------------------------------------

/// y = A x.
inline void matvec(const SparseMatrix& a, const DenseVector& x, DenseVector& y) {
    if (static_cast<index_t>(x.size()) != a.cols())
        throw std::invalid_argument("matvec: dimension mismatch");
    y.assign(static_cast<std::size_t>(a.rows()), 0.0);
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& v = a.values();
    for (index_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * x[ci[k]];
        y[i] = s;
    }
}

inline DenseVector matvec(const SparseMatrix& a, const DenseVector& x) {
    DenseVector y;
    matvec(a, x, y);
    return y;
}

/// r = f - A u.
inline void residual(const SparseMatrix& a, const DenseVector& u, const DenseVector& f,
                     DenseVector& r) {
    matvec(a, u, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] - r[i];
}

inline SparseMatrix transpose(const SparseMatrix& a) {
    const index_t rows = a.rows(), cols = a.cols();
    std::vector<index_t> count(static_cast<std::size_t>(cols) + 1, 0);
    for (index_t k = 0; k < a.nnz(); ++k) count[a.col_idx()[k] + 1]++;
    for (index_t j = 0; j < cols; ++j) count[j + 1] += count[j];
    std::vector<index_t> tcols(a.nnz());
    std::vector<double> tvals(a.nnz());
    std::vector<index_t> next(count.begin(), count.end() - 1);
    for (index_t i = 0; i < rows; ++i) {
        for (index_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
            index_t j = a.col_idx()[k];
            index_t pos = next[j]++;
            tcols[pos] = i;
            tvals[pos] = a.values()[k];
        }
    }
    SparseMatrix t(cols, rows);
    std::vector<index_t> rc;
    std::vector<double> rv;
    for (index_t j = 0; j < cols; ++j) {
        rc.assign(tcols.begin() + count[j], tcols.begin() + count[j + 1]);
        rv.assign(tvals.begin() + count[j], tvals.begin() + count[j + 1]);
        t.append_row(rc, rv);
    }
    return t;
}

inline bool SparseMatrix::is_symmetric() const {
    if (!is_square()) return false;
    SparseMatrix t = transpose(*this);
    return t == *this;
}

/// C = A B by row-wise sparse accumulation; canonical (sorted) output rows.
inline SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
    SparseMatrix c(a.rows(), b.cols());
    std::vector<double> work(static_cast<std::size_t>(b.cols()), 0.0);
    std::vector<index_t> mark(static_cast<std::size_t>(b.cols()), -1);
    std::vector<index_t> cols;
    std::vector<double> vals;
    for (index_t i = 0; i < a.rows(); ++i) {
        cols.clear();
        for (index_t ka = a.row_ptr()[i]; ka < a.row_ptr()[i + 1]; ++ka) {
            index_t k = a.col_idx()[ka];
            double av = a.values()[ka];
            for (index_t kb = b.row_ptr()[k]; kb < b.row_ptr()[k + 1]; ++kb) {
                index_t j = b.col_idx()[kb];
                if (mark[j] != i) {
                    mark[j] = i;
                    work[j] = 0.0;
                    cols.push_back(j);
                }
                work[j] += av * b.values()[kb];
            }
        }
        std::sort(cols.begin(), cols.end());
        vals.resize(cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k) vals[k] = work[cols[k]];
        c.append_row(cols, vals);
    }
    return c;
}

namespace detail {

inline SparseMatrix drop_exact_zeros(const SparseMatrix& a) {
    std::vector<Triplet> keep;
    keep.reserve(static_cast<std::size_t>(a.nnz()));
    for (const Triplet& t : a.triplets())
        if (t.value != 0.0) keep.push_back(t);
    return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(keep));
}

/// Copy the strict upper triangle onto the lower one. The two are already
/// equal to rounding; the copy makes the Galerkin operator symmetric in the
/// entrywise-exact sense the hierarchy relies on.
inline SparseMatrix mirror_upper(const SparseMatrix& a) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(a.nnz()));
    for (const Triplet& e : a.triplets()) {
        if (e.row <= e.col) {
            t.push_back(e);
            if (e.row < e.col) t.push_back({e.col, e.row, e.value});
        }
    }
    return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

} // namespace detail

/// R A P with exact zeros dropped. When R is exactly the transpose of P and A
/// is symmetric, the result is symmetrized entrywise.
inline SparseMatrix triple_product(const SparseMatrix& r, const SparseMatrix& a,
                                   const SparseMatrix& p) {
    if (r.cols() != a.rows() || a.cols() != p.rows())
        throw std::invalid_argument("triple_product: dimension mismatch");
    SparseMatrix c = multiply(r, multiply(a, p));
    if (r == transpose(p) && a.is_symmetric()) c = detail::mirror_upper(c);
    return detail::drop_exact_zeros(c);
}

inline SparseMatrix scale(const SparseMatrix& a, double c) {
    SparseMatrix s = a;
    for (double& v : s.values()) v *= c;
    return s;
}

} // namespace amgtune
