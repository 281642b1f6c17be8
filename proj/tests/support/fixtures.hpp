#pragma once

#include <vector>

#include "amgtune/dense.hpp"
#include "amgtune/rng.hpp"
#include "amgtune/sparse.hpp"

namespace amgtune::testing {

inline SparseMatrix tridiag(index_t n, double lo, double di, double hi) {
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i) {
        if (i > 0) t.push_back({i, i - 1, lo});
        t.push_back({i, i, di});
        if (i + 1 < n) t.push_back({i, i + 1, hi});
    }
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

inline SparseMatrix laplacian_1d(index_t n) { return tridiag(n, -1.0, 2.0, -1.0); }

/// 5-point Laplacian on an nx-by-ny interior grid (Dirichlet eliminated).
inline SparseMatrix laplacian_2d(index_t nx, index_t ny) {
    auto id = [nx](index_t i, index_t j) { return j * nx + i; };
    std::vector<Triplet> t;
    for (index_t j = 0; j < ny; ++j)
        for (index_t i = 0; i < nx; ++i) {
            t.push_back({id(i, j), id(i, j), 4.0});
            if (i > 0) t.push_back({id(i, j), id(i - 1, j), -1.0});
            if (i + 1 < nx) t.push_back({id(i, j), id(i + 1, j), -1.0});
            if (j > 0) t.push_back({id(i, j), id(i, j - 1), -1.0});
            if (j + 1 < ny) t.push_back({id(i, j), id(i, j + 1), -1.0});
        }
    return SparseMatrix::from_triplets(nx * ny, nx * ny, std::move(t));
}

inline SparseMatrix random_sparse(Rng& rng, index_t rows, index_t cols, double density) {
    std::vector<Triplet> t;
    for (index_t i = 0; i < rows; ++i)
        for (index_t j = 0; j < cols; ++j)
            if (rng.uniform() < density) t.push_back({i, j, rng.uniform(-1.0, 1.0)});
    return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

/// Random symmetric M-matrix: nonpositive off-diagonal entries, rows made
/// strictly diagonally dominant, hence SPD.
inline SparseMatrix random_spd_mmatrix(Rng& rng, index_t n, double density) {
    std::vector<Triplet> t;
    std::vector<double> rowsum(static_cast<std::size_t>(n), 0.0);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i + 1; j < n; ++j)
            if (rng.uniform() < density) {
                double v = -rng.uniform(0.1, 1.0);
                t.push_back({i, j, v});
                t.push_back({j, i, v});
                rowsum[i] += -v;
                rowsum[j] += -v;
            }
    for (index_t i = 0; i < n; ++i) t.push_back({i, i, rowsum[i] + rng.uniform(0.05, 0.6)});
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

/// Dense random SPD matrix as triplets (full pattern), A = B^T B + alpha I.
inline SparseMatrix random_spd_dense(Rng& rng, index_t n, double alpha = 0.5) {
    DenseMatrix b(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) b(i, j) = rng.uniform(-1.0, 1.0);
    std::vector<Triplet> t;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            double s = (i == j) ? alpha : 0.0;
            for (index_t k = 0; k < n; ++k) s += b(k, i) * b(k, j);
            t.push_back({i, j, s});
        }
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    return (a - b).max_abs();
}

} // namespace amgtune::testing
