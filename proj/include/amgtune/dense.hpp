#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace amgtune {

/// Row-major dense matrix. Small sizes only: coarsest-level factorizations,
/// local element matrices, filter fits and test oracles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    assert(a.cols() == b.rows());
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    DenseMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

inline std::vector<double> operator*(const DenseMatrix& a, const std::vector<double>& x) {
    assert(a.cols() == x.size());
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

/// LU factorization with partial pivoting; used for the coarsest-level direct
/// solve of the multigrid hierarchy.
class LuFactors {
public:
    LuFactors() = default;

    explicit LuFactors(DenseMatrix a) : lu_(std::move(a)), piv_(lu_.rows()) {
        const std::size_t n = lu_.rows();
        if (lu_.cols() != n) throw std::invalid_argument("LU requires a square matrix");
        for (std::size_t i = 0; i < n; ++i) piv_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double pmax = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                double v = std::abs(lu_(i, k));
                if (v > pmax) { pmax = v; p = i; }
            }
            if (pmax == 0.0) { singular_ = true; continue; }
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(piv_[k], piv_[p]);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                double m = lu_(i, k) / lu_(k, k);
                lu_(i, k) = m;
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
            }
        }
    }

    bool singular() const { return singular_; }
    std::size_t size() const { return lu_.rows(); }

    std::vector<double> solve(const std::vector<double>& b) const {
        const std::size_t n = lu_.rows();
        assert(b.size() == n);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[piv_[i]];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
        for (std::size_t ii = n; ii > 0; --ii) {
            std::size_t i = ii - 1;
            for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
            double d = lu_(i, i);
            x[i] = (d == 0.0) ? 0.0 : x[i] / d;
        }
        return x;
    }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> piv_;
    bool singular_ = false;
};

/// In-place Cholesky attempt; returns false if a nonpositive pivot appears.
/// Serves as the SPD spot-check used by the assembly and hierarchy modules.
inline bool cholesky_spd_check(DenseMatrix a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) return false;
    for (std::size_t k = 0; k < n; ++k) {
        double d = a(k, k);
        for (std::size_t j = 0; j < k; ++j) d -= a(k, j) * a(k, j);
        if (!(d > 0.0)) return false;
        d = std::sqrt(d);
        a(k, k) = d;
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = a(i, k);
            for (std::size_t j = 0; j < k; ++j) s -= a(i, j) * a(k, j);
            a(i, k) = s / d;
        }
    }
    return true;
}

/// Least-squares solve of min ||A x - b||_2 via Householder QR.
/// A must have rows >= cols and full column rank for a meaningful answer.
inline std::vector<double> least_squares(DenseMatrix a, std::vector<double> b) {
    const std::size_t m = a.rows(), n = a.cols();
    assert(b.size() == m && m >= n);
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        if (a(k, k) < 0.0) norm = -norm;
        for (std::size_t i = k; i < m; ++i) a(i, k) /= norm;
        a(k, k) += 1.0;
        for (std::size_t j = k + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += a(i, k) * a(i, j);
            s = -s / a(k, k);
            for (std::size_t i = k; i < m; ++i) a(i, j) += s * a(i, k);
        }
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += a(i, k) * b[i];
        s = -s / a(k, k);
        for (std::size_t i = k; i < m; ++i) b[i] += s * a(i, k);
        a(k, k) = norm; // store -R(k,k) sign-flipped below
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t kk = n; kk > 0; --kk) {
        std::size_t k = kk - 1;
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        double rkk = -a(k, k);
        x[k] = (rkk == 0.0) ? 0.0 : s / rkk;
    }
    return x;
}

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method.
/// Test-oracle quality: O(n^3) per sweep, fine for n <= a few hundred.
inline std::vector<double> symmetric_eigenvalues(DenseMatrix a, int max_sweeps = 64) {
    const std::size_t n = a.rows();
    assert(a.cols() == n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-28) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    return ev;
}

} // namespace amgtune
