#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "amgtune/cljp.hpp"
#include "amgtune/sparse.hpp"

namespace amgtune {

/// The four relaxation methods selectable by the one-hot input b.
/// The enumeration order fixes the one-hot layout.
enum class SmootherKind : int {
    SorJacobi = 1,
    L1Jacobi = 2,
    L1SorJacobi = 3,
    FcfJacobi = 4,
};

inline constexpr std::array<SmootherKind, 4> kAllSmootherKinds = {
    SmootherKind::SorJacobi, SmootherKind::L1Jacobi, SmootherKind::L1SorJacobi,
    SmootherKind::FcfJacobi};

inline std::string smoother_name(SmootherKind k) {
    switch (k) {
        case SmootherKind::SorJacobi: return "sor-jacobi";
        case SmootherKind::L1Jacobi: return "l1-jacobi";
        case SmootherKind::L1SorJacobi: return "l1-sor-jacobi";
        case SmootherKind::FcfJacobi: return "fcf-jacobi";
    }
    throw std::invalid_argument("unknown smoother kind");
}

inline SmootherKind smoother_from_name(const std::string& s) {
    for (SmootherKind k : kAllSmootherKinds)
        if (smoother_name(k) == s) return k;
    throw std::invalid_argument("unknown smoother name: " + s);
}

inline std::array<double, 4> smoother_one_hot(SmootherKind k) {
    std::array<double, 4> b{0.0, 0.0, 0.0, 0.0};
    b[static_cast<int>(k) - 1] = 1.0;
    return b;
}

enum class SweepDirection { Forward, Backward };

struct SmootherOptions {
    double sor_weight = 1.0;       // forward SOR relaxation weight
    double fcf_weight = 2.0 / 3.0; // weighted Jacobi inside the F/C/F stages
};

/// Precomputed read-only data for one level. The l1 diagonal is
/// d_i = sum_j |a_ij|; for SPD input it dominates the standard diagonal.
struct SmootherState {
    SmootherKind kind = SmootherKind::SorJacobi;
    SmootherOptions opt;
    std::vector<double> diag;
    std::vector<double> l1diag;
    std::vector<CfLabel> labels;  // required by FCF only
};

inline SmootherState make_smoother(SmootherKind kind, const SparseMatrix& a,
                                   const CfSplitting* split = nullptr,
                                   SmootherOptions opt = {}) {
    const index_t n = a.n();
    SmootherState s;
    s.kind = kind;
    s.opt = opt;
    s.diag.resize(static_cast<std::size_t>(n));
    s.l1diag.resize(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        double d = 0.0, l1 = 0.0;
        auto cols = a.row_cols(i);
        auto vals = a.row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == i) d = vals[k];
            l1 += std::abs(vals[k]);
        }
        if (d == 0.0 && (kind == SmootherKind::SorJacobi || kind == SmootherKind::FcfJacobi))
            throw std::runtime_error("smoother undefined: zero diagonal in row " + std::to_string(i));
        if (l1 == 0.0 && (kind == SmootherKind::L1Jacobi || kind == SmootherKind::L1SorJacobi))
            throw std::runtime_error("smoother undefined: zero l1 diagonal in row " + std::to_string(i));
        s.diag[i] = d;
        s.l1diag[i] = l1;
    }
    if (kind == SmootherKind::FcfJacobi) {
        if (!split) throw std::invalid_argument("FCF relaxation requires a C/F splitting");
        s.labels = split->labels;
    }
    return s;
}

namespace detail {

inline void sor_sweep(const SparseMatrix& a, const std::vector<double>& d, double w,
                      DenseVector& u, const DenseVector& f, SweepDirection dir) {
    const index_t n = a.n();
    auto relax_row = [&](index_t i) {
        double s = 0.0;
        auto cols = a.row_cols(i);
        auto vals = a.row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * u[cols[k]];
        u[i] += w * (f[i] - s) / d[i];
    };
    if (dir == SweepDirection::Forward)
        for (index_t i = 0; i < n; ++i) relax_row(i);
    else
        for (index_t i = n; i-- > 0;) relax_row(i);
}

inline void jacobi_masked_sweep(const SparseMatrix& a, const std::vector<double>& d, double w,
                                DenseVector& u, const DenseVector& f,
                                const std::vector<CfLabel>* labels, CfLabel which,
                                DenseVector& scratch) {
    residual(a, u, f, scratch);
    const index_t n = a.n();
    for (index_t i = 0; i < n; ++i) {
        if (labels && (*labels)[i] != which) continue;
        u[i] += w * scratch[i] / d[i];
    }
}

} // namespace detail

/// One application of the selected relaxation. The direction matters only for
/// the SOR family; a forward/backward pair makes them usable inside a
/// symmetric preconditioner.
inline void smooth_once(const SmootherState& s, const SparseMatrix& a, DenseVector& u,
                        const DenseVector& f, SweepDirection dir, DenseVector& scratch) {
    switch (s.kind) {
        case SmootherKind::SorJacobi:
            detail::sor_sweep(a, s.diag, s.opt.sor_weight, u, f, dir);
            break;
        case SmootherKind::L1Jacobi:
            detail::jacobi_masked_sweep(a, s.l1diag, 1.0, u, f, nullptr, CfLabel::F, scratch);
            break;
        case SmootherKind::L1SorJacobi:
            detail::sor_sweep(a, s.l1diag, s.opt.sor_weight, u, f, dir);
            break;
        case SmootherKind::FcfJacobi:
            detail::jacobi_masked_sweep(a, s.diag, s.opt.fcf_weight, u, f, &s.labels, CfLabel::F, scratch);
            detail::jacobi_masked_sweep(a, s.diag, s.opt.fcf_weight, u, f, &s.labels, CfLabel::C, scratch);
            detail::jacobi_masked_sweep(a, s.diag, s.opt.fcf_weight, u, f, &s.labels, CfLabel::F, scratch);
            break;
    }
}

/// nu applications of the selected relaxation; nu = 0 returns u unchanged.
inline DenseVector smooth(SmootherKind kind, const SparseMatrix& a, DenseVector u,
                          const DenseVector& f, int nu, const CfSplitting* split = nullptr,
                          SmootherOptions opt = {}, SweepDirection dir = SweepDirection::Forward) {
    if (static_cast<index_t>(u.size()) != a.n() || u.size() != f.size())
        throw std::invalid_argument("smooth: dimension mismatch");
    SmootherState s = make_smoother(kind, a, split, opt);
    DenseVector scratch(u.size());
    for (int k = 0; k < nu; ++k) smooth_once(s, a, u, f, dir, scratch);
    return u;
}

} // namespace amgtune
