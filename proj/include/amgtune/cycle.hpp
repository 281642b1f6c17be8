#pragma once

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "amgtune/hierarchy.hpp"

namespace amgtune {

struct SolveReport {
    bool converged = false;
    int n_it = 0;
    std::vector<double> residual_history;  // length n_it + 1
    double rho = 0.0;
    double wall_time = 0.0;  // seconds
    double theta = 0.0;
    SmootherKind smoother = SmootherKind::SorJacobi;
    int nu1 = 1, nu2 = 1;
    double tol = 0.0;
    int n_max = 0;

    /// Single structured text record with fixed key names.
    std::string to_record() const {
        std::ostringstream os;
        os.precision(17);
        os << "converged=" << (converged ? 1 : 0) << " n_it=" << n_it << " rho=" << rho
           << " wall_time=" << wall_time << " theta=" << theta
           << " smoother=" << smoother_name(smoother) << " nu1=" << nu1 << " nu2=" << nu2
           << " tol=" << tol << " n_max=" << n_max << " residuals=";
        for (std::size_t i = 0; i < residual_history.size(); ++i) {
            if (i) os << ",";
            os << residual_history[i];
        }
        return os.str();
    }
};

/// rho = (||r_N|| / ||r_0||)^(1/N); zero initial residual maps to 0.
inline double convergence_factor(const std::vector<double>& residual_history) {
    if (residual_history.size() < 2) return 0.0;
    double r0 = residual_history.front();
    double rn = residual_history.back();
    if (r0 == 0.0) return 0.0;
    double n_it = static_cast<double>(residual_history.size() - 1);
    return std::pow(rn / r0, 1.0 / n_it);
}

inline double convergence_factor(const SolveReport& report) {
    return convergence_factor(report.residual_history);
}

namespace detail {

inline void coarse_solve(const AmgHierarchy& h, DenseVector& u, const DenseVector& f,
                         DenseVector& scratch) {
    if (h.coarse_direct) {
        u = h.coarse_lu.solve(f);
    } else {
        // coarsening stalled: approximate with two l1-Jacobi sweeps
        const SparseMatrix& a = h.levels.back().a;
        std::fill(u.begin(), u.end(), 0.0);
        smooth_once(h.coarse_fallback, a, u, f, SweepDirection::Forward, scratch);
        smooth_once(h.coarse_fallback, a, u, f, SweepDirection::Forward, scratch);
    }
}

struct CycleWork {
    std::vector<DenseVector> u, f, r, s;
    explicit CycleWork(const AmgHierarchy& h)
        : u(h.levels.size()), f(h.levels.size()), r(h.levels.size()), s(h.levels.size()) {
        for (std::size_t k = 0; k < h.levels.size(); ++k) {
            auto n = static_cast<std::size_t>(h.levels[k].a.n());
            u[k].resize(n);
            f[k].resize(n);
            r[k].resize(n);
            s[k].resize(n);
        }
    }
};

inline void vcycle_level(const AmgHierarchy& h, std::size_t k, DenseVector& u,
                         const DenseVector& f, int nu1, int nu2, bool symmetric, CycleWork& w) {
    if (k + 1 == h.levels.size()) {
        coarse_solve(h, u, f, w.s[k]);
        return;
    }
    const Level& lvl = h.levels[k];
    for (int s = 0; s < nu1; ++s)
        smooth_once(lvl.smoother, lvl.a, u, f, SweepDirection::Forward, w.s[k]);

    residual(lvl.a, u, f, w.r[k]);
    matvec(lvl.r, w.r[k], w.f[k + 1]);
    DenseVector& e = w.u[k + 1];
    std::fill(e.begin(), e.end(), 0.0);
    vcycle_level(h, k + 1, e, w.f[k + 1], nu1, nu2, symmetric, w);
    matvec(lvl.p, e, w.r[k]);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += w.r[k][i];

    SweepDirection post = symmetric ? SweepDirection::Backward : SweepDirection::Forward;
    for (int s = 0; s < nu2; ++s) smooth_once(lvl.smoother, lvl.a, u, f, post, w.s[k]);
}

} // namespace detail

/// One V(nu1, nu2) sweep over the full hierarchy: pre-smooth, restrict the
/// residual, recurse, prolongate the correction, post-smooth; the coarsest
/// level is solved directly. With symmetric=true the SOR-family post-sweeps
/// run backward so the cycle is a symmetric operator.
inline DenseVector vcycle(const AmgHierarchy& h, DenseVector u, const DenseVector& f, int nu1 = 1,
                          int nu2 = 1, bool symmetric = false) {
    if (!h.smoother_attached && h.levels.size() > 1)
        throw std::logic_error("vcycle: no smoother attached");
    if (static_cast<index_t>(u.size()) != h.fine().n() || u.size() != f.size())
        throw std::invalid_argument("vcycle: dimension mismatch");
    detail::CycleWork w(h);
    detail::vcycle_level(h, 0, u, f, nu1, nu2, symmetric, w);
    return u;
}

/// Stationary AMG iteration (setup + repeated V-cycles) with stopping rule
/// ||f - A u|| / ||f|| < tol. Non-convergence is reported, not thrown.
inline std::pair<DenseVector, SolveReport> amg_solve(const SparseMatrix& a, const DenseVector& f,
                                                     double theta, SmootherKind kind, int nu1,
                                                     int nu2, double tol, int n_max,
                                                     std::uint64_t seed, AmgLimits limits = {},
                                                     SmootherOptions opt = {}) {
    auto t0 = std::chrono::steady_clock::now();
    AmgHierarchy h = amg_setup(a, theta, seed, limits);
    attach_smoother(h, kind, opt);

    SolveReport rep;
    rep.theta = theta;
    rep.smoother = kind;
    rep.nu1 = nu1;
    rep.nu2 = nu2;
    rep.tol = tol;
    rep.n_max = n_max;

    DenseVector u(f.size(), 0.0);
    double fnorm = norm2(f);
    DenseVector r;
    residual(a, u, f, r);
    rep.residual_history.push_back(norm2(r));
    if (fnorm == 0.0) {
        rep.converged = true;
    } else {
        for (int it = 0; it < n_max; ++it) {
            u = vcycle(h, std::move(u), f, nu1, nu2, false);
            residual(a, u, f, r);
            rep.residual_history.push_back(norm2(r));
            rep.n_it = it + 1;
            if (rep.residual_history.back() / fnorm < tol) {
                rep.converged = true;
                break;
            }
        }
    }
    rep.rho = convergence_factor(rep.residual_history);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(u), rep};
}

/// Conjugate gradients preconditioned with one V(1,1) cycle applied to a zero
/// initial guess. The default forward/backward sweep ordering makes the
/// preconditioner a symmetric operator; symmetric_precond=false applies both
/// sweeps forward the way production AMG defaults run inside CG, which is
/// non-symmetric for the SOR family and may stagnate or abort on hard
/// systems (reported, not thrown).
inline std::pair<DenseVector, SolveReport> pcg_solve(const SparseMatrix& a, const DenseVector& f,
                                                     const AmgHierarchy& h, double tol = 1e-8,
                                                     int n_max = 500,
                                                     bool symmetric_precond = true) {
    if (!h.smoother_attached && h.levels.size() > 1)
        throw std::logic_error("pcg_solve: no smoother attached");
    auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.theta = h.theta;
    rep.smoother = h.smoother_kind;
    rep.nu1 = rep.nu2 = 1;
    rep.tol = tol;
    rep.n_max = n_max;

    const std::size_t n = f.size();
    DenseVector u(n, 0.0);
    DenseVector r = f;  // r = f - A*0
    double r0norm = norm2(r);
    rep.residual_history.push_back(r0norm);
    if (r0norm == 0.0) {
        rep.converged = true;
        rep.rho = 0.0;
        rep.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return {std::move(u), rep};
    }

    detail::CycleWork w(h);
    DenseVector z(n);
    auto precond = [&](const DenseVector& rhs, DenseVector& out) {
        out.assign(n, 0.0);
        detail::vcycle_level(h, 0, out, rhs, 1, 1, symmetric_precond, w);
    };

    precond(r, z);
    double rz = dot(r, z);
    DenseVector p = z, ap;
    bool aborted = (rz <= 0.0 || !std::isfinite(rz));
    if (!aborted) {
        for (int it = 0; it < n_max; ++it) {
            matvec(a, p, ap);
            double pap = dot(p, ap);
            if (pap <= 0.0 || !std::isfinite(pap)) {
                aborted = true;
                break;
            }
            double alpha = rz / pap;
            axpy(alpha, p, u);
            axpy(-alpha, ap, r);
            double rn = norm2(r);
            rep.residual_history.push_back(rn);
            rep.n_it = it + 1;
            if (rn / r0norm < tol) {
                rep.converged = true;
                break;
            }
            if (!std::isfinite(rn) || rn > 1e10 * r0norm) {
                aborted = true;  // runaway residual under a broken preconditioner
                break;
            }
            precond(r, z);
            double rz_next = dot(r, z);
            if (rz_next <= 0.0 || !std::isfinite(rz_next)) {
                aborted = true;
                break;
            }
            double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
    }
    (void)aborted;
    rep.rho = convergence_factor(rep.residual_history);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(u), rep};
}

/// Convenience wrapper used by the sweep and evaluation drivers: build the
/// hierarchy for (theta, smoother) and run AMG-preconditioned CG.
inline std::pair<DenseVector, SolveReport> solve_with_params(
    const SparseMatrix& a, const DenseVector& f, double theta, SmootherKind kind,
    std::uint64_t seed, double tol = 1e-8, int n_max = 500, AmgLimits limits = {},
    SmootherOptions opt = {}, bool symmetric_precond = true) {
    AmgHierarchy h = amg_setup(a, theta, seed, limits);
    attach_smoother(h, kind, opt);
    auto t0 = std::chrono::steady_clock::now();
    auto [u, rep] = pcg_solve(a, f, h, tol, n_max, symmetric_precond);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.theta = theta;
    return {std::move(u), rep};
}

} // namespace amgtune
