#pragma once

#include <chrono>

#include "amgtune/nn.hpp"
#include "amgtune/pooling.hpp"
#include "amgtune/smoothers.hpp"

namespace amgtune {

/// Outcome of the online grid search over theta in {0, 0.01, ..., 1} times
/// the four smoothers.
struct TuningResult {
    double theta_star = 0.0;
    SmootherKind smoother_star = SmootherKind::SorJacobi;
    double predicted_cost = 0.0;
    std::vector<std::array<double, 4>> table;  // 101 rows, one column per smoother
    double tuner_wall_time = 0.0;              // pooling + normalization + search
    bool extrapolated = false;                 // theta* outside the trained [0.05, 0.95]
};

/// Default AMG parameters the gains are measured against.
inline std::pair<double, SmootherKind> default_params(int dim) {
    if (dim == 2) return {0.25, SmootherKind::SorJacobi};
    if (dim == 3) return {0.5, SmootherKind::SorJacobi};
    throw std::invalid_argument("default_params: dim must be 2 or 3");
}

/// Online phase: pool the matrix, normalize, evaluate the surrogate on the
/// full 101 x 4 grid and take the argmin. Ties break toward the smallest
/// theta, then the smoother list order.
inline TuningResult tune(const SparseMatrix& a, const SurrogateModel& model, double p = 0.0) {
    auto t0 = std::chrono::steady_clock::now();
    TuningResult res;
    PooledTensor v = normalize(pool(a, model.spec.m));
    const double log_n = std::log(static_cast<double>(a.n()));
    const std::vector<double> features = forward_conv_features(model, v);
    res.table.assign(101, {0.0, 0.0, 0.0, 0.0});
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 100; ++k) {
        const double theta = k / 100.0;
        for (int s = 0; s < 4; ++s) {
            SmootherKind kind = kAllSmootherKinds[s];
            double c = forward_from_features(model, features, log_n, p, theta,
                                             smoother_one_hot(kind));
            res.table[k][s] = c;
            if (c < best) {
                best = c;
                res.theta_star = theta;
                res.smoother_star = kind;
            }
        }
    }
    res.predicted_cost = best;
    res.extrapolated = res.theta_star < 0.05 || res.theta_star > 0.95;
    res.tuner_wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace amgtune
