#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "amgtune/dense.hpp"

namespace amgtune {

struct SavgolConfig {
    int window = 21;  // odd
    int degree = 7;
    /// relative drift of the curve minimum beyond which the filter output is
    /// rejected in favour of the raw series
    double fallback_threshold = 0.2;
};

namespace savgoldetail {

inline double fit_at_center(const std::vector<double>& series, std::size_t k, int half,
                            int degree) {
    // least-squares polynomial over the finite samples in the window,
    // evaluated at the centre; offsets scaled to [-1, 1]
    std::vector<int> offs;
    for (int o = -half; o <= half; ++o) {
        std::size_t idx = k + o;
        if (std::isfinite(series[idx])) offs.push_back(o);
    }
    if (offs.empty()) return series[k];
    int deg = std::min<int>(degree, static_cast<int>(offs.size()) - 1);
    DenseMatrix vand(offs.size(), static_cast<std::size_t>(deg) + 1);
    std::vector<double> rhs(offs.size());
    double scale = std::max(half, 1);
    for (std::size_t r = 0; r < offs.size(); ++r) {
        double t = offs[r] / scale;
        double p = 1.0;
        for (int c = 0; c <= deg; ++c) {
            vand(r, c) = p;
            p *= t;
        }
        rhs[r] = series[k + offs[r]];
    }
    std::vector<double> coeff = least_squares(std::move(vand), std::move(rhs));
    return coeff[0];  // value at t = 0
}

inline double finite_min(const std::vector<double>& s) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : s)
        if (std::isfinite(v)) m = std::min(m, v);
    return m;
}

} // namespace savgoldetail

/// Savitzky-Golay smoothing of a series sampled on a uniform grid. Infinite
/// entries (failed measurements) are excluded from every fit and retained in
/// the output. Edges use shrinking symmetric windows with the degree capped
/// accordingly. Series shorter than the window are returned unchanged, and
/// the whole curve falls back to the raw data when the filter drives a value
/// nonpositive or moves the curve minimum by more than the configured
/// threshold. If a grid is supplied it must be uniform.
inline std::vector<double> savgol_smooth(const std::vector<double>& series,
                                         SavgolConfig cfg = {},
                                         const std::vector<double>* grid = nullptr) {
    if (grid) {
        if (grid->size() != series.size())
            throw std::invalid_argument("savgol: grid/series size mismatch");
        if (grid->size() >= 3) {
            double step = (*grid)[1] - (*grid)[0];
            for (std::size_t i = 2; i < grid->size(); ++i) {
                double s = (*grid)[i] - (*grid)[i - 1];
                if (std::abs(s - step) > 1e-9 * std::max(1.0, std::abs(step)))
                    throw std::invalid_argument("savgol: grid is not uniform");
            }
        }
    }
    const std::size_t n = series.size();
    if (n < static_cast<std::size_t>(cfg.window)) return series;

    std::vector<double> out(n);
    const int maxhalf = (cfg.window - 1) / 2;
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(series[k])) {
            out[k] = series[k];
            continue;
        }
        int half = std::min<int>({maxhalf, static_cast<int>(k), static_cast<int>(n - 1 - k)});
        int degree = std::min(cfg.degree, 2 * half);
        out[k] = savgoldetail::fit_at_center(series, k, half, degree);
    }

    // reject the filtered curve if it broke positivity or moved the minimum
    double raw_min = savgoldetail::finite_min(series);
    double smooth_min = savgoldetail::finite_min(out);
    bool broke_positive = false;
    for (std::size_t k = 0; k < n; ++k)
        if (std::isfinite(out[k]) && out[k] <= 0.0 && series[k] > 0.0) broke_positive = true;
    if (broke_positive) return series;
    if (std::isfinite(raw_min) && raw_min > 0.0 &&
        std::abs(smooth_min - raw_min) > cfg.fallback_threshold * raw_min)
        return series;
    return out;
}

} // namespace amgtune
