#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "amgtune/cycle.hpp"
#include "amgtune/problem.hpp"
#include "amgtune/rng.hpp"
#include "amgtune/savgol.hpp"
#include "amgtune/smoothers.hpp"

namespace amgtune {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// One dataset record: a (problem, theta, smoother) measurement.
struct CostSample {
    std::string problem_id;
    index_t n = 0, nnz = 0;
    int dim = 2, p = 1;
    double theta = 0.0;
    SmootherKind smoother = SmootherKind::SorJacobi;
    bool converged = false;
    int n_it = 0;
    double rho = 0.0;
    std::vector<double> raw_times;
    double mean_time = kInf;
    double smoothed_time = kInf;
    double cost = 1.0;
    std::string split;  // train | val | test | empty
};

struct SweepPlan {
    std::vector<double> thetas;
    std::vector<SmootherKind> smoothers{SmootherKind::SorJacobi, SmootherKind::L1Jacobi,
                                        SmootherKind::L1SorJacobi, SmootherKind::FcfJacobi};
    std::string metric = "rho";     // rho | time | both
    double repetition_constant = 2.0;  // seconds; r = clamp(round(C/t2), 2, 100)
};

/// Size-driven theta grid: fine 0.025 steps below 20k unknowns, 0.05 steps
/// up to 100k, ten seeded uniform samples beyond.
inline std::vector<double> plan_theta_grid(index_t n, std::uint64_t seed = 0) {
    if (n < 1) throw std::invalid_argument("plan_theta_grid: n must be positive");
    std::vector<double> g;
    if (n < 20000) {
        for (int k = 0; k < 37; ++k) g.push_back(0.05 + 0.025 * k);
    } else if (n <= 100000) {
        for (int k = 0; k < 19; ++k) g.push_back(0.05 + 0.05 * k);
    } else {
        Rng rng(derive_seed(seed, "theta-grid"));
        for (int k = 0; k < 10; ++k) g.push_back(rng.uniform(0.05, 0.95));
        std::sort(g.begin(), g.end());
    }
    return g;
}

struct TimingResult {
    std::vector<double> raw;
    double mean = kInf;
    SolveReport report;  // of the first run
};

/// Timing with the adaptive repetition rule: two runs fix the repetition
/// count r = clamp(round(C / mean2), 2, 100); the reported time is the mean
/// over all r runs. A non-convergent configuration is measured once and
/// marked infinite.
inline TimingResult measure_time(const SparseMatrix& a, const DenseVector& f, double theta,
                                 SmootherKind kind, std::uint64_t seed,
                                 double repetition_constant = 2.0, double tol = 1e-8,
                                 int n_max = 500, AmgLimits limits = {},
                                 bool symmetric_precond = true) {
    TimingResult res;
    auto [u1, rep1] =
        solve_with_params(a, f, theta, kind, seed, tol, n_max, limits, {}, symmetric_precond);
    res.report = rep1;
    if (!rep1.converged) return res;
    res.raw.push_back(rep1.wall_time);
    auto [u2, rep2] =
        solve_with_params(a, f, theta, kind, seed, tol, n_max, limits, {}, symmetric_precond);
    res.raw.push_back(rep2.wall_time);
    double mean2 = 0.5 * (res.raw[0] + res.raw[1]);
    long r = std::lround(repetition_constant / std::max(mean2, 1e-12));
    r = std::clamp<long>(r, 2, 100);
    for (long k = 2; k < r; ++k) {
        auto [u, rep] =
            solve_with_params(a, f, theta, kind, seed, tol, n_max, limits, {}, symmetric_precond);
        res.raw.push_back(rep.wall_time);
    }
    double s = 0.0;
    for (double t : res.raw) s += t;
    res.mean = s / static_cast<double>(res.raw.size());
    return res;
}

/// Applies Savitzky-Golay smoothing to the per-(problem, smoother) time
/// curves over their theta grids; rho-metric samples pass through.
inline void apply_time_smoothing(std::vector<CostSample>& samples, SavgolConfig cfg = {}) {
    std::map<std::pair<std::string, int>, std::vector<std::size_t>> curves;
    for (std::size_t i = 0; i < samples.size(); ++i)
        curves[{samples[i].problem_id, static_cast<int>(samples[i].smoother)}].push_back(i);
    for (auto& [key, idx] : curves) {
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return samples[a].theta < samples[b].theta; });
        std::vector<double> grid, series;
        for (std::size_t i : idx) {
            grid.push_back(samples[i].theta);
            series.push_back(samples[i].mean_time);
        }
        std::vector<double> smooth = savgol_smooth(series, cfg, &grid);
        for (std::size_t k = 0; k < idx.size(); ++k) samples[idx[k]].smoothed_time = smooth[k];
    }
}

/// Fills the cost targets: time metric = per-problem min-max of the finite
/// smoothed times (failures cost 1, a degenerate range costs 0); rho metric =
/// clip(rho, 0, 1) with failures at 1. Problems where nothing converged are
/// dropped; their ids are returned.
inline std::vector<std::string> normalize_costs(std::vector<CostSample>& samples,
                                                const std::string& metric) {
    if (metric == "rho") {
        for (CostSample& s : samples)
            s.cost = s.converged ? std::clamp(s.rho, 0.0, 1.0) : 1.0;
        return {};
    }
    if (metric != "time" && metric != "both")
        throw std::invalid_argument("unknown cost metric: " + metric);
    std::map<std::string, std::pair<double, double>> range;
    for (const CostSample& s : samples) {
        if (!std::isfinite(s.smoothed_time)) continue;
        auto [it, fresh] = range.try_emplace(s.problem_id, s.smoothed_time, s.smoothed_time);
        if (!fresh) {
            it->second.first = std::min(it->second.first, s.smoothed_time);
            it->second.second = std::max(it->second.second, s.smoothed_time);
        }
    }
    std::vector<std::string> dropped;
    std::vector<CostSample> kept;
    kept.reserve(samples.size());
    for (CostSample& s : samples) {
        auto it = range.find(s.problem_id);
        if (it == range.end()) {
            if (dropped.empty() || dropped.back() != s.problem_id) dropped.push_back(s.problem_id);
            continue;
        }
        auto [lo, hi] = it->second;
        if (!std::isfinite(s.smoothed_time))
            s.cost = 1.0;
        else if (hi == lo)
            s.cost = 0.0;
        else
            s.cost = (s.smoothed_time - lo) / (hi - lo);
        kept.push_back(std::move(s));
    }
    samples = std::move(kept);
    return dropped;
}

/// Problem-level 60-20-20 split; every sample inherits its problem's tag.
inline void split_dataset(std::vector<CostSample>& samples, std::uint64_t seed) {
    std::vector<std::string> ids;
    for (const CostSample& s : samples) ids.push_back(s.problem_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() < 5) throw std::invalid_argument("split_dataset: need at least 5 problems");
    Rng rng(derive_seed(seed, "split"));
    shuffle(ids, rng);
    std::size_t n = ids.size();
    std::size_t n_train = static_cast<std::size_t>(std::llround(0.6 * n));
    std::size_t n_val = static_cast<std::size_t>(std::llround(0.2 * n));
    std::map<std::string, std::string> tag;
    for (std::size_t i = 0; i < n; ++i)
        tag[ids[i]] = i < n_train ? "train" : (i < n_train + n_val ? "val" : "test");
    for (CostSample& s : samples) s.split = tag[s.problem_id];
}

// --- record I/O -------------------------------------------------------------

namespace datasetdetail {

inline std::string num(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline double parse_num(const std::string& s) {
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    return std::stod(s);
}

} // namespace datasetdetail

inline std::string sample_record(const CostSample& s) {
    using datasetdetail::num;
    std::ostringstream os;
    os << "problem_id=" << s.problem_id << " n=" << s.n << " nnz=" << s.nnz << " dim=" << s.dim
       << " p=" << s.p << " theta=" << num(s.theta) << " smoother=" << smoother_name(s.smoother)
       << " converged=" << (s.converged ? 1 : 0) << " n_it=" << s.n_it << " rho=" << num(s.rho)
       << " raw_times=";
    if (s.raw_times.empty()) {
        os << "-";
    } else {
        for (std::size_t i = 0; i < s.raw_times.size(); ++i)
            os << (i ? "," : "") << num(s.raw_times[i]);
    }
    os << " mean_time=" << num(s.mean_time) << " smoothed_time=" << num(s.smoothed_time)
       << " cost=" << num(s.cost) << " split=" << (s.split.empty() ? "-" : s.split);
    return os.str();
}

inline CostSample parse_sample_record(const std::string& line) {
    CostSample s;
    std::istringstream is(line);
    std::string kv;
    while (is >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::runtime_error("malformed sample record: " + kv);
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        using datasetdetail::parse_num;
        if (key == "problem_id") s.problem_id = val;
        else if (key == "n") s.n = static_cast<index_t>(std::stol(val));
        else if (key == "nnz") s.nnz = static_cast<index_t>(std::stol(val));
        else if (key == "dim") s.dim = std::stoi(val);
        else if (key == "p") s.p = std::stoi(val);
        else if (key == "theta") s.theta = parse_num(val);
        else if (key == "smoother") s.smoother = smoother_from_name(val);
        else if (key == "converged") s.converged = val == "1";
        else if (key == "n_it") s.n_it = std::stoi(val);
        else if (key == "rho") s.rho = parse_num(val);
        else if (key == "raw_times") {
            if (val != "-") {
                std::istringstream ts(val);
                std::string tok;
                while (std::getline(ts, tok, ',')) s.raw_times.push_back(parse_num(tok));
            }
        } else if (key == "mean_time") s.mean_time = parse_num(val);
        else if (key == "smoothed_time") s.smoothed_time = parse_num(val);
        else if (key == "cost") s.cost = parse_num(val);
        else if (key == "split") s.split = val == "-" ? "" : val;
        else throw std::runtime_error("unknown sample field: " + key);
    }
    return s;
}

} // namespace amgtune
