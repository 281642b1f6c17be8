#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>

#include "amgtune/dataset.hpp"
#include "amgtune/problem.hpp"
#include "amgtune/tuner.hpp"

namespace amgtune {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

/// Per-problem performance of the tuned parameters against the defaults and
/// against the best dataset configuration.
struct PerformanceRecord {
    std::string problem_id;
    double theta_star = 0.0;
    SmootherKind smoother_star = SmootherKind::SorJacobi;
    bool tuned_converged = false;
    bool default_converged = false;
    double t_ann = kInf;            // tuned solve time, solver only
    double t_ann_inclusive = kInf;  // plus pooling and grid-search overhead
    double t0 = kInf;               // default-parameter time
    double t_min = kNan;            // best measured dataset time
    double p_index = 0.0;           // P  = 1 - t_ann / t0 (1 when t0 = inf)
    double p_max = kNan;            // P_MAX = 1 - t_min / t0
    double p_r = kNan;              // P / P_MAX
    std::array<double, 4> p_i{kNan, kNan, kNan, kNan};  // vs per-smoother defaults
};

struct EvalOptions {
    bool per_smoother_defaults = true;
    bool inclusive_time = true;  // report t_ann including tuner overhead
    double repetition_constant = 2.0;
    double tol = 1e-8;
    int n_max = 500;
    bool symmetric_precond = true;  // suite solver protocol
    std::uint64_t seed = 0;
    AmgLimits limits;
};

/// Evaluates one problem: tunes with the model, measures the tuned and
/// default configurations with the sweep timing protocol, and pulls t_min
/// from the problem's dataset samples (the finite measured means).
inline PerformanceRecord evaluate_problem(const ProblemInstance& prob, const SurrogateModel& model,
                                          const std::vector<CostSample>& dataset,
                                          const EvalOptions& opt = {}) {
    PerformanceRecord rec;
    rec.problem_id = prob.id;

    TuningResult tuned = tune(prob.matrix, model, prob.p);
    rec.theta_star = tuned.theta_star;
    rec.smoother_star = tuned.smoother_star;

    std::uint64_t seed = derive_seed(opt.seed, "eval-" + prob.id);
    // the online grid includes theta = 0; the strength rule needs (0, 1]
    const double solve_theta = std::clamp(tuned.theta_star, 0.01, 1.0);
    TimingResult t_ann =
        measure_time(prob.matrix, prob.rhs, solve_theta, tuned.smoother_star, seed,
                     opt.repetition_constant, opt.tol, opt.n_max, opt.limits, opt.symmetric_precond);
    rec.tuned_converged = t_ann.report.converged;
    rec.t_ann = t_ann.mean;
    rec.t_ann_inclusive = t_ann.mean + tuned.tuner_wall_time;

    auto [theta_def, smoother_def] = default_params(prob.dim);
    TimingResult t0 =
        measure_time(prob.matrix, prob.rhs, theta_def, smoother_def, seed, opt.repetition_constant,
                     opt.tol, opt.n_max, opt.limits, opt.symmetric_precond);
    rec.default_converged = t0.report.converged;
    rec.t0 = t0.mean;

    bool any_time = false;
    for (const CostSample& s : dataset) {
        if (s.problem_id != prob.id || !std::isfinite(s.mean_time)) continue;
        rec.t_min = any_time ? std::min(rec.t_min, s.mean_time) : s.mean_time;
        any_time = true;
    }

    const double t_used = opt.inclusive_time ? rec.t_ann_inclusive : rec.t_ann;
    if (rec.t0 == kInf) {
        rec.p_index = 1.0;
        rec.p_max = 1.0;
        rec.p_r = 1.0;
    } else {
        rec.p_index = 1.0 - t_used / rec.t0;
        if (any_time) {
            rec.p_max = 1.0 - rec.t_min / rec.t0;
            rec.p_r = (rec.p_max == 0.0 && rec.p_index == 0.0) ? 1.0 : rec.p_index / rec.p_max;
        }
    }

    if (opt.per_smoother_defaults) {
        for (int i = 0; i < 4; ++i) {
            SmootherKind kind = kAllSmootherKinds[i];
            double t0i;
            if (kind == smoother_def) {
                t0i = rec.t0;
            } else {
                TimingResult t = measure_time(prob.matrix, prob.rhs, theta_def, kind, seed,
                                              opt.repetition_constant, opt.tol, opt.n_max,
                                              opt.limits, opt.symmetric_precond);
                t0i = t.mean;
            }
            rec.p_i[i] = (t0i == kInf) ? 1.0 : 1.0 - t_used / t0i;
        }
    }
    return rec;
}

/// Suite-level aggregates mirroring the evaluation table: P_B (share of
/// P >= 0), P_w (share of failed defaults), mean/median P, median P_MAX,
/// P_r = P_M / P_MAX, and the per-smoother medians; all in percent.
struct EvalAggregates {
    int count = 0;
    double p_b = 0.0, p_w = 0.0, p_m = 0.0, p_med = 0.0;
    double p_max_med = kNan;
    double p_r = kNan;
    std::array<double, 4> p_med_i{kNan, kNan, kNan, kNan};
};

namespace evaldetail {

inline double median(std::vector<double> v) {
    if (v.empty()) return kNan;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace evaldetail

inline EvalAggregates aggregate(const std::vector<PerformanceRecord>& records) {
    if (records.empty()) throw std::invalid_argument("aggregate: no performance records");
    EvalAggregates agg;
    agg.count = static_cast<int>(records.size());
    std::vector<double> p, pmax;
    std::array<std::vector<double>, 4> pi;
    int won = 0, wall = 0;
    double mean = 0.0;
    for (const PerformanceRecord& r : records) {
        p.push_back(r.p_index);
        mean += r.p_index;
        won += r.p_index >= 0.0;
        wall += r.t0 == kInf;
        if (!std::isnan(r.p_max)) pmax.push_back(r.p_max);
        for (int i = 0; i < 4; ++i)
            if (!std::isnan(r.p_i[i])) pi[i].push_back(r.p_i[i]);
    }
    agg.p_b = 100.0 * won / agg.count;
    agg.p_w = 100.0 * wall / agg.count;
    agg.p_m = 100.0 * mean / agg.count;
    agg.p_med = 100.0 * evaldetail::median(p);
    agg.p_max_med = 100.0 * evaldetail::median(pmax);
    if (!std::isnan(agg.p_max_med))
        agg.p_r = agg.p_max_med != 0.0 ? 100.0 * agg.p_med / agg.p_max_med : 100.0;
    for (int i = 0; i < 4; ++i)
        if (!pi[i].empty()) agg.p_med_i[i] = 100.0 * evaldetail::median(pi[i]);
    return agg;
}

namespace evaldetail {

inline std::string pct(double v) {
    if (std::isnan(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

} // namespace evaldetail

/// Per-problem CSV plus one aggregate row with the summary columns in the
/// order P_B, P_w, P_m, P_M, P_MAX, P_r, P_M^2, P_M^3, P_M^4.
inline void write_report_csv(const std::vector<PerformanceRecord>& records,
                             const EvalAggregates& agg, const std::string& path) {
    if (records.empty()) throw std::invalid_argument("report: no performance records");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "problem_id,theta_star,smoother_star,tuned_converged,default_converged,"
           "t_ann,t_ann_inclusive,t0,t_min,P,P_MAX,P_r,P1,P2,P3,P4\n";
    out.precision(17);
    auto num = [](double v) { return datasetdetail::num(std::isnan(v) ? kNan : v); };
    for (const PerformanceRecord& r : records) {
        out << r.problem_id << "," << r.theta_star << "," << smoother_name(r.smoother_star) << ","
            << r.tuned_converged << "," << r.default_converged << "," << num(r.t_ann) << ","
            << num(r.t_ann_inclusive) << "," << num(r.t0) << "," << num(r.t_min) << ","
            << num(r.p_index) << "," << num(r.p_max) << "," << num(r.p_r);
        for (int i = 0; i < 4; ++i) out << "," << num(r.p_i[i]);
        out << "\n";
    }
    out << "aggregate,P_B,P_w,P_m,P_M,P_MAX,P_r,P_M2,P_M3,P_M4\n";
    using evaldetail::pct;
    out << "aggregate," << pct(agg.p_b) << "," << pct(agg.p_w) << "," << pct(agg.p_m) << ","
        << pct(agg.p_med) << "," << pct(agg.p_max_med) << "," << pct(agg.p_r) << ","
        << pct(agg.p_med_i[1]) << "," << pct(agg.p_med_i[2]) << "," << pct(agg.p_med_i[3]) << "\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

inline std::string format_summary(const EvalAggregates& agg) {
    using evaldetail::pct;
    std::ostringstream os;
    os << "  P_B    P_w    P_m    P_M    P_MAX  P_r    P_M^2  P_M^3  P_M^4\n";
    for (double v : {agg.p_b, agg.p_w, agg.p_m, agg.p_med, agg.p_max_med, agg.p_r,
                     agg.p_med_i[1], agg.p_med_i[2], agg.p_med_i[3]})
        os << "  " << std::setw(5) << std::left << pct(v);
    os << "\n";
    return os.str();
}

} // namespace amgtune
