#pragma once

#include <atomic>
#include <set>
#include <thread>

#include "amgtune/dataset.hpp"
#include "amgtune/problem.hpp"

namespace amgtune {

struct SweepConfig {
    std::string metric = "rho";  // rho | time | both
    double tol = 1e-8;
    int n_max = 500;
    double repetition_constant = 2.0;
    std::uint64_t seed = 0;
    int jobs = 1;  // time metrics force serial execution
    bool symmetric_precond = true;  // suite solver protocol
    SavgolConfig savgol;
    AmgLimits limits;
};

using SweepKey = std::pair<double, int>;  // theta, smoother index

inline SweepKey sweep_key(const CostSample& s) {
    return {s.theta, static_cast<int>(s.smoother)};
}

/// Full theta-grid x smoother sweep of one problem. Pairs listed in `done`
/// are skipped (resume support). rho-metric sweeps run one solve per pair and
/// leave the time fields unset; time metrics use the repetition protocol.
inline std::vector<CostSample> sweep_problem(const ProblemInstance& prob, const SweepConfig& cfg,
                                             const std::set<SweepKey>* done = nullptr) {
    const bool timed = cfg.metric == "time" || cfg.metric == "both";
    std::vector<double> grid = plan_theta_grid(prob.n(), derive_seed(cfg.seed, prob.id));
    std::vector<CostSample> out;
    for (double theta : grid) {
        for (SmootherKind kind : kAllSmootherKinds) {
            if (done && done->count({theta, static_cast<int>(kind)})) continue;
            CostSample s;
            s.problem_id = prob.id;
            s.n = prob.n();
            s.nnz = prob.nnz();
            s.dim = prob.dim;
            s.p = prob.p;
            s.theta = theta;
            s.smoother = kind;
            std::uint64_t seed = derive_seed(cfg.seed, prob.id);
            if (timed) {
                TimingResult t = measure_time(prob.matrix, prob.rhs, theta, kind, seed,
                                              cfg.repetition_constant, cfg.tol, cfg.n_max,
                                              cfg.limits, cfg.symmetric_precond);
                s.converged = t.report.converged;
                s.n_it = t.report.n_it;
                s.rho = t.report.rho;
                s.raw_times = t.raw;
                s.mean_time = t.mean;
                s.smoothed_time = t.mean;
            } else {
                auto [u, rep] = solve_with_params(prob.matrix, prob.rhs, theta, kind, seed,
                                                  cfg.tol, cfg.n_max, cfg.limits, {},
                                                  cfg.symmetric_precond);
                s.converged = rep.converged;
                s.n_it = rep.n_it;
                s.rho = rep.rho;
            }
            out.push_back(std::move(s));
        }
    }
    if (timed) apply_time_smoothing(out, cfg.savgol);
    return out;
}

/// Sweeps a set of problems. rho-metric sweeps may fan problems out over
/// `jobs` threads; outputs keep the problem order either way. Timing sweeps
/// run strictly serially.
inline std::vector<CostSample> sweep_problems(
    const std::vector<const ProblemInstance*>& problems, const SweepConfig& cfg,
    const std::map<std::string, std::set<SweepKey>>* done = nullptr) {
    auto done_for = [&](const std::string& id) -> const std::set<SweepKey>* {
        if (!done) return nullptr;
        auto it = done->find(id);
        return it == done->end() ? nullptr : &it->second;
    };
    std::vector<std::vector<CostSample>> buckets(problems.size());
    const bool timed = cfg.metric == "time" || cfg.metric == "both";
    int jobs = timed ? 1 : std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < problems.size(); ++i)
            buckets[i] = sweep_problem(*problems[i], cfg, done_for(problems[i]->id));
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t i = next.fetch_add(1); i < problems.size(); i = next.fetch_add(1))
                buckets[i] = sweep_problem(*problems[i], cfg, done_for(problems[i]->id));
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::vector<CostSample> out;
    for (auto& b : buckets)
        for (CostSample& s : b) out.push_back(std::move(s));
    return out;
}

} // namespace amgtune
