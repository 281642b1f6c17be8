// amgtune: generate polytopal test systems, sweep AMG parameters, train the
// cost surrogate, and tune/solve/evaluate with it.

#include <CLI11.hpp>

#include <atomic>
#include <iostream>
#include <thread>

#include "amgtune/evaluate.hpp"
#include "amgtune/model_io.hpp"
#include "amgtune/problem_io.hpp"
#include "amgtune/suites.hpp"
#include "amgtune/sweep.hpp"
#include "amgtune/train.hpp"
#include "amgtune/tuner.hpp"

using namespace amgtune;

namespace {

constexpr int kExitNoConvergence = 3;

struct GlobalOpts {
    std::uint64_t seed = 0;
    int jobs = 1;
};

std::map<std::string, std::shared_ptr<const PooledTensor>> pool_problems(
    const std::vector<ProblemInstance>& problems, int m, int jobs) {
    std::vector<std::shared_ptr<const PooledTensor>> images(problems.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < problems.size(); i = next.fetch_add(1))
            images[i] = std::make_shared<PooledTensor>(normalize(pool(problems[i].matrix, m)));
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < std::max(1, jobs); ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    std::map<std::string, std::shared_ptr<const PooledTensor>> out;
    for (std::size_t i = 0; i < problems.size(); ++i) out[problems[i].id] = images[i];
    return out;
}

int cmd_gen(const GlobalOpts& g, const std::string& suite_name, const std::string& out_dir,
            int r_min, int r_max, int jobs) {
    SuiteDef suite = make_suite(suite_name, r_min, r_max);
    if (suite.problems.empty()) throw std::runtime_error("suite has no problems in range");
    std::vector<ProblemInstance> problems(suite.problems.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < suite.problems.size(); i = next.fetch_add(1))
            problems[i] = generate_problem(suite.problems[i], g.seed);
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < std::max(1, jobs); ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    std::vector<std::string> stems;
    for (const ProblemInstance& p : problems) stems.push_back(save_problem(p, out_dir));
    save_problem_index(stems, out_dir);
    std::ofstream(out_dir + "/suite.txt")
        << "suite=" << suite.name << " metric=" << suite.metric
        << " sym_precond=" << (suite.symmetric_precond ? 1 : 0) << " seed=" << g.seed << "\n";
    std::cout << "generated " << problems.size() << " problems into " << out_dir << "\n";
    return 0;
}

std::string suite_metric(const std::string& dir) {
    std::ifstream in(dir + "/suite.txt");
    std::string kv;
    while (in >> kv) {
        if (kv.rfind("metric=", 0) == 0) return kv.substr(7);
    }
    return "rho";
}

bool suite_symmetric_precond(const std::string& dir) {
    std::ifstream in(dir + "/suite.txt");
    std::string kv;
    while (in >> kv) {
        if (kv.rfind("sym_precond=", 0) == 0) return kv.substr(12) != "0";
    }
    return true;
}

int cmd_sweep(const GlobalOpts& g, const std::string& problems_dir, const std::string& out_file,
              std::string metric, double tol, int n_max, double rep_const, bool resume) {
    std::vector<ProblemInstance> problems = load_problem_set(problems_dir);
    if (metric.empty()) metric = suite_metric(problems_dir);

    SweepConfig cfg;
    cfg.metric = metric;
    cfg.tol = tol;
    cfg.n_max = n_max;
    cfg.repetition_constant = rep_const;
    cfg.seed = g.seed;
    cfg.jobs = g.jobs;
    cfg.symmetric_precond = suite_symmetric_precond(problems_dir);

    std::map<std::string, std::set<SweepKey>> done;
    std::vector<CostSample> existing;
    if (resume && std::filesystem::exists(out_file)) {
        existing = load_samples(out_file);
        for (const CostSample& s : existing) done[s.problem_id].insert(sweep_key(s));
    }
    std::vector<const ProblemInstance*> ptrs;
    for (const ProblemInstance& p : problems) ptrs.push_back(&p);
    std::vector<CostSample> fresh = sweep_problems(ptrs, cfg, done.empty() ? nullptr : &done);

    // canonical file order: problem index order, then theta, then smoother
    std::map<std::string, std::size_t> order;
    for (std::size_t i = 0; i < problems.size(); ++i) order[problems[i].id] = i;
    std::vector<CostSample> all = std::move(existing);
    for (CostSample& s : fresh) all.push_back(std::move(s));
    std::stable_sort(all.begin(), all.end(), [&](const CostSample& a, const CostSample& b) {
        auto oa = order.count(a.problem_id) ? order[a.problem_id] : order.size();
        auto ob = order.count(b.problem_id) ? order[b.problem_id] : order.size();
        if (oa != ob) return oa < ob;
        if (a.theta != b.theta) return a.theta < b.theta;
        return static_cast<int>(a.smoother) < static_cast<int>(b.smoother);
    });
    save_samples(all, out_file);
    std::cout << "swept " << problems.size() << " problems, " << all.size() << " samples -> "
              << out_file << "\n";
    return 0;
}

int cmd_train(const GlobalOpts& g, const std::string& data_file, const std::string& problems_dir,
              const std::string& model_out, const std::string& history_out, int m, TrainConfig cfg,
              const std::string& metric_override) {
    std::vector<CostSample> samples = load_samples(data_file);
    if (samples.empty()) throw std::runtime_error("dataset is empty");
    std::string metric = metric_override.empty() ? suite_metric(problems_dir) : metric_override;
    std::vector<std::string> dropped = normalize_costs(samples, metric);
    for (const std::string& id : dropped)
        std::cerr << "warning: dropped problem with no convergent samples: " << id << "\n";
    bool untagged = false;
    for (const CostSample& s : samples) untagged = untagged || s.split.empty();
    if (untagged) split_dataset(samples, g.seed);

    std::vector<ProblemInstance> problems = load_problem_set(problems_dir);
    auto images = pool_problems(problems, m, g.jobs);

    // drop samples for problems without matrices on disk (defensive join)
    std::vector<CostSample> usable;
    for (CostSample& s : samples)
        if (images.count(s.problem_id)) usable.push_back(std::move(s));
    std::vector<TrainSample> training = build_training_set(usable, images);

    ArchitectureSpec spec;
    spec.m = m;
    if (m <= 8) spec.blocks = {{2, 8, 3}};
    cfg.seed = g.seed;
    SurrogateModel model = make_model(spec, g.seed);
    TrainHistory history = train(model, training, cfg);
    save_model(model, model_out);

    if (!history_out.empty()) {
        std::ofstream h(history_out);
        h << "epoch,train_mse,val_mse,learning_rate\n";
        h.precision(17);
        for (const EpochStats& e : history.epochs)
            h << e.epoch << "," << e.train_mse << "," << e.val_mse << "," << e.learning_rate
              << "\n";
    }
    std::cout << "trained " << history.epochs.size() << " epochs, best val MSE "
              << history.best_val_mse << " -> " << model_out << "\n";
    return 0;
}

int cmd_tune(const std::string& matrix_file, const std::string& model_file, double p,
             const std::string& out_file, bool print_table) {
    SurrogateModel model = load_model(model_file);
    SparseMatrix a = read_matrix_market(matrix_file);
    TuningResult res = tune(a, model, p);
    std::ostringstream body;
    body.precision(17);
    body << "theta_star=" << res.theta_star << " smoother_star=" << smoother_name(res.smoother_star)
         << " predicted_cost=" << res.predicted_cost << " extrapolated=" << res.extrapolated
         << "\n";
    if (print_table) {
        for (int k = 0; k <= 100; ++k) {
            body << k / 100.0;
            for (int s = 0; s < 4; ++s) body << " " << res.table[k][s];
            body << "\n";
        }
    }
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        out << body.str();
    }
    std::cout << body.str();
    std::cerr << "tuner wall time: " << res.tuner_wall_time << " s\n";
    return 0;
}

int cmd_solve(const GlobalOpts& g, const std::string& matrix_file, const std::string& rhs_file,
              double theta, std::string smoother, const std::string& model_file, double tol,
              int n_max, int nu1, int nu2) {
    const bool explicit_params = theta > 0.0 || !smoother.empty();
    if (explicit_params && !model_file.empty())
        throw std::runtime_error("solve: --theta/--smoother and --model are mutually exclusive");
    SparseMatrix a = read_matrix_market(matrix_file);
    DenseVector f = rhs_file.empty() ? DenseVector(static_cast<std::size_t>(a.n()), 1.0)
                                     : read_matrix_market_vector(rhs_file);

    SmootherKind kind = SmootherKind::SorJacobi;
    if (!model_file.empty()) {
        SurrogateModel model = load_model(model_file);
        TuningResult res = tune(a, model);
        theta = std::clamp(res.theta_star, 0.01, 1.0);
        kind = res.smoother_star;
        std::cerr << "tuned: theta=" << theta << " smoother=" << smoother_name(kind) << "\n";
    } else {
        if (theta <= 0.0) theta = 0.25;
        if (!smoother.empty()) kind = smoother_from_name(smoother);
    }

    AmgHierarchy h = amg_setup(a, theta, g.seed);
    attach_smoother(h, kind);
    auto [u, rep] = pcg_solve(a, f, h, tol, n_max);
    rep.theta = theta;
    rep.nu1 = nu1;
    rep.nu2 = nu2;
    std::cout << rep.to_record() << "\n";
    return rep.converged ? 0 : kExitNoConvergence;
}

int cmd_eval(const GlobalOpts& g, const std::string& problems_dir, const std::string& model_file,
             const std::string& data_file, const std::string& out_file, const std::string& split,
             bool per_smoother, double rep_const, double tol, int n_max) {
    std::vector<ProblemInstance> problems = load_problem_set(problems_dir);
    SurrogateModel model = load_model(model_file);
    std::vector<CostSample> dataset = load_samples(data_file);

    std::set<std::string> wanted;
    if (!split.empty()) {
        for (const CostSample& s : dataset)
            if (s.split == split) wanted.insert(s.problem_id);
    }

    EvalOptions opt;
    opt.per_smoother_defaults = per_smoother;
    opt.repetition_constant = rep_const;
    opt.tol = tol;
    opt.n_max = n_max;
    opt.seed = g.seed;
    opt.symmetric_precond = suite_symmetric_precond(problems_dir);

    std::set<std::string> in_dataset;
    for (const CostSample& s : dataset) in_dataset.insert(s.problem_id);

    std::vector<PerformanceRecord> records;
    for (const ProblemInstance& prob : problems) {
        if (!split.empty() && !wanted.count(prob.id)) continue;
        if (!in_dataset.count(prob.id)) continue;
        records.push_back(evaluate_problem(prob, model, dataset, opt));
    }
    if (records.empty()) throw std::runtime_error("no problems matched the evaluation filter");
    EvalAggregates agg = aggregate(records);
    if (!out_file.empty()) write_report_csv(records, agg, out_file);
    std::cout << format_summary(agg);
    return 0;
}

int cmd_report(const std::string& records_file, const std::string& out_file) {
    // re-aggregate a per-problem CSV produced by eval
    std::ifstream in(records_file);
    if (!in) throw std::runtime_error("cannot open " + records_file);
    std::string line;
    std::getline(in, line);  // header
    std::vector<PerformanceRecord> records;
    auto parse_opt = [](const std::string& s) {
        return (s == "nan" || s == "-nan" || s.empty()) ? kNan : datasetdetail::parse_num(s);
    };
    while (std::getline(in, line)) {
        if (line.rfind("aggregate", 0) == 0) break;
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) cols.push_back(tok);
        if (cols.size() < 16) continue;
        PerformanceRecord r;
        r.problem_id = cols[0];
        r.theta_star = std::stod(cols[1]);
        r.smoother_star = smoother_from_name(cols[2]);
        r.tuned_converged = cols[3] == "1";
        r.default_converged = cols[4] == "1";
        r.t_ann = parse_opt(cols[5]);
        r.t_ann_inclusive = parse_opt(cols[6]);
        r.t0 = parse_opt(cols[7]);
        r.t_min = parse_opt(cols[8]);
        r.p_index = parse_opt(cols[9]);
        r.p_max = parse_opt(cols[10]);
        r.p_r = parse_opt(cols[11]);
        for (int i = 0; i < 4; ++i) r.p_i[i] = parse_opt(cols[12 + i]);
        records.push_back(std::move(r));
    }
    if (records.empty()) throw std::runtime_error("no records in " + records_file);
    EvalAggregates agg = aggregate(records);
    if (!out_file.empty()) write_report_csv(records, agg, out_file);
    std::cout << format_summary(agg);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"AMG parameter tuning toolkit"};
    app.set_config("--config", "", "configuration file (INI sections per subcommand)");
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "global random seed")->envname("AMGTUNE_SEED");
    app.add_option("--jobs", g.jobs, "parallel problem-level workers")->envname("AMGTUNE_JOBS");

    auto* gen = app.add_subcommand("gen", "generate a problem suite");
    std::string gen_suite = "tc1-mini", gen_out = "problems";
    int gen_rmin = 0, gen_rmax = 99;
    gen->add_option("--suite", gen_suite, "suite name");
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--r-min", gen_rmin, "minimum refinement level");
    gen->add_option("--r-max", gen_rmax, "maximum refinement level");

    auto* sweep = app.add_subcommand("sweep", "sweep theta x smoother over a suite");
    std::string sweep_dir, sweep_out = "samples.txt", sweep_metric;
    double sweep_tol = 1e-8, sweep_rep = 2.0;
    int sweep_nmax = 500;
    bool sweep_fresh = false;
    sweep->add_option("--problems", sweep_dir, "problem directory")->required();
    sweep->add_option("--out", sweep_out, "sample stream file");
    sweep->add_option("--metric", sweep_metric, "rho | time | both (default: suite metric)");
    sweep->add_option("--tol", sweep_tol, "solver tolerance");
    sweep->add_option("--n-max", sweep_nmax, "iteration cap");
    sweep->add_option("--rep-const", sweep_rep, "timing repetition constant (seconds)");
    sweep->add_flag("--fresh", sweep_fresh, "ignore an existing sample file instead of resuming");

    auto* tr = app.add_subcommand("train", "train the cost surrogate");
    std::string tr_data, tr_dir, tr_model = "model.txt", tr_hist, tr_metric;
    int tr_m = 32;
    TrainConfig tr_cfg;
    tr->add_option("--data", tr_data, "sample stream file")->required();
    tr->add_option("--problems", tr_dir, "problem directory (for pooling)")->required();
    tr->add_option("--out", tr_model, "model output file");
    tr->add_option("--history", tr_hist, "training history CSV");
    tr->add_option("--metric", tr_metric, "cost metric override");
    tr->add_option("--m", tr_m, "pooling size");
    tr->add_option("--epochs", tr_cfg.max_epochs, "epoch budget");
    tr->add_option("--lr", tr_cfg.learning_rate, "initial learning rate");
    tr->add_option("--weight-decay", tr_cfg.weight_decay, "decoupled weight decay");
    tr->add_option("--batch", tr_cfg.minibatch, "minibatch size");
    tr->add_option("--patience", tr_cfg.patience, "plateau patience (epochs)");
    tr->add_option("--min-lr", tr_cfg.min_learning_rate, "learning-rate floor");

    auto* tu = app.add_subcommand("tune", "predict the best theta and smoother for a matrix");
    std::string tu_matrix, tu_model, tu_out;
    double tu_p = 0.0;
    bool tu_table = false;
    tu->add_option("--matrix", tu_matrix, "Matrix Market file")->required();
    tu->add_option("--model", tu_model, "model file")->required();
    tu->add_option("--p", tu_p, "polynomial degree input (0 when unknown)");
    tu->add_option("--out", tu_out, "write the result (and table) to a file");
    tu->add_flag("--table", tu_table, "print the full 101x4 prediction table");

    auto* so = app.add_subcommand("solve", "solve a system with AMG-preconditioned CG");
    std::string so_matrix, so_rhs, so_smoother, so_model;
    double so_theta = 0.0, so_tol = 1e-8;
    int so_nmax = 500, so_nu1 = 1, so_nu2 = 1;
    so->add_option("--matrix", so_matrix, "Matrix Market file")->required();
    so->add_option("--rhs", so_rhs, "right-hand side (array format; default: ones)");
    so->add_option("--theta", so_theta, "strong threshold");
    so->add_option("--smoother", so_smoother, "sor-jacobi | l1-jacobi | l1-sor-jacobi | fcf-jacobi");
    so->add_option("--model", so_model, "tune parameters with this model instead");
    so->add_option("--tol", so_tol, "relative residual tolerance");
    so->add_option("--n-max", so_nmax, "iteration cap");
    so->add_option("--nu1", so_nu1, "pre-smoothing sweeps");
    so->add_option("--nu2", so_nu2, "post-smoothing sweeps");

    auto* ev = app.add_subcommand("eval", "evaluate tuned performance against the defaults");
    std::string ev_dir, ev_model, ev_data, ev_out = "report.csv", ev_split;
    bool ev_no_smoothers = false;
    double ev_rep = 2.0, ev_tol = 1e-8;
    int ev_nmax = 500;
    ev->add_option("--problems", ev_dir, "problem directory")->required();
    ev->add_option("--model", ev_model, "model file")->required();
    ev->add_option("--data", ev_data, "sample stream file")->required();
    ev->add_option("--out", ev_out, "per-problem CSV report");
    ev->add_option("--split", ev_split, "restrict to one split tag (train|val|test)");
    ev->add_flag("--no-per-smoother", ev_no_smoothers, "skip the per-smoother default timings");
    ev->add_option("--rep-const", ev_rep, "timing repetition constant (seconds)");
    ev->add_option("--tol", ev_tol, "solver tolerance");
    ev->add_option("--n-max", ev_nmax, "iteration cap");

    auto* re = app.add_subcommand("report", "re-aggregate an eval CSV");
    std::string re_records, re_out;
    re->add_option("--records", re_records, "per-problem CSV from eval")->required();
    re->add_option("--out", re_out, "rewritten CSV path");

    for (CLI::App* sub : {gen, sweep, tr, tu, so, ev, re}) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(g, gen_suite, gen_out, gen_rmin, gen_rmax, g.jobs);
        if (sweep->parsed())
            return cmd_sweep(g, sweep_dir, sweep_out, sweep_metric, sweep_tol, sweep_nmax,
                             sweep_rep, !sweep_fresh);
        if (tr->parsed())
            return cmd_train(g, tr_data, tr_dir, tr_model, tr_hist, tr_m, tr_cfg, tr_metric);
        if (tu->parsed()) return cmd_tune(tu_matrix, tu_model, tu_p, tu_out, tu_table);
        if (so->parsed())
            return cmd_solve(g, so_matrix, so_rhs, so_theta, so_smoother, so_model, so_tol,
                             so_nmax, so_nu1, so_nu2);
        if (ev->parsed())
            return cmd_eval(g, ev_dir, ev_model, ev_data, ev_out, ev_split, !ev_no_smoothers,
                            ev_rep, ev_tol, ev_nmax);
        if (re->parsed()) return cmd_report(re_records, re_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
