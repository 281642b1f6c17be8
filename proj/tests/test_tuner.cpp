#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "amgtune/evaluate.hpp"
#include "amgtune/fem.hpp"
#include "amgtune/suites.hpp"
#include "amgtune/tuner.hpp"
#include "support/fixtures.hpp"

using namespace amgtune;
using namespace amgtune::testing;

namespace {

SurrogateModel zero_model(int m = 4) {
    ArchitectureSpec spec;
    spec.m = m;
    spec.blocks = {};
    spec.dense_widths = {};
    SurrogateModel model = make_model(spec, 1);
    for (ParamArray& p : model.params) std::fill(p.value.begin(), p.value.end(), 0.0);
    return model;
}

/// Head reads the raw concatenation [image(16), theta, b1..b4, logn, p].
/// Three hidden units realize |theta - 0.4| + 0.1 (1 - b2).
SurrogateModel rigged_model() {
    ArchitectureSpec spec;
    spec.m = 2;
    spec.blocks = {};
    spec.dense_widths = {3};
    SurrogateModel model = make_model(spec, 1);
    for (ParamArray& p : model.params) std::fill(p.value.begin(), p.value.end(), 0.0);
    auto& w = model.find("dense0.weight").value;  // 3 x 23
    auto& b = model.find("dense0.bias").value;
    const int in_w = 2 * 2 * 4 + 7;
    const int theta_slot = 16, b2_slot = 18;
    w[0 * in_w + theta_slot] = 1.0;   // relu(theta - 0.4)
    b[0] = -0.4;
    w[1 * in_w + theta_slot] = -1.0;  // relu(0.4 - theta)
    b[1] = 0.4;
    w[2 * in_w + b2_slot] = -1.0;     // relu(1 - b2)
    b[2] = 1.0;
    auto& hw = model.find("head.weight").value;
    hw[0] = 1.0;
    hw[1] = 1.0;
    hw[2] = 0.1;
    model.find("head.bias").value[0] = 0.0;
    return model;
}

PerformanceRecord simple_record(double p, double t0, double pmax = kNan) {
    PerformanceRecord r;
    r.p_index = p;
    r.t0 = t0;
    r.p_max = pmax;
    return r;
}

} // namespace

TEST_CASE("default parameters per dimension") {
    auto [t2, s2] = default_params(2);
    CHECK(t2 == 0.25);
    CHECK(s2 == SmootherKind::SorJacobi);
    auto [t3, s3] = default_params(3);
    CHECK(t3 == 0.5);
    CHECK(s3 == SmootherKind::SorJacobi);
    CHECK_THROWS_AS(default_params(4), std::invalid_argument);
}

TEST_CASE("a constant model ties everywhere and the tie-break picks (0, sor-jacobi)") {
    SurrogateModel model = zero_model();
    SparseMatrix a = laplacian_1d(10);
    TuningResult res = tune(a, model);
    CHECK(res.theta_star == 0.0);
    CHECK(res.smoother_star == SmootherKind::SorJacobi);
    CHECK(res.predicted_cost == 0.0);
    CHECK(res.table.size() == 101);
    CHECK(res.extrapolated);  // theta = 0 lies outside the trained range
}

TEST_CASE("a rigged head is minimized at its analytic argmin") {
    SurrogateModel model = rigged_model();
    SparseMatrix a = laplacian_1d(12);
    TuningResult res = tune(a, model);
    CHECK(res.theta_star == Catch::Approx(0.40).margin(1e-12));
    CHECK(res.smoother_star == SmootherKind::L1Jacobi);
    CHECK(res.predicted_cost == Catch::Approx(0.0).margin(1e-12));
    CHECK(!res.extrapolated);

    // the reported cost is the minimum of the returned table
    double table_min = 1e300;
    for (const auto& row : res.table)
        for (double v : row) table_min = std::min(table_min, v);
    CHECK(res.predicted_cost == table_min);
}

TEST_CASE("tune is deterministic") {
    SurrogateModel model = rigged_model();
    SparseMatrix a = laplacian_2d(6, 6);
    TuningResult r1 = tune(a, model);
    TuningResult r2 = tune(a, model);
    CHECK(r1.theta_star == r2.theta_star);
    CHECK(r1.smoother_star == r2.smoother_star);
    CHECK(r1.table == r2.table);
}

TEST_CASE("evaluate_problem fills the performance identities on a live solve") {
    PolyMesh mesh = generate_mesh(MeshFamily::Tri, 2);
    CoefficientField field = make_coefficients(mesh, CoeffPattern::Checkerboard, 0.0);
    ProblemInstance prob = assemble_fem_p1_diffusion(mesh, field);
    prob.id = "unit/fem";

    std::vector<CostSample> dataset;
    CostSample s;
    s.problem_id = "unit/fem";
    s.theta = 0.25;
    s.converged = true;
    s.mean_time = 1e9;  // slower than anything measured live
    dataset.push_back(s);

    SurrogateModel model = zero_model(8);
    EvalOptions opt;
    opt.per_smoother_defaults = true;
    opt.repetition_constant = 0.0;  // two timing runs only
    PerformanceRecord rec = evaluate_problem(prob, model, dataset, opt);

    CHECK(rec.tuned_converged);
    CHECK(rec.default_converged);
    CHECK(std::isfinite(rec.t_ann));
    CHECK(rec.t_ann_inclusive > rec.t_ann);
    CHECK(rec.p_index == 1.0 - rec.t_ann_inclusive / rec.t0);
    CHECK(rec.t_min == 1e9);
    CHECK(rec.p_max == 1.0 - rec.t_min / rec.t0);
    for (int i = 0; i < 4; ++i) CHECK(!std::isnan(rec.p_i[i]));
    // sor-jacobi is the default smoother: P^1 uses t0 itself
    CHECK(rec.p_i[0] == 1.0 - rec.t_ann_inclusive / rec.t0);
}

TEST_CASE("aggregate arithmetic on crafted records") {
    // single problem with P = 0.2
    EvalAggregates one = aggregate({simple_record(0.2, 1.0)});
    CHECK(one.p_b == 100.0);
    CHECK(one.p_m == Catch::Approx(20.0));
    CHECK(one.p_med == Catch::Approx(20.0));

    // t_min = 0.662 t0 -> P_MAX = 0.338
    PerformanceRecord r = simple_record(0.2, 1.0);
    r.t_min = 0.662;
    r.p_max = 1.0 - r.t_min / r.t0;
    EvalAggregates two = aggregate({r});
    CHECK(two.p_max_med == Catch::Approx(33.8));

    // all defaults fail: P_w = 100 forces P_B = P_m = P_M = 100
    std::vector<PerformanceRecord> walls;
    for (int i = 0; i < 4; ++i) {
        PerformanceRecord w;
        w.t0 = kInf;
        w.p_index = 1.0;
        w.p_max = 1.0;
        w.p_r = 1.0;
        walls.push_back(w);
    }
    EvalAggregates wall = aggregate(walls);
    CHECK(wall.p_w == 100.0);
    CHECK(wall.p_b == 100.0);
    CHECK(wall.p_m == 100.0);
    CHECK(wall.p_med == 100.0);

    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}

TEST_CASE("report CSV carries the summary columns in the fixed order") {
    PerformanceRecord r = simple_record(0.2, 1.0);
    r.t_min = 0.662;
    r.p_max = 0.338;
    r.p_r = r.p_index / r.p_max;
    r.p_i = {0.2, 0.1, 0.05, -0.1};
    EvalAggregates agg = aggregate({r});
    auto path = std::filesystem::temp_directory_path() / "amgtune_report.csv";
    write_report_csv({r}, agg, path.string());
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("aggregate,P_B,P_w,P_m,P_M,P_MAX,P_r,P_M2,P_M3,P_M4") != std::string::npos);
    CHECK_THROWS_AS(write_report_csv({}, agg, path.string()), std::invalid_argument);

    std::string summary = format_summary(agg);
    CHECK(summary.find("P_B") != std::string::npos);
    CHECK(summary.find("20.0") != std::string::npos);
}
