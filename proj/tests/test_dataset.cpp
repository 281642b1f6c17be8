#include <catch2/catch_amalgamated.hpp>

#include "amgtune/dataset.hpp"
#include "support/fixtures.hpp"

using namespace amgtune;
using namespace amgtune::testing;

namespace {

CostSample sample_of(const std::string& id, double theta, SmootherKind k, double mean_time,
                     bool converged = true) {
    CostSample s;
    s.problem_id = id;
    s.n = 100;
    s.nnz = 500;
    s.theta = theta;
    s.smoother = k;
    s.converged = converged;
    s.mean_time = mean_time;
    s.smoothed_time = mean_time;
    s.rho = converged ? 0.5 : 1.2;
    return s;
}

} // namespace

TEST_CASE("theta grid follows the size rules") {
    std::vector<double> fine = plan_theta_grid(10000);
    REQUIRE(fine.size() == 37);
    CHECK(fine[0] == Catch::Approx(0.05));
    CHECK(fine[1] == Catch::Approx(0.075));
    CHECK(fine.back() == Catch::Approx(0.95));

    CHECK(plan_theta_grid(19999).size() == 37);
    CHECK(plan_theta_grid(20000).size() == 19);
    std::vector<double> mid = plan_theta_grid(50000);
    REQUIRE(mid.size() == 19);
    CHECK(mid[1] - mid[0] == Catch::Approx(0.05));

    std::vector<double> coarse1 = plan_theta_grid(500000, 3);
    std::vector<double> coarse2 = plan_theta_grid(500000, 3);
    REQUIRE(coarse1.size() == 10);
    CHECK(coarse1 == coarse2);
    for (double t : coarse1) {
        CHECK(t >= 0.05);
        CHECK(t <= 0.95);
    }
    CHECK_THROWS_AS(plan_theta_grid(0), std::invalid_argument);
}

TEST_CASE("timing repetitions follow the clamp rule") {
    SparseMatrix a = laplacian_2d(8, 8);
    DenseVector f(64, 1.0);

    // repetition constant 0: exactly the two calibration runs
    TimingResult two = measure_time(a, f, 0.25, SmootherKind::SorJacobi, 1, 0.0);
    CHECK(two.raw.size() == 2);
    CHECK(std::isfinite(two.mean));
    CHECK(two.mean > 0.0);

    // huge constant: clamped at 100 runs
    TimingResult hundred = measure_time(a, f, 0.25, SmootherKind::SorJacobi, 1, 1e9);
    CHECK(hundred.raw.size() == 100);

    // non-convergent configuration: single run, infinite marker
    TimingResult failed = measure_time(a, f, 0.25, SmootherKind::SorJacobi, 1, 2.0, 1e-30, 0);
    CHECK(failed.raw.empty());
    CHECK(failed.mean == kInf);
    CHECK(!failed.report.converged);
}

TEST_CASE("cost normalization by min-max with failure and degenerate rules") {
    std::vector<CostSample> s = {
        sample_of("a", 0.1, SmootherKind::SorJacobi, 1.0),
        sample_of("a", 0.2, SmootherKind::SorJacobi, 2.0),
        sample_of("a", 0.3, SmootherKind::SorJacobi, 3.0),
        sample_of("b", 0.1, SmootherKind::SorJacobi, 0.5),
        sample_of("b", 0.2, SmootherKind::SorJacobi, kInf, false),
        sample_of("c", 0.1, SmootherKind::SorJacobi, 4.0),
        sample_of("c", 0.2, SmootherKind::SorJacobi, 4.0),
        sample_of("d", 0.1, SmootherKind::SorJacobi, kInf, false),
    };
    std::vector<std::string> dropped = normalize_costs(s, "time");
    REQUIRE(dropped == std::vector<std::string>{"d"});
    REQUIRE(s.size() == 7);
    CHECK(s[0].cost == 0.0);
    CHECK(s[1].cost == 0.5);
    CHECK(s[2].cost == 1.0);
    CHECK(s[3].cost == 0.0);
    CHECK(s[4].cost == 1.0);  // failure
    CHECK(s[5].cost == 0.0);  // degenerate range
    CHECK(s[6].cost == 0.0);
}

TEST_CASE("rho metric clips into the unit interval") {
    std::vector<CostSample> s = {sample_of("a", 0.1, SmootherKind::SorJacobi, 1.0),
                                 sample_of("a", 0.2, SmootherKind::SorJacobi, kInf, false)};
    s[0].rho = 0.37;
    normalize_costs(s, "rho");
    CHECK(s[0].cost == 0.37);
    CHECK(s[1].cost == 1.0);
    CHECK_THROWS_AS(normalize_costs(s, "banana"), std::invalid_argument);
}

TEST_CASE("problem-level split is a seeded 60-20-20 partition") {
    std::vector<CostSample> samples;
    for (int pr = 0; pr < 10; ++pr)
        for (int k = 0; k < 3; ++k)
            samples.push_back(sample_of("p" + std::to_string(pr), 0.1 * (k + 1),
                                        SmootherKind::SorJacobi, 1.0 + k));
    split_dataset(samples, 11);
    std::map<std::string, std::string> tag;
    int train = 0, val = 0, test = 0;
    for (const CostSample& s : samples) {
        auto [it, fresh] = tag.try_emplace(s.problem_id, s.split);
        CHECK(it->second == s.split);  // split constant within a problem
        if (fresh) {
            train += s.split == "train";
            val += s.split == "val";
            test += s.split == "test";
        }
    }
    CHECK(train == 6);
    CHECK(val == 2);
    CHECK(test == 2);

    std::vector<CostSample> again = samples;
    for (CostSample& s : again) s.split.clear();
    split_dataset(again, 11);
    for (std::size_t i = 0; i < samples.size(); ++i) CHECK(again[i].split == samples[i].split);

    std::vector<CostSample> few = {sample_of("x", 0.1, SmootherKind::SorJacobi, 1.0)};
    CHECK_THROWS_AS(split_dataset(few, 1), std::invalid_argument);
}

TEST_CASE("sample records round trip through the text format") {
    CostSample s = sample_of("tc1-mini/quad/r2", 0.275, SmootherKind::L1SorJacobi, 0.00123);
    s.raw_times = {0.001, 0.0015};
    s.n_it = 17;
    s.split = "val";
    CostSample t = parse_sample_record(sample_record(s));
    CHECK(t.problem_id == s.problem_id);
    CHECK(t.theta == s.theta);
    CHECK(t.smoother == s.smoother);
    CHECK(t.raw_times == s.raw_times);
    CHECK(t.mean_time == s.mean_time);
    CHECK(t.split == s.split);
    CHECK(t.n_it == 17);

    CostSample inf_sample = sample_of("x", 0.1, SmootherKind::FcfJacobi, kInf, false);
    CostSample u = parse_sample_record(sample_record(inf_sample));
    CHECK(u.mean_time == kInf);
    CHECK(u.raw_times.empty());
    CHECK(!u.converged);

    CHECK_THROWS_AS(parse_sample_record("problem_id=x bogus"), std::runtime_error);
}

TEST_CASE("time smoothing runs per problem-smoother curve over theta") {
    std::vector<CostSample> samples;
    for (int k = 0; k < 37; ++k) {
        double theta = 0.05 + 0.025 * k;
        double t = k / 36.0;
        CostSample s = sample_of("p", theta, SmootherKind::SorJacobi,
                                 2.0 + t * t);  // a quadratic curve: reproduced exactly
        samples.push_back(s);
        samples.push_back(sample_of("p", theta, SmootherKind::L1Jacobi, 3.0));
    }
    // shuffle insertion order to prove the curves are re-sorted by theta
    std::swap(samples[0], samples[40]);
    apply_time_smoothing(samples);
    for (const CostSample& s : samples) {
        double expect = s.smoother == SmootherKind::SorJacobi
                            ? 2.0 + std::pow((s.theta - 0.05) / 0.9, 2.0)
                            : 3.0;
        CHECK(std::abs(s.smoothed_time - expect) < 1e-7);
    }
}
