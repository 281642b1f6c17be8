#include <catch2/catch_amalgamated.hpp>

#include "amgtune/cycle.hpp"
#include "support/fixtures.hpp"
#include "support/twogrid_oracle.hpp"

using namespace amgtune;
using namespace amgtune::testing;

TEST_CASE("single-level hierarchy solves directly in one cycle") {
    SparseMatrix a = SparseMatrix::from_triplets(
        2, 2, {{0, 0, 4.0}, {1, 1, 9.0}});  // diagonal: empty strength graph
    AmgHierarchy h = amg_setup(a, 0.25, 1);
    REQUIRE(h.n_levels() == 1);
    DenseVector u = vcycle(h, {0.0, 0.0}, {4.0, 18.0});
    CHECK(u[0] == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(u[1] == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("zero right-hand side with a zero start stays zero") {
    SparseMatrix a = laplacian_1d(9);
    AmgHierarchy h = amg_setup(a, 0.25, 3);
    attach_smoother(h, SmootherKind::SorJacobi);
    DenseVector u = vcycle(h, DenseVector(9, 0.0), DenseVector(9, 0.0));
    for (double v : u) CHECK(v == 0.0);
}

TEST_CASE("sparse V-cycle matches the dense two-grid oracle on the 1D Laplacian") {
    SparseMatrix a = laplacian_1d(5);
    AmgHierarchy h = amg_setup(a, 0.25, 11, AmgLimits{2, 2, 2000});
    REQUIRE(h.n_levels() == 2);
    for (SmootherKind kind : kAllSmootherKinds) {
        attach_smoother(h, kind);
        DenseMatrix sparse_e = sparse_vcycle_error(h, 1, 1, false);
        DenseMatrix dense_e = dense_vcycle_error(h, 0, 1, 1, false, SmootherOptions{});
        CHECK(max_abs_diff(sparse_e, dense_e) < 1e-12);
        CHECK(spectral_radius_below_one(dense_e));
    }
}

TEST_CASE("sparse multilevel V-cycle matches the dense oracle on random SPD M-matrices") {
    Rng rng(55);
    for (int trial = 0; trial < 6; ++trial) {
        index_t n = 20 + static_cast<index_t>(rng.uniform_index(40));
        SparseMatrix a = random_spd_mmatrix(rng, n, 0.15);
        AmgHierarchy h = amg_setup(a, 0.25, rng.next_u64());
        attach_smoother(h, trial % 2 ? SmootherKind::L1Jacobi : SmootherKind::SorJacobi);
        for (bool symmetric : {false, true}) {
            DenseMatrix sparse_e = sparse_vcycle_error(h, 1, 1, symmetric);
            DenseMatrix dense_e = dense_vcycle_error(h, 0, 1, 1, symmetric, SmootherOptions{});
            CHECK(max_abs_diff(sparse_e, dense_e) < 1e-12);
            CHECK(spectral_radius_below_one(dense_e));
        }
    }
}

TEST_CASE("amg_solve on the identity converges in one iteration") {
    SparseMatrix a = SparseMatrix::identity(5);
    DenseVector f = {1, 2, 3, 4, 5};
    auto [u, rep] = amg_solve(a, f, 0.25, SmootherKind::SorJacobi, 1, 1, 1e-10, 10, 1);
    CHECK(rep.converged);
    CHECK(rep.n_it == 1);
    for (std::size_t i = 0; i < 5; ++i) CHECK(u[i] == Catch::Approx(f[i]).epsilon(1e-12));
}

TEST_CASE("amg_solve with a zero iteration budget reports non-convergence") {
    SparseMatrix a = laplacian_1d(6);
    auto [u, rep] = amg_solve(a, DenseVector(6, 1.0), 0.25, SmootherKind::SorJacobi, 1, 1, 1e-8, 0, 1);
    CHECK(!rep.converged);
    CHECK(rep.n_it == 0);
    CHECK(rep.residual_history.size() == 1);
    for (double v : u) CHECK(v == 0.0);
}

TEST_CASE("amg_solve converges on 2D Poisson within the expected budget") {
    SparseMatrix a = laplacian_2d(32, 32);
    DenseVector f(static_cast<std::size_t>(a.n()), 1.0);
    auto [u, rep] = amg_solve(a, f, 0.25, SmootherKind::SorJacobi, 1, 1, 1e-8, 200, 17);
    CHECK(rep.converged);
    CHECK(rep.n_it <= 50);
    CHECK(rep.residual_history.size() == static_cast<std::size_t>(rep.n_it) + 1);
    CHECK(rep.rho > 0.0);
    CHECK(rep.rho < 1.0);
}

TEST_CASE("convergence factor arithmetic") {
    CHECK(convergence_factor(std::vector<double>{1.0, 1e-8, 1e-8, 1e-8, 1e-8, 1e-8, 1e-8, 1e-8,
                                                 1e-8}) == Catch::Approx(0.1));
    CHECK(convergence_factor(std::vector<double>{1.0, 0.5}) == 0.5);
    CHECK(convergence_factor(std::vector<double>{0.0, 0.0}) == 0.0);
    // a non-converged stagnating run yields rho >= 1
    CHECK(convergence_factor(std::vector<double>{1.0, 2.0, 2.0}) > 1.0);
}

TEST_CASE("pcg terminates within the eigenvalue count on a diagonal system") {
    std::vector<Triplet> t;
    for (index_t i = 0; i < 10; ++i) t.push_back({i, i, static_cast<double>(i + 1)});
    SparseMatrix a = SparseMatrix::from_triplets(10, 10, std::move(t));
    DenseVector f = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1};

    // exact coarse preconditioning: one iteration
    AmgHierarchy h = amg_setup(a, 0.25, 1);
    auto [u, rep] = pcg_solve(a, f, h, 1e-12, 50);
    CHECK(rep.converged);
    CHECK(rep.n_it == 1);

    // force the smoother-only fallback so CG actually iterates
    AmgHierarchy h2 = amg_setup(a, 0.25, 1, AmgLimits{25, 2, 0});
    auto [u2, rep2] = pcg_solve(a, f, h2, 1e-12, 50);
    CHECK(rep2.converged);
    CHECK(rep2.n_it <= 10);
    for (index_t i = 0; i < 10; ++i) CHECK(u2[i] == Catch::Approx(1.0 / (i + 1)).margin(1e-10));
}

TEST_CASE("pcg honors a crude tolerance immediately") {
    SparseMatrix a = laplacian_2d(8, 8);
    AmgHierarchy h = amg_setup(a, 0.25, 2);
    attach_smoother(h, SmootherKind::SorJacobi);
    DenseVector f(64, 1.0);
    auto [u, rep] = pcg_solve(a, f, h, 0.5, 100);
    CHECK(rep.converged);
    CHECK(rep.n_it == 1);
}

TEST_CASE("pcg converges fast on 2D Poisson") {
    SparseMatrix a = laplacian_2d(63, 63);
    AmgHierarchy h = amg_setup(a, 0.25, 5);
    attach_smoother(h, SmootherKind::SorJacobi);
    DenseVector f(static_cast<std::size_t>(a.n()), 1.0);
    auto [u, rep] = pcg_solve(a, f, h, 1e-8, 100);
    CHECK(rep.converged);
    CHECK(rep.n_it <= 30);
}

TEST_CASE("pcg error is monotone in the A-norm") {
    Rng rng(71);
    SparseMatrix a = random_spd_mmatrix(rng, 150, 0.05);
    DenseVector f(150);
    for (double& v : f) v = rng.uniform(-1.0, 1.0);
    LuFactors lu(a.to_dense());
    DenseVector exact = lu.solve(f);

    AmgHierarchy h = amg_setup(a, 0.25, 31, AmgLimits{25, 2, 0});
    attach_smoother(h, SmootherKind::L1Jacobi);
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 8; ++k) {
        auto [u, rep] = pcg_solve(a, f, h, 0.0, k, /*symmetric_precond=*/true);
        DenseVector e(150);
        for (std::size_t i = 0; i < 150; ++i) e[i] = u[i] - exact[i];
        double enorm = std::sqrt(dot(e, matvec(a, e)));
        CHECK(enorm <= previous * (1.0 + 1e-12));
        previous = enorm;
    }
}

TEST_CASE("residual histories are reproducible bit for bit") {
    SparseMatrix a = laplacian_2d(16, 16);
    DenseVector f(256, 1.0);
    auto [u1, r1] = amg_solve(a, f, 0.3, SmootherKind::L1Jacobi, 1, 1, 1e-8, 100, 42);
    auto [u2, r2] = amg_solve(a, f, 0.3, SmootherKind::L1Jacobi, 1, 1, 1e-8, 100, 42);
    CHECK(r1.residual_history == r2.residual_history);
    CHECK(u1 == u2);
}

TEST_CASE("solve report serializes to a fixed-key record") {
    SparseMatrix a = SparseMatrix::identity(2);
    auto [u, rep] = amg_solve(a, {1.0, 1.0}, 0.25, SmootherKind::SorJacobi, 1, 1, 1e-10, 5, 1);
    std::string rec = rep.to_record();
    for (const char* key : {"converged=", "n_it=", "rho=", "wall_time=", "theta=", "smoother=",
                            "nu1=", "nu2=", "tol=", "n_max=", "residuals="})
        CHECK(rec.find(key) != std::string::npos);
}
