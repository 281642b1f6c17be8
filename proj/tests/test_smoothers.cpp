#include <catch2/catch_amalgamated.hpp>

#include "amgtune/smoothers.hpp"
#include "support/fixtures.hpp"
#include "support/twogrid_oracle.hpp"

using namespace amgtune;
using namespace amgtune::testing;

namespace {

SparseMatrix two_by_two() {
    return SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}});
}

CfSplitting split_01() {
    CfSplitting s;
    s.labels = {CfLabel::F, CfLabel::C};
    s.coarse_index = {-1, 0};
    s.n_coarse = 1;
    return s;
}

} // namespace

TEST_CASE("smoother names and one-hot layout") {
    CHECK(smoother_name(SmootherKind::SorJacobi) == "sor-jacobi");
    CHECK(smoother_from_name("l1-sor-jacobi") == SmootherKind::L1SorJacobi);
    CHECK(smoother_one_hot(SmootherKind::L1Jacobi) == std::array<double, 4>{0, 1, 0, 0});
    CHECK(smoother_one_hot(SmootherKind::FcfJacobi) == std::array<double, 4>{0, 0, 0, 1});
    CHECK_THROWS_AS(smoother_from_name("chebyshev"), std::invalid_argument);
}

TEST_CASE("one l1-Jacobi sweep by hand") {
    DenseVector u = smooth(SmootherKind::L1Jacobi, two_by_two(), {0.0, 0.0}, {1.0, 1.0}, 1);
    CHECK(u[0] == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(u[1] == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("one forward SOR sweep by hand") {
    DenseVector u = smooth(SmootherKind::SorJacobi, two_by_two(), {0.0, 0.0}, {1.0, 1.0}, 1);
    CHECK(u[0] == 0.5);
    CHECK(u[1] == 0.75);
}

TEST_CASE("one backward SOR sweep by hand") {
    DenseVector u = smooth(SmootherKind::SorJacobi, two_by_two(), {0.0, 0.0}, {1.0, 1.0}, 1,
                           nullptr, {}, SweepDirection::Backward);
    CHECK(u[0] == 0.75);
    CHECK(u[1] == 0.5);
}

TEST_CASE("identity system is solved exactly by one sweep of the inverse-consistent kinds") {
    SparseMatrix a = SparseMatrix::identity(4);
    DenseVector f = {1.0, -2.0, 0.5, 3.0};
    CfSplitting s;
    s.labels = {CfLabel::C, CfLabel::F, CfLabel::C, CfLabel::F};
    s.coarse_index = {0, -1, 1, -1};
    s.n_coarse = 2;
    for (SmootherKind k :
         {SmootherKind::SorJacobi, SmootherKind::L1Jacobi, SmootherKind::L1SorJacobi}) {
        DenseVector u = smooth(k, a, DenseVector(4, 0.0), f, 1, &s);
        CHECK(u == f);
    }
    // FCF with its default 2/3 stage weight is a contraction, not the exact
    // inverse: C rows see one stage (2/3 of f), F rows two stages (8/9 of f)
    DenseVector u = smooth(SmootherKind::FcfJacobi, a, DenseVector(4, 0.0), f, 1, &s);
    CHECK(u[0] == Catch::Approx(f[0] * 2.0 / 3.0).epsilon(1e-15));
    CHECK(u[1] == Catch::Approx(f[1] * 8.0 / 9.0).epsilon(1e-15));
    // with a unit stage weight FCF is exact on the identity as well
    SmootherOptions opt;
    opt.fcf_weight = 1.0;
    DenseVector v = smooth(SmootherKind::FcfJacobi, a, DenseVector(4, 0.0), f, 1, &s, opt);
    CHECK(v == f);
}

TEST_CASE("zero sweeps leave the iterate unchanged") {
    DenseVector u0 = {0.25, -0.5};
    for (SmootherKind k : {SmootherKind::SorJacobi, SmootherKind::L1Jacobi,
                           SmootherKind::L1SorJacobi, SmootherKind::FcfJacobi}) {
        CfSplitting s = split_01();
        DenseVector u = smooth(k, two_by_two(), u0, {1.0, 1.0}, 0, &s);
        CHECK(u == u0);
    }
}

TEST_CASE("zero diagonal is rejected with the offending row") {
    SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}});
    try {
        smooth(SmootherKind::SorJacobi, a, {0.0, 0.0}, {1.0, 1.0}, 1);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("l1 diagonal dominates the standard diagonal on SPD matrices") {
    Rng rng(31);
    SparseMatrix a = random_spd_dense(rng, 20);
    SmootherState s = make_smoother(SmootherKind::L1Jacobi, a);
    for (index_t i = 0; i < 20; ++i) CHECK(s.l1diag[i] >= s.diag[i]);
}

TEST_CASE("l1-Jacobi error propagation is an A-norm contraction on SPD matrices") {
    Rng rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        index_t n = 10 + static_cast<index_t>(rng.uniform_index(90));
        SparseMatrix a = trial % 2 ? random_spd_dense(rng, n) : random_spd_mmatrix(rng, n, 0.2);
        SmootherState s = make_smoother(SmootherKind::L1Jacobi, a);
        // ||I - D^-1 A||_A <= 1 iff the eigenvalues of D^-1/2 A D^-1/2 lie in [0, 2]
        DenseMatrix ad = a.to_dense();
        DenseMatrix scaled(n, n);
        for (index_t i = 0; i < n; ++i)
            for (index_t j = 0; j < n; ++j)
                scaled(i, j) = ad(i, j) / std::sqrt(s.l1diag[i] * s.l1diag[j]);
        std::vector<double> ev = symmetric_eigenvalues(scaled);
        for (double lambda : ev) {
            CHECK(lambda > -1e-12);
            CHECK(lambda < 2.0 + 1e-12);
        }
    }
}

TEST_CASE("FCF equals the composition of masked weighted Jacobi stages") {
    Rng rng(23);
    SparseMatrix a = random_spd_mmatrix(rng, 15, 0.3);
    StrengthGraph g = build_strength(a, 0.25);
    CfSplitting s = cljp_split(g, 4);
    DenseVector f(15), u0(15);
    for (auto& v : f) v = rng.uniform(-1.0, 1.0);
    for (auto& v : u0) v = rng.uniform(-1.0, 1.0);

    DenseVector fcf = smooth(SmootherKind::FcfJacobi, a, u0, f, 1, &s);

    auto masked_stage = [&](DenseVector u, CfLabel which) {
        DenseVector r;
        residual(a, u, f, r);
        for (index_t i = 0; i < 15; ++i)
            if (s.labels[i] == which) u[i] += (2.0 / 3.0) * r[i] / a.diagonal(i);
        return u;
    };
    DenseVector composed = masked_stage(masked_stage(masked_stage(u0, CfLabel::F), CfLabel::C),
                                        CfLabel::F);
    CHECK(fcf == composed);
}

TEST_CASE("smoothing is linear in the iterate and right-hand side") {
    Rng rng(29);
    SparseMatrix a = random_spd_mmatrix(rng, 12, 0.3);
    StrengthGraph g = build_strength(a, 0.25);
    CfSplitting s = cljp_split(g, 9);
    DenseVector f(12), u0(12);
    for (auto& v : f) v = rng.uniform(-1.0, 1.0);
    for (auto& v : u0) v = rng.uniform(-1.0, 1.0);
    const double alpha = -1.75;
    DenseVector fs(12), us(12);
    for (std::size_t i = 0; i < 12; ++i) {
        fs[i] = alpha * f[i];
        us[i] = alpha * u0[i];
    }
    for (SmootherKind k : kAllSmootherKinds) {
        DenseVector a1 = smooth(k, a, us, fs, 2, &s);
        DenseVector a2 = smooth(k, a, u0, f, 2, &s);
        for (std::size_t i = 0; i < 12; ++i)
            CHECK(a1[i] == Catch::Approx(alpha * a2[i]).margin(1e-13));
    }
}

TEST_CASE("FCF without a splitting is rejected") {
    CHECK_THROWS_AS(smooth(SmootherKind::FcfJacobi, two_by_two(), {0.0, 0.0}, {1.0, 1.0}, 1),
                    std::invalid_argument);
}
