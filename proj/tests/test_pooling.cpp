#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "amgtune/pooling.hpp"
#include "support/fixtures.hpp"
#include "support/pool_oracle.hpp"

using namespace amgtune;
using namespace amgtune::testing;

TEST_CASE("pooling a zero-entry matrix yields the zero tensor") {
    SparseMatrix a(6, 6);
    PooledTensor v = pool(a, 3);
    for (double x : v.data) CHECK(x == 0.0);
}

TEST_CASE("pooling the 4x4 identity with m=2") {
    PooledTensor v = pool(SparseMatrix::identity(4), 2);
    for (int b = 0; b < 2; ++b) {
        CHECK(v.at(0, b, b) == 1.0);
        CHECK(v.at(1, b, b) == 0.0);
        CHECK(v.at(2, b, b) == 2.0);
        CHECK(v.at(3, b, b) == 2.0);
        CHECK(v.at(0, b, 1 - b) == 0.0);
        CHECK(v.at(3, b, 1 - b) == 0.0);
    }
}

TEST_CASE("remainder-absorbing block arithmetic for n=5, m=2") {
    // q = 2, rem = 1, t = 3: rows 0..2 fall in block 0, rows 3..4 in block 1
    SparseMatrix a = SparseMatrix::from_triplets(5, 5, {{4, 4, -2.0}, {0, 0, 3.0}, {2, 3, 1.0}});
    PooledTensor v = pool(a, 2);
    CHECK(v.at(1, 1, 1) == 2.0);  // negative magnitude of the (4,4) entry
    CHECK(v.at(0, 0, 0) == 3.0);
    CHECK(v.at(0, 0, 1) == 1.0);  // column 3 belongs to block 1
    CHECK(v.at(3, 0, 1) == 1.0);
}

TEST_CASE("pooling matches the dense brute-force oracle") {
    Rng rng(2027);
    for (int m : {1, 3, 8, 16}) {
        for (int trial = 0; trial < 6; ++trial) {
            index_t n = 1 + static_cast<index_t>(rng.uniform_index(200));
            SparseMatrix a = random_sparse(rng, n, n, 0.1);
            PooledTensor got = pool(a, m);
            PooledTensor want = pool_oracle(a, m);
            const std::size_t plane = static_cast<std::size_t>(m) * m;
            for (std::size_t k = 0; k < plane; ++k) {
                CHECK(got.data[0 * plane + k] == want.data[0 * plane + k]);
                CHECK(got.data[1 * plane + k] == want.data[1 * plane + k]);
                CHECK(std::abs(got.data[2 * plane + k] - want.data[2 * plane + k]) < 1e-12);
                CHECK(got.data[3 * plane + k] == want.data[3 * plane + k]);
            }
        }
    }
}

TEST_CASE("channel 4 sums to the stored entry count") {
    Rng rng(7);
    SparseMatrix a = random_sparse(rng, 37, 37, 0.2);
    PooledTensor v = pool(a, 8);
    double total = 0.0;
    const std::size_t plane = 64;
    for (std::size_t k = 0; k < plane; ++k) total += v.data[3 * plane + k];
    CHECK(total == static_cast<double>(a.nnz()));
}

TEST_CASE("positive scaling covariance") {
    Rng rng(9);
    SparseMatrix a = random_sparse(rng, 40, 40, 0.15);
    SparseMatrix a2 = scale(a, 2.0);
    PooledTensor v = pool(a, 4);
    PooledTensor v2 = pool(a2, 4);
    const std::size_t plane = 16;
    for (std::size_t k = 0; k < plane; ++k) {
        CHECK(v2.data[0 * plane + k] == 2.0 * v.data[0 * plane + k]);
        CHECK(v2.data[1 * plane + k] == 2.0 * v.data[1 * plane + k]);
        CHECK(std::abs(v2.data[2 * plane + k] - 2.0 * v.data[2 * plane + k]) <
              1e-12 * (1.0 + std::abs(v.data[2 * plane + k])));
        CHECK(v2.data[3 * plane + k] == v.data[3 * plane + k]);
    }
}

TEST_CASE("m larger than n leaves trailing blocks empty") {
    SparseMatrix a = SparseMatrix::identity(3);
    PooledTensor v = pool(a, 5);
    for (int b = 0; b < 3; ++b) CHECK(v.at(3, b, b) == 1.0);
    for (int b = 3; b < 5; ++b)
        for (int f = 0; f < 4; ++f) CHECK(v.at(f, b, b) == 0.0);
}

TEST_CASE("normalization maps extremes to +-1 and preserves zeros and signs") {
    SparseMatrix a = SparseMatrix::from_triplets(
        4, 4, {{0, 0, std::exp(1.0) - 1.0}, {2, 2, -(std::exp(1.0) - 1.0)}, {1, 1, 0.5}});
    PooledTensor v = normalize(pool(a, 4));
    CHECK(v.normalized);
    CHECK(v.at(0, 0, 0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(v.at(2, 2, 2) == Catch::Approx(-1.0).epsilon(1e-14));
    for (double x : v.data) {
        CHECK(x <= 1.0);
        CHECK(x >= -1.0);
    }
    // zeros stay zero
    CHECK(v.at(0, 3, 3) == 0.0);
    CHECK(v.at(2, 0, 1) == 0.0);
}

TEST_CASE("all-zero channels are left untouched by normalization") {
    SparseMatrix a = SparseMatrix::identity(4);  // no negative entries
    PooledTensor v = normalize(pool(a, 2));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(v.at(1, i, j) == 0.0);
}

TEST_CASE("double normalization is rejected") {
    PooledTensor v = normalize(pool(SparseMatrix::identity(4), 2));
    CHECK_THROWS_AS(normalize(v), std::logic_error);
}

TEST_CASE("binary dump round trip") {
    Rng rng(12);
    SparseMatrix a = random_sparse(rng, 20, 20, 0.3);
    PooledTensor v = pool(a, 4);
    auto path = std::filesystem::temp_directory_path() / "amgtune_pool.bin";
    write_pooled(v, path.string());
    PooledTensor w = read_pooled(path.string());
    REQUIRE(w.m == v.m);
    for (std::size_t k = 0; k < v.size(); ++k)
        CHECK(w.data[k] == static_cast<double>(static_cast<float>(v.data[k])));
    CHECK_THROWS_AS(read_pooled("/nonexistent/pool.bin"), std::runtime_error);
}
