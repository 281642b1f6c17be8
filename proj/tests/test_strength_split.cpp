#include <catch2/catch_amalgamated.hpp>

#include "amgtune/cljp.hpp"
#include "amgtune/strength.hpp"
#include "support/fixtures.hpp"

using namespace amgtune;
using namespace amgtune::testing;

namespace {

SparseMatrix four_by_four_row() {
    // only row 0 matters for the strength checks
    return SparseMatrix::from_triplets(
        4, 4,
        {{0, 0, 4.0}, {0, 1, -2.0}, {0, 2, -1.0}, {0, 3, 0.5},
         {1, 1, 1.0}, {2, 2, 1.0}, {3, 3, 1.0}});
}

std::vector<index_t> deps_of(const StrengthGraph& g, index_t i) {
    auto d = g.deps(i);
    return {d.begin(), d.end()};
}

void check_splitting_contract(const SparseMatrix& a, const StrengthGraph& g,
                              const CfSplitting& s) {
    REQUIRE(s.n() == a.n());
    index_t nc = 0;
    for (index_t i = 0; i < s.n(); ++i) {
        if (s.is_coarse(i)) {
            CHECK(s.coarse_index[i] >= 0);
            ++nc;
        } else {
            CHECK(s.coarse_index[i] == -1);
            // every F point with strong dependencies has a coarse one
            auto deps = g.deps(i);
            if (!deps.empty()) {
                bool has_c = false;
                for (index_t j : deps) has_c = has_c || s.is_coarse(j);
                CHECK(has_c);
            }
        }
    }
    CHECK(nc == s.n_coarse);
}

} // namespace

TEST_CASE("strength sets follow the threshold rule") {
    SparseMatrix a = four_by_four_row();
    StrengthGraph g6 = build_strength(a, 0.6);
    CHECK(deps_of(g6, 0) == std::vector<index_t>{1});
    StrengthGraph g05 = build_strength(a, 0.05);
    CHECK(deps_of(g05, 0) == std::vector<index_t>{1, 2});
}

TEST_CASE("rows without negative couplings have empty strength sets") {
    SparseMatrix a = SparseMatrix::from_triplets(
        3, 3, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 1, 2.0}, {1, 0, 1.0}, {2, 2, 1.0}});
    StrengthGraph g = build_strength(a, 0.25);
    for (index_t i = 0; i < 3; ++i) CHECK(g.deps(i).empty());
}

TEST_CASE("threshold domain is (0, 1]") {
    SparseMatrix a = laplacian_1d(3);
    CHECK_THROWS_AS(build_strength(a, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_strength(a, 1.5), std::invalid_argument);
    CHECK_NOTHROW(build_strength(a, 1.0));
}

TEST_CASE("influence lists are the transpose of the dependency lists") {
    Rng rng(3);
    SparseMatrix a = random_spd_mmatrix(rng, 40, 0.15);
    StrengthGraph g = build_strength(a, 0.3);
    for (index_t i = 0; i < g.n; ++i) {
        for (index_t j : g.deps(i)) {
            bool found = false;
            for (index_t e = g.inf_ptr[j]; e < g.inf_ptr[j + 1]; ++e)
                found = found || (g.inf_src[e] == i);
            CHECK(found);
            CHECK(!g.depends_on(i, i));
        }
    }
}

TEST_CASE("cljp on a diagonal matrix labels everything F") {
    SparseMatrix a = SparseMatrix::identity(6);
    StrengthGraph g = build_strength(a, 0.25);
    CfSplitting s = cljp_split(g, 77);
    CHECK(s.n_coarse == 0);
    for (index_t i = 0; i < 6; ++i) CHECK(!s.is_coarse(i));
}

TEST_CASE("cljp on the 1D Laplacian yields a covering splitting") {
    SparseMatrix a = laplacian_1d(5);
    StrengthGraph g = build_strength(a, 0.25);
    CfSplitting s = cljp_split(g, 123);
    check_splitting_contract(a, g, s);
    CHECK(s.n_coarse >= 1);
    CHECK(s.n_coarse < 5);
}

TEST_CASE("cljp is deterministic for a fixed seed") {
    Rng rng(15);
    SparseMatrix a = random_spd_mmatrix(rng, 60, 0.1);
    StrengthGraph g = build_strength(a, 0.25);
    CfSplitting s1 = cljp_split(g, 2024);
    CfSplitting s2 = cljp_split(g, 2024);
    CHECK(s1.labels == s2.labels);
    CHECK(s1.coarse_index == s2.coarse_index);
}

TEST_CASE("cljp covering property on random M-matrices") {
    Rng rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        index_t n = 10 + static_cast<index_t>(rng.uniform_index(70));
        SparseMatrix a = random_spd_mmatrix(rng, n, 0.12);
        for (double theta : {0.1, 0.25, 0.6, 1.0}) {
            StrengthGraph g = build_strength(a, theta);
            CfSplitting s = cljp_split(g, rng.next_u64());
            check_splitting_contract(a, g, s);
        }
    }
}
