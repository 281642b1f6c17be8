#include <catch2/catch_amalgamated.hpp>

#include "amgtune/sparse.hpp"
#include "support/fixtures.hpp"

using namespace amgtune;
using namespace amgtune::testing;

TEST_CASE("matvec identity") {
    SparseMatrix a = SparseMatrix::identity(3);
    DenseVector y = matvec(a, {1.0, 2.0, 3.0});
    CHECK(y == DenseVector{1.0, 2.0, 3.0});
}

TEST_CASE("matvec tridiagonal by hand") {
    SparseMatrix a = laplacian_1d(3);
    DenseVector y = matvec(a, {1.0, 1.0, 1.0});
    CHECK(y == DenseVector{1.0, 0.0, 1.0});
}

TEST_CASE("matvec matches dense oracle on random matrices") {
    Rng rng(101);
    for (int trial = 0; trial < 8; ++trial) {
        index_t n = 20 + static_cast<index_t>(rng.uniform_index(180));
        SparseMatrix a = random_sparse(rng, n, n, 0.08);
        DenseVector x(static_cast<std::size_t>(n));
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        DenseVector y = matvec(a, x);
        DenseVector y_ref = a.to_dense() * x;
        double scale = norm2(y_ref) + 1.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            CHECK(std::abs(y[i] - y_ref[i]) / scale < 1e-12);
    }
}

TEST_CASE("matvec rejects mismatched dimensions") {
    SparseMatrix a = SparseMatrix::identity(3);
    CHECK_THROWS_AS(matvec(a, DenseVector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("triplet assembly sums duplicates and sorts canonically") {
    std::vector<Triplet> fwd = {{1, 2, 3.0}, {0, 0, 1.0}, {1, 2, -1.0}, {1, 0, 4.0}};
    std::vector<Triplet> rev(fwd.rbegin(), fwd.rend());
    SparseMatrix a = SparseMatrix::from_triplets(3, 3, fwd);
    SparseMatrix b = SparseMatrix::from_triplets(3, 3, rev);
    CHECK(a == b);
    CHECK(a.value_at(1, 2) == 2.0);
    CHECK(a.nnz() == 3);
    CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), std::invalid_argument);
}

TEST_CASE("transpose basics") {
    SparseMatrix sym = laplacian_1d(6);
    CHECK(transpose(sym) == sym);
    CHECK(sym.is_symmetric());

    SparseMatrix single = SparseMatrix::from_triplets(3, 3, {{0, 2, 5.0}});
    SparseMatrix st = transpose(single);
    CHECK(st.nnz() == 1);
    CHECK(st.value_at(2, 0) == 5.0);

    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        SparseMatrix a = random_sparse(rng, 17, 23, 0.2);
        CHECK(transpose(transpose(a)) == a);
    }
}

TEST_CASE("triple product with identity transfer leaves the matrix unchanged") {
    Rng rng(5);
    SparseMatrix a = random_sparse(rng, 9, 9, 0.3);
    SparseMatrix id = SparseMatrix::identity(9);
    CHECK(triple_product(id, a, id) == detail::drop_exact_zeros(a));
}

TEST_CASE("triple product reproduces the hand-computed coarse 1D operator") {
    // classical linear interpolation for the n=5 Laplacian, C = {0, 2, 4};
    // the boundary rows pick up the Dirichlet-truncated diagonal 3/2
    SparseMatrix a = laplacian_1d(5);
    SparseMatrix p = SparseMatrix::from_triplets(
        5, 3, {{0, 0, 1.0}, {1, 0, 0.5}, {1, 1, 0.5}, {2, 1, 1.0}, {3, 1, 0.5}, {3, 2, 0.5}, {4, 2, 1.0}});
    SparseMatrix ac = triple_product(transpose(p), a, p);
    SparseMatrix expected = SparseMatrix::from_triplets(
        3, 3,
        {{0, 0, 1.5}, {0, 1, -0.5}, {1, 0, -0.5}, {1, 1, 1.0}, {1, 2, -0.5}, {2, 1, -0.5}, {2, 2, 1.5}});
    CHECK(ac == expected);
}

TEST_CASE("triple product on the odd-coarse 1D Laplacian gives the exact half-scaled stencil") {
    // n=7, C = {1, 3, 5}: every F point interpolates with weight 1/2 and the
    // Galerkin operator is exactly tridiag(-1/2, 1, -1/2) of size 3
    SparseMatrix a = laplacian_1d(7);
    std::vector<Triplet> pt = {{1, 0, 1.0}, {3, 1, 1.0}, {5, 2, 1.0}, {0, 0, 0.5},
                               {2, 0, 0.5}, {2, 1, 0.5}, {4, 1, 0.5}, {4, 2, 0.5},
                               {6, 2, 0.5}};
    SparseMatrix p = SparseMatrix::from_triplets(7, 3, std::move(pt));
    SparseMatrix ac = triple_product(transpose(p), a, p);
    CHECK(ac == tridiag(3, -0.5, 1.0, -0.5));
}

TEST_CASE("triple product matches dense oracle and preserves symmetry") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        index_t n = 12 + static_cast<index_t>(rng.uniform_index(20));
        index_t nc = n / 2;
        SparseMatrix a = random_spd_mmatrix(rng, n, 0.3);
        SparseMatrix p = random_sparse(rng, n, nc, 0.3);
        SparseMatrix r = transpose(p);
        SparseMatrix c = triple_product(r, a, p);

        DenseMatrix oracle = r.to_dense() * a.to_dense() * p.to_dense();
        CHECK(max_abs_diff(c.to_dense(), oracle) < 1e-12);
        CHECK(c.is_symmetric());
    }
}

TEST_CASE("triple product rejects nonconforming dimensions") {
    SparseMatrix a = laplacian_1d(4);
    SparseMatrix p = SparseMatrix::from_triplets(5, 2, {{0, 0, 1.0}});
    CHECK_THROWS_AS(triple_product(transpose(p), a, p), std::invalid_argument);
}
