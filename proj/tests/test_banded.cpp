#include <doctest.h>

#include <random>
#include <vector>

#include "obdiff/banded.hpp"
#include "obdiff/kernels.hpp"
#include "test_util.hpp"

using namespace obdiff;

TEST_CASE("matvec on named stencils") {
    SUBCASE("tridiag(-1,2,-1) row sums") {
        const auto m = BandedMatrix::tridiagonal(3, -1.0, 2.0, -1.0);
        const std::vector<double> x = {1.0, 1.0, 1.0};
        CHECK(matvec(m, x) == std::vector<double>{1.0, 0.0, 1.0});
    }
    SUBCASE("identity") {
        const auto m = BandedMatrix::identity(4);
        const std::vector<double> x = {3.0, -1.0, 0.0, 7.0};
        CHECK(matvec(m, x) == x);
    }
    SUBCASE("pentadiagonal second-difference stencil on x^2") {
        auto m = BandedMatrix::pentadiagonal(5, 1.0 / 12.0, -16.0 / 12.0, 30.0 / 12.0,
                                             -16.0 / 12.0, 1.0 / 12.0);
        const std::vector<double> x = {0.0, 1.0, 4.0, 9.0, 16.0};  // x_j = j^2
        const auto y = matvec(m, x);
        // middle row has the full stencil; the fourth difference of a
        // quadratic vanishes so only the -2 from the centered part remains
        CHECK(y[2] == doctest::Approx(-2.0).epsilon(1e-14));
    }
    SUBCASE("dimension mismatch throws") {
        const auto m = BandedMatrix::identity(4);
        const std::vector<double> x = {1.0, 2.0};
        CHECK_THROWS_AS(matvec(m, x), std::invalid_argument);
    }
}

TEST_CASE("matvec agrees with a dense reference multiply") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 40);
        const int lo = static_cast<int>(rng() % 3);
        const int up = static_cast<int>(rng() % 3);
        const auto m = testutil::random_banded(rng, n, lo, up);
        const auto x = testutil::random_vector(rng, static_cast<std::size_t>(n));
        const auto y = matvec(m, x);
        const auto yd = testutil::dense_matvec(testutil::dense_from_banded(m), x);
        for (int i = 0; i < n; ++i)
            CHECK(y[i] == doctest::Approx(yd[i]).epsilon(1e-13));
    }
}

TEST_CASE("banded_solve on small systems") {
    SUBCASE("identity") {
        const auto m = BandedMatrix::identity(3);
        const std::vector<double> rhs = {1.0, 2.0, 3.0};
        CHECK(banded_solve(m, rhs) == rhs);
    }
    SUBCASE("2x2 tridiagonal") {
        const auto m = BandedMatrix::tridiagonal(2, -1.0, 2.0, -1.0);
        const std::vector<double> rhs = {1.0, 1.0};
        const auto x = banded_solve(m, rhs);
        CHECK(x[0] == doctest::Approx(1.0));
        CHECK(x[1] == doctest::Approx(1.0));
    }
    SUBCASE("diagonal") {
        BandedMatrix m(2, 0, 0);
        m.at(0, 0) = 2.0;
        m.at(1, 1) = 4.0;
        const std::vector<double> rhs = {2.0, 8.0};
        const auto x = banded_solve(m, rhs);
        CHECK(x[0] == doctest::Approx(1.0));
        CHECK(x[1] == doctest::Approx(2.0));
    }
    SUBCASE("singular matrix throws") {
        BandedMatrix m(2, 1, 1);
        m.at(0, 0) = 1.0;
        m.at(0, 1) = 1.0;
        m.at(1, 0) = 1.0;
        m.at(1, 1) = 1.0;
        const std::vector<double> rhs = {1.0, 2.0};
        CHECK_THROWS_AS(banded_solve(m, rhs), SingularMatrixError);
    }
}

TEST_CASE("banded_solve needs pivoting when the diagonal is weak") {
    // Leading entry far smaller than its subdiagonal: unpivoted elimination
    // would blow up.
    BandedMatrix m(3, 1, 1);
    m.at(0, 0) = 1e-14;
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0;
    m.at(1, 1) = 1.0;
    m.at(1, 2) = 1.0;
    m.at(2, 1) = 1.0;
    m.at(2, 2) = -2.0;
    const std::vector<double> x_true = {3.0, -1.0, 2.0};
    const auto rhs = matvec(m, x_true);
    const auto x = banded_solve(m, rhs);
    for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-12));
}

TEST_CASE("banded_solve round-trips through matvec on random dominant matrices") {
    std::mt19937_64 rng(7);
    const auto& k = kernels::active();
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 60);
        const int lo = static_cast<int>(rng() % 3);
        const int up = static_cast<int>(rng() % 3);
        const auto m = testutil::random_dominant(rng, n, lo, up);
        const auto rhs = testutil::random_vector(rng, static_cast<std::size_t>(n));
        const auto x = banded_solve(m, rhs);
        const auto back = matvec(m, x);
        const double err = k.linf_diff(back.data(), rhs.data(), back.size());
        const double scale = 1.0 + k.linf(rhs.data(), rhs.size());
        CHECK(err <= 1e-10 * scale);
    }
}

TEST_CASE("solve postcondition holds on a pentadiagonal operator-sized system") {
    std::mt19937_64 rng(11);
    const int n = 400;
    const auto m = testutil::random_dominant(rng, n, 2, 2);
    const auto rhs = testutil::random_vector(rng, n);
    const auto x = banded_solve(m, rhs);
    const auto back = matvec(m, x);
    const auto& k = kernels::active();
    CHECK(k.linf_diff(back.data(), rhs.data(), back.size()) <=
          1e-12 * (1.0 + k.linf(rhs.data(), rhs.size())));
}

TEST_CASE("structural diagnostics") {
    SUBCASE("tridiag(-1,3,-1) is a dominant M-matrix") {
        const auto m = BandedMatrix::tridiagonal(6, -1.0, 3.0, -1.0);
        CHECK(is_strictly_diag_dominant(m));
        CHECK(is_m_matrix(m));
    }
    SUBCASE("tridiag(-1,2,-1) sits on the dominance boundary") {
        const auto m = BandedMatrix::tridiagonal(6, -1.0, 2.0, -1.0);
        CHECK_FALSE(is_strictly_diag_dominant(m));
        CHECK_FALSE(is_m_matrix(m));
    }
    SUBCASE("pentadiag(1,-16,30,-16,1) has positive off-diagonals") {
        const auto m = BandedMatrix::pentadiagonal(8, 1.0, -16.0, 30.0, -16.0, 1.0);
        CHECK_FALSE(is_m_matrix(m));
        CHECK_FALSE(is_strictly_diag_dominant(m));  // interior rows: 34 > 30
    }
    SUBCASE("m-matrix implies dominance on random instances") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 30; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 20);
            const auto m = testutil::random_m_matrix(rng, n, 2, 2);
            CHECK(is_m_matrix(m));
            CHECK(is_strictly_diag_dominant(m));
        }
    }
}

TEST_CASE("band storage shape") {
    BandedMatrix m(5, 1, 2);
    CHECK(m.diagonal(0).size() == 5);
    CHECK(m.diagonal(-1).size() == 4);
    CHECK(m.diagonal(2).size() == 3);
    CHECK_THROWS_AS(m.diagonal(-2), std::out_of_range);
    CHECK(m.get(0, 3) == 0.0);  // outside band reads as zero
    CHECK_THROWS_AS(m.at(0, 3), std::out_of_range);
    CHECK_THROWS_AS(BandedMatrix(3, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(BandedMatrix(0, 1, 1), std::invalid_argument);
}
