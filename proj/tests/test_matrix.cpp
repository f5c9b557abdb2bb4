#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "test_helpers.hpp"
#include "wncs/matrix.hpp"

using namespace wncs;

namespace {
const Mat S{{1.0, 0.2}, {-0.2, 1.0}};
}

TEST_CASE("mat_mul") {
    CHECK(mat_mul(Mat::identity(2), S) == S);

    // Hand arithmetic: [1*1 + 0.2*-0.2, 1*0.2 + 0.2*1; -0.2*1 + 1*-0.2, -0.2*0.2 + 1*1]
    const Mat ss = mat_mul(S, S);
    CHECK(ss(0, 0) == doctest::Approx(0.96).epsilon(1e-15));
    CHECK(ss(0, 1) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(ss(1, 0) == doctest::Approx(-0.4).epsilon(1e-15));
    CHECK(ss(1, 1) == doctest::Approx(0.96).epsilon(1e-15));

    CHECK(mat_mul(S, Mat::zeros(2, 2)) == Mat::zeros(2, 2));

    CHECK_THROWS_AS(mat_mul(Mat::zeros(2, 3), Mat::zeros(2, 3)), std::invalid_argument);
    CHECK(mat_mul(Mat::zeros(2, 3), Mat::zeros(3, 4)).cols() == 4);
}

TEST_CASE("mat_pow") {
    CHECK(mat_pow(S, 0) == Mat::identity(2));
    CHECK(mat_pow(S, 2) == mat_mul(S, S));
    CHECK(mat_pow(Mat::identity(2), 7) == Mat::identity(2));
    CHECK_THROWS_AS(mat_pow(Mat::zeros(2, 3), 2), std::invalid_argument);
}

TEST_CASE("trace") {
    CHECK(trace(Mat::identity(2)) == 2.0);
    CHECK(trace(scalar_mul(0.25, Mat::identity(2))) == 0.5);
    CHECK(trace(S) == 2.0);
    CHECK_THROWS_AS(trace(Mat::zeros(1, 2)), std::invalid_argument);
}

TEST_CASE("elementwise helpers") {
    CHECK(transpose(Mat{{0, 1}, {-1, 0}}) == Mat{{0, -1}, {1, 0}});
    CHECK(mat_sub(S, S) == Mat::zeros(2, 2));
    const Mat a = scalar_mul(1.1, S);
    CHECK(a(0, 0) == doctest::Approx(1.1));
    CHECK(a(0, 1) == doctest::Approx(0.22));
    CHECK(a(1, 0) == doctest::Approx(-0.22));
    CHECK(a(1, 1) == doctest::Approx(1.1));
    CHECK_THROWS_AS(mat_add(S, Mat::zeros(3, 3)), std::invalid_argument);
    CHECK_THROWS_AS(mat_sub(S, Mat::zeros(2, 1)), std::invalid_argument);
}

TEST_CASE("construction rejects bad input") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(Mat(2, 2, {1, 2, 3}));
    CHECK_THROWS(Mat(0, 2));
    CHECK_THROWS(Mat{{1, nan}, {0, 1}});
    CHECK_THROWS(Mat({{1, 2}, {3}}));
    // Overflow in arithmetic surfaces as an error rather than an Inf entry.
    CHECK_THROWS_AS(mat_pow(scalar_mul(1e200, Mat::identity(2)), 2), std::overflow_error);
}

TEST_CASE("algebraic properties on random matrices") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = trial % 2 ? 3 : 2;
        const Mat a = test::random_matrix(rng, n, n);
        const Mat b = test::random_matrix(rng, n, n);

        for (unsigned j = 0; j <= 12; ++j) {
            CHECK(test::max_abs_diff(mat_pow(a, j + 1), mat_mul(mat_pow(a, j), a)) == 0.0);
        }
        const double tab = trace(mat_add(a, b));
        CHECK(tab == doctest::Approx(trace(a) + trace(b)).epsilon(1e-12));
        CHECK(trace(mat_mul(a, b)) == doctest::Approx(trace(mat_mul(b, a))).epsilon(1e-12));
        CHECK(transpose(transpose(a)) == a);
    }
}

TEST_CASE("vector helpers") {
    const Vec x{1.0, 1.0};
    CHECK(mat_vec(S, x) == Vec{1.2, 0.8});
    CHECK(quad_form(Mat::identity(2), Vec{3.0, 4.0}) == 25.0);
    CHECK_THROWS_AS(mat_vec(S, Vec{1.0}), std::invalid_argument);
    CHECK(is_diagonal(Mat::identity(3)));
    CHECK_FALSE(is_diagonal(S));
    CHECK_FALSE(is_symmetric(S));
}
