#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wncs/channel.hpp"

using namespace wncs;

TEST_CASE("degenerate probabilities") {
    ErasureChannel always(1.0, make_stream(1, StreamKind::Channel));
    ErasureChannel never(0.0, make_stream(1, StreamKind::Channel));
    for (std::int64_t k = 1; k <= 1000; ++k) {
        for (bool b : always.draw_all(k, 8)) CHECK(b);
        for (bool b : never.draw_all(k, 8)) CHECK_FALSE(b);
    }
}

TEST_CASE("invalid construction and use") {
    CHECK_THROWS_AS(ErasureChannel(1.3, make_stream(1, StreamKind::Channel)), std::invalid_argument);
    CHECK_THROWS_AS(ErasureChannel(-0.1, make_stream(1, StreamKind::Channel)), std::invalid_argument);
    ErasureChannel ch(0.5, make_stream(1, StreamKind::Channel));
    CHECK_THROWS_AS(ch.draw_all(1, 0), std::invalid_argument);
    ch.draw_all(1, 2);
    CHECK_THROWS_AS(ch.draw_all(1, 2), std::logic_error);
}

TEST_CASE("empirical success rate") {
    const double p = 0.7;
    const std::int64_t T = 5000;
    const std::size_t N = 8;
    ErasureChannel ch(p, make_stream(2024, StreamKind::Channel));
    std::vector<int> hits(N, 0);
    for (std::int64_t k = 1; k <= T; ++k) {
        const auto beta = ch.draw_all(k, N);
        for (std::size_t i = 0; i < N; ++i) hits[i] += beta[i];
    }
    int total = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const double rate = double(hits[i]) / T;
        CHECK(rate >= 0.67);
        CHECK(rate <= 0.73);
        total += hits[i];
    }
    const double overall = double(total) / (T * N);
    CHECK(std::fabs(overall - p) <= 4 * std::sqrt(p * (1 - p) / (T * N)));
}

TEST_CASE("fixed seed reproduces the realization, nested in p") {
    ErasureChannel a(0.6, make_stream(9, StreamKind::Channel));
    ErasureChannel b(0.6, make_stream(9, StreamKind::Channel));
    ErasureChannel c(0.8, make_stream(9, StreamKind::Channel));
    for (std::int64_t k = 1; k <= 500; ++k) {
        const auto ba = a.draw_all(k, 8);
        CHECK(ba == b.draw_all(k, 8));
        const auto bc = c.draw_all(k, 8);
        for (std::size_t i = 0; i < 8; ++i) CHECK((!ba[i] || bc[i]));
    }
}
