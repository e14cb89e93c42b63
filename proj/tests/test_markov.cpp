#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "srl/markov.hpp"

using namespace srl;

namespace {

// brute-force stationary vector: repeated matrix-vector products to a fixed point
std::vector<double> stationary_by_power(const MarkovChain& c) {
    const int n = c.n();
    std::vector<double> pi(n, 1.0 / n), next(n);
    for (int it = 0; it < 500000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) next[j] += pi[i] * c.transition[i * n + j];
        double diff = 0.0;
        for (int j = 0; j < n; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
        pi = next;
        if (diff < 1e-15) break;
    }
    return pi;
}

}  // namespace

TEST_CASE("tauchen: iid case has identical rows equal to the unconditional law") {
    const MarkovChain c = tauchen({0.0, 1.0, 0.0}, 3, 2.0);
    REQUIRE(c.n() == 3);
    CHECK(c.grid[0] == doctest::Approx(-2.0));
    CHECK(c.grid[2] == doctest::Approx(2.0));
    for (int j = 0; j < 3; ++j) {
        CHECK(c.transition[0 * 3 + j] == doctest::Approx(c.transition[1 * 3 + j]).epsilon(1e-14));
        CHECK(c.transition[0 * 3 + j] == doctest::Approx(c.transition[2 * 3 + j]).epsilon(1e-14));
    }
    // unconditional discretized normal with grid step 2
    const double phi1 = 0.5 * std::erfc(-(-1.0) / std::sqrt(2.0));
    CHECK(c.transition[0] == doctest::Approx(1.0 - phi1).epsilon(1e-12));
    CHECK(c.transition[1] == doctest::Approx(2.0 * phi1 - 1.0).epsilon(1e-12));
}

TEST_CASE("tauchen: aggregate-shock chain is stochastic, spans +/-3 sd, symmetric") {
    const Ar1Params p{0.9, 0.02, 0.0};
    const int n = 30;
    const MarkovChain c = tauchen(p, n);
    CHECK(c.max_row_sum_error() < 1e-12);
    const double sigma = 0.02 / std::sqrt(1.0 - 0.81);
    CHECK(c.grid.front() == doctest::Approx(-3.0 * sigma).epsilon(1e-12));
    CHECK(c.grid.back() == doctest::Approx(3.0 * sigma).epsilon(1e-12));
    for (double v : c.transition) CHECK(v >= 0.0);
    // symmetry about the mean: T[i][j] == T[n-1-i][n-1-j]
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            CHECK(std::abs(c.transition[i * n + j] - c.transition[(n - 1 - i) * n + (n - 1 - j)]) <
                  1e-12);
}

TEST_CASE("tauchen: stationary distribution matches the power-iteration oracle") {
    const MarkovChain c = tauchen({0.6, 0.2, 0.0}, 3);
    const auto oracle = stationary_by_power(c);
    const auto got = c.stationary();
    for (int j = 0; j < 3; ++j) CHECK(got[j] == doctest::Approx(oracle[j]).epsilon(1e-10));
    // fixed point of the transition: pi^T P = pi^T
    for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) acc += oracle[i] * c.transition[i * 3 + j];
        CHECK(acc == doctest::Approx(oracle[j]).epsilon(1e-9));
    }
}

TEST_CASE("tauchen: rejects bad arguments") {
    CHECK_THROWS_AS(tauchen({0.5, 0.1, 0.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(tauchen({1.0, 0.1, 0.0}, 5), std::invalid_argument);
    CHECK_THROWS_AS(tauchen({0.5, -0.1, 0.0}, 5), std::invalid_argument);
    CHECK_THROWS_AS(tauchen({0.5, std::nan(""), 0.0}, 5), std::invalid_argument);
    CHECK_THROWS_AS(tauchen({0.5, 0.1, 0.0}, 5, -1.0), std::invalid_argument);
}

TEST_CASE("sqrt process: PE rate chain is positive and stochastic") {
    const MarkovChain c = discretize_sqrt_process({0.038, 0.8, 0.02}, 20);
    REQUIRE(c.n() == 20);
    CHECK(c.max_row_sum_error() < 1e-12);
    for (double g : c.grid) CHECK(g > 0.0);
}

TEST_CASE("sqrt process: zero volatility gives a deterministic chain") {
    const MarkovChain c = discretize_sqrt_process({0.038, 0.8, 0.0}, 10);
    for (int i = 0; i < c.n(); ++i) {
        const double target = 0.2 * 0.038 + 0.8 * c.grid[i];
        int nearest = 0;
        for (int j = 1; j < c.n(); ++j)
            if (std::abs(c.grid[j] - target) < std::abs(c.grid[nearest] - target)) nearest = j;
        for (int j = 0; j < c.n(); ++j)
            CHECK(c.transition[i * c.n() + j] == doctest::Approx(j == nearest ? 1.0 : 0.0));
    }
}

TEST_CASE("sqrt process: conditional means match the analytic recursion") {
    const SqrtProcessParams p{0.038, 0.8, 0.02};
    const MarkovChain c = discretize_sqrt_process(p, 20);
    const double step = c.grid[1] - c.grid[0];
    for (int i = 0; i < c.n(); ++i) {
        double mean = 0.0;
        for (int j = 0; j < c.n(); ++j) mean += c.transition[i * c.n() + j] * c.grid[j];
        const double analytic = (1.0 - p.rho_r) * p.mean_level + p.rho_r * c.grid[i];
        CHECK(std::abs(mean - analytic) < step);
    }
}

TEST_CASE("sqrt process: rejects parameters implying negative support") {
    CHECK_THROWS_AS(discretize_sqrt_process({0.001, 0.8, 0.05}, 10), std::invalid_argument);
    CHECK_THROWS_AS(discretize_sqrt_process({-0.01, 0.8, 0.01}, 10), std::invalid_argument);
    CHECK_THROWS_AS(discretize_sqrt_process({0.038, 0.8, 0.02}, 1), std::invalid_argument);
}

TEST_CASE("simulate_chain: identity matrix holds the state") {
    MarkovChain c;
    c.grid = {0.0, 1.0, 2.0};
    c.transition = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    const auto path = simulate_chain(c, 1, 50, 42);
    REQUIRE(path.size() == 51);
    for (int s : path) CHECK(s == 1);
}

TEST_CASE("simulate_chain: two-state flip chain alternates") {
    MarkovChain c;
    c.grid = {0.0, 1.0};
    c.transition = {0, 1, 1, 0};
    const auto path = simulate_chain(c, 0, 9, 7);
    for (std::size_t t = 0; t < path.size(); ++t) CHECK(path[t] == static_cast<int>(t % 2));
}

TEST_CASE("simulate_chain: empirical frequencies match rows within 3 standard errors") {
    const MarkovChain c = tauchen({0.6, 0.2, 0.0}, 3);
    const int steps = 1000000;
    const auto path = simulate_chain(c, 1, steps, 2024);
    long counts[3][3] = {};
    long visits[3] = {};
    for (int t = 0; t < steps; ++t) {
        ++counts[path[t]][path[t + 1]];
        ++visits[path[t]];
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double p = c.transition[i * 3 + j];
            const double freq = static_cast<double>(counts[i][j]) / visits[i];
            const double se = std::sqrt(p * (1.0 - p) / visits[i]);
            CHECK(std::abs(freq - p) <= 3.0 * se + 1e-12);
        }
}

TEST_CASE("simulate_chain: equal seeds give identical paths, different seeds differ") {
    const MarkovChain c = tauchen({0.9, 0.02, 0.0}, 7);
    const auto a = simulate_chain(c, 3, 200, 11);
    const auto b = simulate_chain(c, 3, 200, 11);
    CHECK(a == b);
    const auto d = simulate_chain(c, 3, 200, 12);
    CHECK(a != d);
}

TEST_CASE("simulate_chain: rejects bad arguments") {
    const MarkovChain c = tauchen({0.5, 0.1, 0.0}, 4);
    CHECK_THROWS_AS(simulate_chain(c, -1, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_chain(c, 4, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(simulate_chain(c, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("exp_grid exponentiates nodes and keeps the transition") {
    const MarkovChain c = tauchen({0.6, 0.2, 0.0}, 3);
    const MarkovChain e = exp_grid(c);
    for (int i = 0; i < 3; ++i) CHECK(e.grid[i] == doctest::Approx(std::exp(c.grid[i])));
    CHECK(e.transition == c.transition);
}
