#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace srl {

// AR(1) process x' = (1-rho)*mean + rho*x + nu*eps, eps ~ N(0,1).
struct Ar1Params {
    double rho = 0.0;   // autocorrelation, |rho| < 1
    double nu = 0.0;    // innovation standard deviation
    double mean = 0.0;  // unconditional mean
};

// Mean-reverting process with square-root volatility,
// r' = (1-rho_r)*mean_level + rho_r*r + nu_r*sqrt(max(r,0))*eps.
struct SqrtProcessParams {
    double mean_level = 0.0;  // long-run mean, > 0
    double rho_r = 0.0;
    double nu_r = 0.0;
};

// Finite-state Markov chain: strictly increasing grid of state values and a
// row-stochastic transition matrix (row-major, n x n).
struct MarkovChain {
    std::vector<double> grid;
    std::vector<double> transition;

    int n() const { return static_cast<int>(grid.size()); }
    bool empty() const { return grid.empty(); }
    std::span<const double> row(int i) const {
        return {transition.data() + static_cast<std::size_t>(i) * grid.size(), grid.size()};
    }

    // max |sum(row) - 1| over rows
    double max_row_sum_error() const;

    // stationary distribution by power iteration
    std::vector<double> stationary(double tol = 1e-14, int max_iter = 200000) const;
};

// Tauchen (1986) discretization of an AR(1) on a uniform grid spanning
// mean +/- span unconditional standard deviations.
MarkovChain tauchen(const Ar1Params& params, int n, double span = 3.0);

// Discretizes the square-root process on a strictly positive uniform grid;
// rows are Tauchen-style conditional normals with state-dependent volatility.
MarkovChain discretize_sqrt_process(const SqrtProcessParams& params, int n, double span = 3.0);

// Simulates grid-index paths of length horizon+1 starting from t0_index.
// Deterministic given the seed.
std::vector<int> simulate_chain(const MarkovChain& chain, int t0_index, int horizon,
                                std::uint64_t rng_seed);

// Returns a copy of the chain with the grid mapped through exp(); used when
// the AR(1) is specified in logs but simulation works in levels.
MarkovChain exp_grid(const MarkovChain& chain);

// Single-state chain (grid {value}, transition [1]); degenerate aggregate.
MarkovChain singleton_chain(double value);

}  // namespace srl
