#pragma once

#include <cstdint>
#include <vector>

#include "srl/model.hpp"

namespace srl {

// Smallest integer T with beta^T < eps_trunc.
int truncation_horizon(double beta, double eps_trunc);

// Identity in the forward pass, zero derivative in the backward pass. The
// gradient engine never records derivative paths through values passed
// through here (simulated prices and aggregates); the function exists to
// mark those hand-offs in code.
template <class T>
inline T stop_gradient(const T& x) {
    return x;
}

// One simulated path of the economy under fixed policies. Aggregate shocks
// are drawn from their chains; prices are cleared period by period; the
// histogram evolves by the Chapman-Kolmogorov update. All per-period
// aggregates needed for gradients and diagnostics are recorded.
struct Trajectory {
    int T = 0;
    std::vector<int> z_path;        // length T+1
    std::vector<int> aux_path;      // HANK: monetary-shock indices; PE: rate indices
    std::vector<double> price_path; // (T+1) x n_prices, row-major
    std::vector<double> lag_path;   // (T+1) x n_prices when the layout has a lag axis

    // HANK per-period aggregates (empty otherwise)
    std::vector<double> transfer;   // d - T
    std::vector<double> output;     // Y
    std::vector<double> inflation;  // Pi
    std::vector<double> labor;      // effective labor
    std::vector<double> real_rate;  // gross real rate R
    std::vector<double> nominal;    // 1+i entering each period, length T+2

    std::vector<double> holdings;     // g . b per period
    std::vector<double> consumption;  // aggregate consumption per period
    std::vector<double> residual;     // |market residual| per period (model-specific)

    Histogram g_final;  // distribution after the last update (seeds later epochs)
    int clamp_count = 0;
};

struct SimOptions {
    int horizon = 0;         // T; path length is T+1
    std::uint64_t seed = 0;  // drives the shock draws
};

Trajectory simulate_trajectory(const ModelSpec& spec, const PolicyBundle& policies,
                               const Histogram& g0, int z0, int aux0, const SimOptions& opts);

// Draws initial exogenous indices from the stationary distributions.
void draw_initial_indices(const ModelSpec& spec, std::uint64_t seed, int& z0, int& aux0);

struct ObjectiveOptions {
    // contiguous time window per trajectory; <= 0 means the full horizon.
    // Discount weights are beta^(t - window_start).
    int window = -1;
    std::uint64_t window_seed = 0;
};

struct ObjectiveReport {
    double value = 0.0;
    std::vector<double> per_trajectory_values;
    std::vector<double> gradient;        // congruent with the household table
    std::vector<double> firm_gradient;   // congruent with the firm table (HANK)
    int truncation_horizon = 0;
};

// Scratch space reused across trajectories by one worker.
struct EngineWorkspace {
    std::vector<double> d;
    std::vector<double> d_path;
    std::vector<double> V;
    std::vector<double> V_next;
    std::vector<double> actions;
    std::vector<double> bprime;
    std::vector<double> util;
    std::vector<double> scratch;
    std::vector<double> discs;
};

// Next-period wealth from the budget identity at the given aggregate inputs;
// actions are laid out [action][J] as produced by eval_policy. b' is always
// derived this way, never stored.
void implied_bprime(const ModelSpec& spec, double z_level, std::span<const double> prices,
                    double transfer, std::span<const double> actions, std::span<double> out);

// Value of one trajectory under the given policies, with the exact policy
// gradient accumulated into grad_hh / grad_firm when non-null. The recorded
// price path is treated as fixed data (stop-gradient): derivatives flow only
// through the reward and through the lottery weights inside each transition.
double objective_on_trajectory(const ModelSpec& spec, const PolicyBundle& policies,
                               const Trajectory& traj, int traj_index,
                               const ObjectiveOptions& opts, std::vector<double>* grad_hh,
                               std::vector<double>* grad_firm, EngineWorkspace& ws);

// Monte Carlo objective over a trajectory set: mean per-trajectory value and
// the exact gradient, averaged over trajectories. Deterministic for a fixed
// worker count.
ObjectiveReport evaluate_objective(const ModelSpec& spec, const PolicyBundle& policies,
                                   const std::vector<Trajectory>& trajectories,
                                   const ObjectiveOptions& opts = {}, int n_workers = 1);

}  // namespace srl
