#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "srl/engine.hpp"
#include "srl/model.hpp"

namespace srl {

enum class OptimizerKind { AdaptiveMoments, PlainAscent };

struct TrainConfig {
    int n_epoch = 1000;
    int n_warmup = 50;
    double lr_ini = 1e-3;
    double lr_decay = 0.5;
    int n_sample = 512;
    double eps_converge = 3e-4;
    OptimizerKind optimizer = OptimizerKind::AdaptiveMoments;
    std::uint64_t seed = 0;
    int horizon = 170;   // T_trunc
    int window = -1;     // contiguous time window per trajectory; <=0: full
    int workers = 1;

    void validate() const;
};

// lr_ini during warm-up, then exponential decay reaching lr_ini * lr_decay at
// the final epoch: lr = lr_ini * lr_decay^((epoch - warmup)/(n_epoch - warmup)).
// Epochs are 1-based.
double learning_rate(const TrainConfig& cfg, int epoch);

struct TrainState {
    PolicyBundle policy;
    std::vector<Histogram> pool;  // trajectory-seeding histograms

    int epochs_run = 0;
    bool converged = false;
    int declared_epoch = 0;  // epoch at which convergence was declared
    bool clamp_clean = true; // no clamp events in the final 10% of epochs

    std::vector<double> objective_history;
    std::vector<double> linf_history;
    std::vector<double> lr_history;
    std::vector<long> clamp_history;
    std::vector<double> residual_history;   // mean |market residual| per epoch
    std::vector<std::uint64_t> pool_hash_history;
};

// Raised when training blows up (non-finite objective, or the policy change
// grows for 50 consecutive epochs). Carries a diagnostic snapshot.
class TrainingDiverged : public std::runtime_error {
public:
    TrainingDiverged(const std::string& msg, int epoch, std::vector<double> objective_tail)
        : std::runtime_error(msg), epoch(epoch), objective_tail(std::move(objective_tail)) {}
    int epoch;
    std::vector<double> objective_tail;
};

// Per-table optimizer state. The adaptive-moments update is applied lazily:
// cells with exactly zero gradient keep their moments and parameters
// untouched, so never-visited cells stay at the initial guess.
struct OptimizerState {
    std::vector<double> m, v;
    std::vector<int> steps;
    void init(std::size_t n) {
        m.assign(n, 0.0);
        v.assign(n, 0.0);
        steps.assign(n, 0);
    }
};

void optimizer_step(OptimizerKind kind, OptimizerState& state, const std::vector<double>& grad,
                    std::vector<double>& theta, double lr);

// Updates household and firm tables with the same learning rate from gradient
// reports computed on the same trajectory batch, then projects feasibility.
void multi_policy_step(const ModelSpec& spec, PolicyBundle& policies,
                       const ObjectiveReport& report, double lr, OptimizerKind kind,
                       OptimizerState& hh_state, OptimizerState& firm_state);

// Structural policy gradient loop: simulate a batch, evaluate the objective
// and exact gradient, update, repeat until the sup-norm policy change falls
// below eps_converge. During warm-up the seeding pool stays frozen at the
// model's initial histogram; afterwards each epoch reseeds from the previous
// epoch's final histograms.
TrainState train(const ModelSpec& spec, const TrainConfig& cfg, PolicyBundle init);

// Realized-path Phillips-curve residuals for a batch of HANK trajectories.
// The conditional expectation is replaced by the average over trajectories
// sharing the period-t aggregate cell (z, monetary shock, wage bracket).
std::vector<double> nkpc_residuals(const ModelSpec& spec,
                                   const std::vector<Trajectory>& trajectories);

}  // namespace srl
