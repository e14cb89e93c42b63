#include "srl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "srl/parallel.hpp"
#include "srl/rng.hpp"

namespace srl {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

std::uint64_t fnv1a(const double* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n * sizeof(double); ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t pool_hash(const std::vector<Histogram>& pool) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& g : pool) h = fnv1a(g.mass.data(), g.mass.size(), h);
    return h;
}

double linf_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

void TrainConfig::validate() const {
    if (n_epoch < 1) throw std::invalid_argument("train: n_epoch must be >= 1");
    if (n_warmup < 0 || n_warmup >= n_epoch)
        throw std::invalid_argument("train: need 0 <= n_warmup < n_epoch");
    if (!(lr_ini > 0.0)) throw std::invalid_argument("train: lr_ini must be > 0");
    if (!(lr_decay > 0.0 && lr_decay < 1.0))
        throw std::invalid_argument("train: lr_decay must be in (0,1)");
    if (n_sample < 1) throw std::invalid_argument("train: n_sample must be >= 1");
    if (!(eps_converge > 0.0)) throw std::invalid_argument("train: eps_converge must be > 0");
    if (horizon < 0) throw std::invalid_argument("train: horizon must be >= 0");
}

double learning_rate(const TrainConfig& cfg, int epoch) {
    if (epoch < 0) throw std::invalid_argument("learning_rate: epoch must be >= 0");
    const double t_scaled =
        static_cast<double>(std::max(epoch - cfg.n_warmup, 0)) / (cfg.n_epoch - cfg.n_warmup);
    return cfg.lr_ini * std::pow(cfg.lr_decay, t_scaled);
}

void optimizer_step(OptimizerKind kind, OptimizerState& state, const std::vector<double>& grad,
                    std::vector<double>& theta, double lr) {
    if (kind == OptimizerKind::PlainAscent) {
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += lr * grad[i];
        return;
    }
    if (state.m.size() != theta.size()) state.init(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double g = grad[i];
        if (g == 0.0) continue;  // lazy: untouched cells keep their moments
        const int t = ++state.steps[i];
        state.m[i] = kAdamBeta1 * state.m[i] + (1.0 - kAdamBeta1) * g;
        state.v[i] = kAdamBeta2 * state.v[i] + (1.0 - kAdamBeta2) * g * g;
        const double mhat = state.m[i] / (1.0 - std::pow(kAdamBeta1, t));
        const double vhat = state.v[i] / (1.0 - std::pow(kAdamBeta2, t));
        theta[i] += lr * mhat / (std::sqrt(vhat) + kAdamEps);
    }
}

void multi_policy_step(const ModelSpec& spec, PolicyBundle& policies,
                       const ObjectiveReport& report, double lr, OptimizerKind kind,
                       OptimizerState& hh_state, OptimizerState& firm_state) {
    optimizer_step(kind, hh_state, report.gradient, policies.household.values, lr);
    project_feasible(spec, policies.household);
    if (policies.firm && !report.firm_gradient.empty()) {
        optimizer_step(kind, firm_state, report.firm_gradient, policies.firm->values, lr);
        project_firm(spec, *policies.firm);
    }
}

TrainState train(const ModelSpec& spec, const TrainConfig& cfg, PolicyBundle init) {
    cfg.validate();
    project_bundle(spec, init);

    TrainState state;
    state.policy = std::move(init);
    state.pool = {spec.initial_histogram()};

    OptimizerState hh_opt, firm_opt;
    const int N = cfg.n_sample;
    const int workers = cfg.workers < 1 ? 1 : cfg.workers;
    const std::size_t hh_size = state.policy.household.values.size();
    const std::size_t firm_size = state.policy.firm ? state.policy.firm->values.size() : 0;

    std::vector<double> prev_hh(hh_size), prev_firm(firm_size);
    int growth_streak = 0;

    for (int epoch = 1; epoch <= cfg.n_epoch; ++epoch) {
        // convergence is checked at the start of the epoch on the last
        // recorded update, so the stopping epoch runs no further work
        if (!state.linf_history.empty() && state.linf_history.back() < cfg.eps_converge) {
            state.converged = true;
            state.declared_epoch = epoch;
            break;
        }

        const double lr = learning_rate(cfg, epoch);
        state.pool_hash_history.push_back(pool_hash(state.pool));

        std::vector<Trajectory> trajs(N);
        std::vector<double> values(N);
        const int used = std::min(workers, N);
        std::vector<std::vector<double>> ghh(used), gfirm(used);
        for (int w = 0; w < used; ++w) {
            ghh[w].assign(hh_size, 0.0);
            if (firm_size > 0) gfirm[w].assign(firm_size, 0.0);
        }

        ObjectiveOptions oopts;
        oopts.window = cfg.window;
        oopts.window_seed = stream_key(cfg.seed, epoch, 0x717);

        parallel_chunks(N, used, [&](int w, int begin, int end) {
            EngineWorkspace ws;
            for (int n = begin; n < end; ++n) {
                Rng pick(stream_key(cfg.seed, epoch, n, 0xB00));
                const Histogram& g0 = state.pool[pick.below(state.pool.size())];
                int z0 = 0, aux0 = 0;
                draw_initial_indices(spec, stream_key(cfg.seed, epoch, n, 0xB01), z0, aux0);
                SimOptions sopts;
                sopts.horizon = cfg.horizon;
                sopts.seed = stream_key(cfg.seed, epoch, n, 0xB02);
                trajs[n] = simulate_trajectory(spec, state.policy, g0, z0, aux0, sopts);
                values[n] = objective_on_trajectory(spec, state.policy, trajs[n], n, oopts,
                                                    &ghh[w], firm_size > 0 ? &gfirm[w] : nullptr,
                                                    ws);
            }
        });

        double objective = 0.0;
        for (double v : values) objective += v;
        objective /= N;

        ObjectiveReport report;
        report.gradient.assign(hh_size, 0.0);
        if (firm_size > 0) report.firm_gradient.assign(firm_size, 0.0);
        for (int w = 0; w < used; ++w) {
            for (std::size_t i = 0; i < hh_size; ++i) report.gradient[i] += ghh[w][i];
            for (std::size_t i = 0; i < firm_size; ++i) report.firm_gradient[i] += gfirm[w][i];
        }
        for (double& v : report.gradient) v /= N;
        for (double& v : report.firm_gradient) v /= N;

        long clamps = 0;
        double resid = 0.0;
        long resid_n = 0;
        for (const auto& tr : trajs) {
            clamps += tr.clamp_count;
            for (double r : tr.residual) { resid += r; ++resid_n; }
        }

        if (!std::isfinite(objective))
            throw TrainingDiverged("training diverged: non-finite objective", epoch,
                                   state.objective_history);

        std::copy(state.policy.household.values.begin(), state.policy.household.values.end(),
                  prev_hh.begin());
        if (firm_size > 0)
            std::copy(state.policy.firm->values.begin(), state.policy.firm->values.end(),
                      prev_firm.begin());

        multi_policy_step(spec, state.policy, report, lr, cfg.optimizer, hh_opt, firm_opt);

        double linf = linf_diff(state.policy.household.values, prev_hh);
        if (firm_size > 0) linf = std::max(linf, linf_diff(state.policy.firm->values, prev_firm));

        if (!state.linf_history.empty() && linf > state.linf_history.back())
            ++growth_streak;
        else
            growth_streak = 0;
        if (growth_streak >= 50)
            throw TrainingDiverged("training diverged: policy change grew for 50 epochs", epoch,
                                   state.objective_history);

        state.objective_history.push_back(objective);
        state.linf_history.push_back(linf);
        state.lr_history.push_back(lr);
        state.clamp_history.push_back(clamps);
        state.residual_history.push_back(resid_n > 0 ? resid / resid_n : 0.0);
        state.epochs_run = epoch;

        if (epoch >= cfg.n_warmup) {
            state.pool.clear();
            state.pool.reserve(N);
            for (auto& tr : trajs) state.pool.push_back(std::move(tr.g_final));
        }
    }

    if (!state.converged && !state.linf_history.empty() &&
        state.linf_history.back() < cfg.eps_converge) {
        state.converged = true;
        state.declared_epoch = state.epochs_run + 1;
    }

    // clamp events in the final 10% of epochs fail validation
    const int tail_start = state.epochs_run - std::max(1, state.epochs_run / 10);
    state.clamp_clean = true;
    for (int e = std::max(0, tail_start); e < state.epochs_run; ++e)
        if (state.clamp_history[e] > 0) state.clamp_clean = false;

    return state;
}

std::vector<double> nkpc_residuals(const ModelSpec& spec,
                                   const std::vector<Trajectory>& trajectories) {
    if (spec.kind != ModelKind::Hank)
        throw std::invalid_argument("nkpc_residuals: requires a HANK trajectory set");
    const auto& wgrid = spec.layout.price_grids[1];
    const int np = spec.n_prices();

    // conditional average of the forward term over trajectories sharing the
    // period-t aggregate cell
    struct Cell {
        double sum = 0.0;
        long count = 0;
    };
    std::map<std::tuple<int, int, int, int>, Cell> groups;
    auto key_at = [&](const Trajectory& tr, int t) {
        const double w = tr.price_path[static_cast<std::size_t>(t) * np + 1];
        const int wb = bracket_on_grid(wgrid, w).lo;
        return std::make_tuple(t, tr.z_path[t], tr.aux_path[t], wb);
    };
    auto forward_term = [&](const Trajectory& tr, int t) {
        const double growth = tr.output[t + 1] / tr.output[t];
        return (1.0 / tr.real_rate[t + 1]) * growth * tr.inflation[t + 1] *
               (1.0 + tr.inflation[t + 1]);
    };

    for (const auto& tr : trajectories)
        for (int t = 0; t < tr.T; ++t) {
            Cell& c = groups[key_at(tr, t)];
            c.sum += forward_term(tr, t);
            ++c.count;
        }

    const double slope = spec.eps_subst / spec.theta;
    const double markup = (spec.eps_subst - 1.0) / spec.eps_subst;
    std::vector<double> residuals;
    for (const auto& tr : trajectories)
        for (int t = 0; t < tr.T; ++t) {
            const Cell& c = groups[key_at(tr, t)];
            const double expected = c.sum / c.count;
            const double w = tr.price_path[static_cast<std::size_t>(t) * np + 1];
            const double mc = w / spec.layout.z_grid[tr.z_path[t]];
            const double pi = tr.inflation[t];
            residuals.push_back(pi * (1.0 + pi) - slope * (mc - markup) - expected);
        }
    return residuals;
}

}  // namespace srl
