#include "srl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srl/parallel.hpp"
#include "srl/rng.hpp"

namespace srl {

int truncation_horizon(double beta, double eps_trunc) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("truncation_horizon: beta must be in (0,1)");
    if (!(eps_trunc > 0.0 && eps_trunc < 1.0))
        throw std::invalid_argument("truncation_horizon: eps_trunc must be in (0,1)");
    int T = std::max(0, static_cast<int>(std::floor(std::log(eps_trunc) / std::log(beta))) - 2);
    while (std::pow(beta, T) >= eps_trunc) ++T;
    return T;
}

namespace {

std::vector<int> draw_path(const MarkovChain& chain, int i0, int T, std::uint64_t key) {
    std::vector<int> path(T + 1);
    path[0] = i0;
    if (T == 0 || chain.n() == 1) {
        std::fill(path.begin(), path.end(), chain.n() == 1 ? 0 : i0);
        path[0] = i0;
        return path;
    }
    Rng rng(key);
    for (int t = 0; t < T; ++t) path[t + 1] = rng.draw_discrete(chain.row(path[t]));
    return path;
}

AggCoord coord_at(const ModelSpec& spec, const Trajectory& traj, int t) {
    AggCoord coord;
    coord.z_index = traj.z_path[t];
    if (spec.kind == ModelKind::Hank) coord.eps_index = traj.aux_path[t];
    const int np = spec.n_prices();
    coord.prices.assign(traj.price_path.begin() + static_cast<std::size_t>(t) * np,
                        traj.price_path.begin() + static_cast<std::size_t>(t + 1) * np);
    if (spec.layout.lag_depth == 1)
        coord.lagged.assign(traj.lag_path.begin() + static_cast<std::size_t>(t) * np,
                            traj.lag_path.begin() + static_cast<std::size_t>(t + 1) * np);
    return coord;
}

void eval_with_corners(const PolicyTable& table, const CornerSet& cs, std::span<double> out) {
    const int J = table.layout.J();
    std::fill(out.begin(), out.end(), 0.0);
    for (int a = 0; a < table.action_dim; ++a) {
        double* dst = out.data() + static_cast<std::size_t>(a) * J;
        for (int c = 0; c < cs.count; ++c) {
            const double w = cs.weights[c];
            const double* src = table.values.data() + table.plane_offset(cs.cells[c], a);
            for (int j = 0; j < J; ++j) dst[j] += w * src[j];
        }
    }
}

}  // namespace

void implied_bprime(const ModelSpec& spec, double z_level, std::span<const double> prices,
                    double transfer, std::span<const double> actions, std::span<double> out) {
    const StateLayout& lay = spec.layout;
    const int J = lay.J();
    const double R = 1.0 + prices[0];
    const double* c = actions.data();
    switch (spec.kind) {
        case ModelKind::HuggettGE:
        case ModelKind::HuggettPE:
            for (int j = 0; j < J; ++j)
                out[j] = R * lay.b_grid[lay.b_of(j)] + lay.y_grid[lay.y_of(j)] * z_level - c[j];
            break;
        case ModelKind::KrusellSmith: {
            const double w = prices[1];
            for (int j = 0; j < J; ++j)
                out[j] = R * lay.b_grid[lay.b_of(j)] + w * lay.y_grid[lay.y_of(j)] - c[j];
            break;
        }
        case ModelKind::Hank: {
            const double w = prices[1];
            const double* n = actions.data() + J;
            for (int j = 0; j < J; ++j)
                out[j] = R * lay.b_grid[lay.b_of(j)] + w * lay.y_grid[lay.y_of(j)] * n[j] +
                         transfer - c[j];
            break;
        }
    }
}

void draw_initial_indices(const ModelSpec& spec, std::uint64_t seed, int& z0, int& aux0) {
    Rng rng(stream_key(seed, 0x1717));
    z0 = 0;
    aux0 = 0;
    if (spec.z_chain.n() > 1) {
        const auto pz = spec.z_chain.stationary();
        z0 = rng.draw_discrete(pz);
    }
    if (spec.kind == ModelKind::Hank && spec.eps_chain.n() > 1) {
        const auto pe = spec.eps_chain.stationary();
        aux0 = rng.draw_discrete(pe);
    } else if (spec.kind == ModelKind::HuggettPE) {
        const auto pr = spec.pe_r_chain.stationary();
        aux0 = rng.draw_discrete(pr);
    }
}

Trajectory simulate_trajectory(const ModelSpec& spec, const PolicyBundle& policies,
                               const Histogram& g0, int z0, int aux0, const SimOptions& opts) {
    const StateLayout& lay = spec.layout;
    const int T = opts.horizon;
    if (T < 0) throw std::invalid_argument("simulate_trajectory: horizon must be >= 0");
    const int J = lay.J();
    if (static_cast<int>(g0.mass.size()) != J)
        throw std::invalid_argument("simulate_trajectory: histogram size mismatch");
    const int np = spec.n_prices();
    const bool hank = spec.kind == ModelKind::Hank;

    Trajectory traj;
    traj.T = T;
    traj.z_path = draw_path(spec.z_chain, z0, T, stream_key(opts.seed, 0xF00D, 1));
    if (hank)
        traj.aux_path = draw_path(spec.eps_chain, aux0, T, stream_key(opts.seed, 0xF00D, 2));
    else if (spec.kind == ModelKind::HuggettPE)
        traj.aux_path = draw_path(spec.pe_r_chain, aux0, T, stream_key(opts.seed, 0xF00D, 2));
    traj.price_path.resize(static_cast<std::size_t>(T + 1) * np);
    if (lay.lag_depth == 1) traj.lag_path.resize(static_cast<std::size_t>(T + 1) * np);
    traj.holdings.resize(T + 1);
    traj.consumption.resize(T + 1);
    traj.residual.resize(T + 1);
    if (hank) {
        traj.transfer.resize(T + 1);
        traj.output.resize(T + 1);
        traj.inflation.resize(T + 1);
        traj.labor.resize(T + 1);
        traj.real_rate.resize(T + 1);
        traj.nominal.assign(T + 2, spec.rbar_gross);
    }

    Histogram g = g0;
    Histogram g_next;
    g_next.mass.resize(J);
    std::vector<double> scratch(J);
    std::vector<double> actions(static_cast<std::size_t>(J) * (hank ? 2 : 1));
    std::vector<double> bprime(J);

    // lagged prices before the first period default to the grid midpoints
    std::vector<double> lag_prev(np);
    for (int a = 0; a < np; ++a) {
        const auto& pg = lay.price_grids[a];
        lag_prev[a] = 0.5 * (pg.front() + pg.back());
    }

    AggCoord coord;
    coord.prices.resize(np);
    if (lay.lag_depth == 1) coord.lagged.resize(np);

    for (int t = 0; t <= T; ++t) {
        const int z_idx = traj.z_path[t];
        const double z_level = lay.z_grid[z_idx];
        double* prices = traj.price_path.data() + static_cast<std::size_t>(t) * np;
        double transfer = 0.0;

        switch (spec.kind) {
            case ModelKind::HuggettGE: {
                const SupplySchedule sched = supply_schedule(
                    policies.household, g, z_idx, z_level, spec.bond_supply,
                    lay.lag_depth == 1 ? std::span<const double>(lag_prev) : std::span<const double>{});
                const ClearingOutcome out = clear_bracket(sched, 0.0);
                if (out.clamped) ++traj.clamp_count;
                prices[0] = out.price;
                break;
            }
            case ModelKind::HuggettPE:
                prices[0] = spec.pe_r_chain.grid[traj.aux_path[t]];
                break;
            case ModelKind::KrusellSmith: {
                const KsPrices kp = ks_price_map(g, lay.b_grid, z_level, spec.alpha, spec.delta);
                prices[0] = kp.r;
                prices[1] = kp.w;
                break;
            }
            case ModelKind::Hank: {
                const HankOutcome ho =
                    hank_clearing(policies.household, *policies.firm, g, z_idx, traj.aux_path[t],
                                  traj.nominal[t], spec.hank_pricing());
                if (ho.clamped) ++traj.clamp_count;
                prices[0] = ho.r;
                prices[1] = ho.w;
                transfer = ho.dividend - ho.tax;
                traj.transfer[t] = transfer;
                traj.output[t] = ho.output;
                traj.inflation[t] = ho.inflation;
                traj.labor[t] = ho.labor;
                traj.real_rate[t] = 1.0 + ho.r;
                traj.nominal[t + 1] = ho.nominal_next;
                traj.residual[t] = ho.residual;
                break;
            }
        }
        if (lay.lag_depth == 1)
            std::copy(lag_prev.begin(), lag_prev.end(),
                      traj.lag_path.begin() + static_cast<std::size_t>(t) * np);

        std::copy(prices, prices + np, coord.prices.begin());
        if (lay.lag_depth == 1) std::copy(lag_prev.begin(), lag_prev.end(), coord.lagged.begin());
        coord.z_index = z_idx;
        coord.eps_index = hank ? traj.aux_path[t] : 0;
        traj.clamp_count += eval_policy(policies.household, coord, actions);

        implied_bprime(spec, z_level, {prices, static_cast<std::size_t>(np)}, transfer, actions,
                       bprime);

        double held = 0.0, cons = 0.0;
        for (int j = 0; j < J; ++j) {
            held += g.mass[j] * lay.b_grid[lay.b_of(j)];
            cons += g.mass[j] * actions[j];
        }
        traj.holdings[t] = held;
        traj.consumption[t] = cons;
        if (spec.kind == ModelKind::HuggettGE)
            traj.residual[t] = std::abs(held - spec.bond_supply);
        else if (!hank)
            traj.residual[t] = 0.0;

        const TransitionLottery lottery = build_lottery(bprime, lay);
        forward_into(g.mass, lottery, spec.y_chain, g_next.mass, scratch);
        g.mass.swap(g_next.mass);
        std::copy(prices, prices + np, lag_prev.begin());
    }
    traj.g_final = std::move(g);
    return traj;
}

double objective_on_trajectory(const ModelSpec& spec, const PolicyBundle& policies,
                               const Trajectory& traj, int traj_index,
                               const ObjectiveOptions& opts, std::vector<double>* grad_hh,
                               std::vector<double>* grad_firm, EngineWorkspace& ws) {
    const StateLayout& lay = spec.layout;
    const int J = lay.J();
    const int n_y = lay.n_y();
    const int T = traj.T;
    const bool hank = spec.kind == ModelKind::Hank;
    const MarkovChain& ychain = spec.y_chain;

    int t0 = 0, t1 = T;
    if (opts.window > 0 && opts.window <= T) {
        Rng rng(stream_key(opts.window_seed, static_cast<std::uint64_t>(traj_index), 0xA11CE));
        t0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(T - opts.window + 2)));
        t1 = t0 + opts.window - 1;
    }
    const int W = t1 - t0 + 1;

    ws.d.assign(J, 1.0 / J);
    ws.d_path.resize(static_cast<std::size_t>(W) * J);
    ws.actions.resize(static_cast<std::size_t>(J) * (hank ? 2 : 1));
    ws.bprime.resize(J);
    ws.util.resize(J);
    ws.scratch.resize(J);
    ws.V.assign(J, 0.0);
    ws.V_next.resize(J);

    double value = 0.0;
    const int np = spec.n_prices();
    ws.discs.resize(W);
    ws.discs[0] = 1.0;
    for (int k = 1; k < W; ++k) ws.discs[k] = ws.discs[k - 1] * spec.beta;

    // forward pass: accumulate the objective and record the learning weights
    for (int t = t0; t <= t1; ++t) {
        const AggCoord coord = coord_at(spec, traj, t);
        const CornerSet cs = price_corners(lay, coord);
        eval_with_corners(policies.household, cs, ws.actions);
        double ut = 0.0;
        if (hank) {
            for (int j = 0; j < J; ++j)
                ut += ws.d[j] * spec.utility(ws.actions[j], ws.actions[J + j]);
        } else {
            for (int j = 0; j < J; ++j) ut += ws.d[j] * spec.utility(ws.actions[j]);
        }
        if (!std::isfinite(ut))
            throw std::runtime_error("objective: non-finite utility at period " + std::to_string(t));
        value += ws.discs[t - t0] * ut;
        std::copy(ws.d.begin(), ws.d.end(), ws.d_path.begin() + static_cast<std::size_t>(t - t0) * J);
        if (t < t1) {
            const double* prices = traj.price_path.data() + static_cast<std::size_t>(t) * np;
            implied_bprime(spec, lay.z_grid[traj.z_path[t]], {prices, static_cast<std::size_t>(np)},
                           hank ? traj.transfer[t] : 0.0, ws.actions, ws.bprime);
            const TransitionLottery lot = build_lottery(ws.bprime, lay);
            forward_into(ws.d, lot, ychain, ws.scratch, ws.V_next);
            ws.d.swap(ws.scratch);
        }
    }

    if (grad_hh == nullptr && grad_firm == nullptr) return value;

    // backward pass: adjoint of the d-recursion with the recorded prices
    // held fixed; V carries the discounted value-to-go per individual state
    std::fill(ws.V.begin(), ws.V.end(), 0.0);
    for (int t = t1; t >= t0; --t) {
        const double disc_t = ws.discs[t - t0];
        const AggCoord coord = coord_at(spec, traj, t);
        const CornerSet cs = price_corners(lay, coord);
        eval_with_corners(policies.household, cs, ws.actions);
        const double* prices = traj.price_path.data() + static_cast<std::size_t>(t) * np;
        const double z_level = lay.z_grid[traj.z_path[t]];
        const double* d_t = ws.d_path.data() + static_cast<std::size_t>(t - t0) * J;
        const double wage = (np > 1) ? prices[1] : 0.0;

        TransitionLottery lot;
        if (t < t1) {
            implied_bprime(spec, z_level, {prices, static_cast<std::size_t>(np)},
                           hank ? traj.transfer[t] : 0.0, ws.actions, ws.bprime);
            lot = build_lottery(ws.bprime, lay);
        }

        if (grad_hh != nullptr) {
            const double* c = ws.actions.data();
            const double* n = ws.actions.data() + J;
            // per-state gradient of the objective w.r.t. the evaluated actions
            for (int j = 0; j < J; ++j) {
                double slope = 0.0;
                double gc, gn = 0.0;
                if (t < t1 && lot.interior[j]) {
                    const int iy = j % n_y;
                    const int lo = lot.lo[j];
                    auto row = ychain.row(iy);
                    for (int yn = 0; yn < n_y; ++yn)
                        slope += row[yn] * (ws.V[lo * n_y + yn] - ws.V[(lo + 1) * n_y + yn]);
                    slope *= d_t[j] * lot.inv_step[j];
                }
                if (hank) {
                    gc = disc_t * d_t[j] * spec.u_c(c[j]) + slope;
                    gn = disc_t * d_t[j] * spec.u_n(n[j]) -
                         slope * wage * lay.y_grid[lay.y_of(j)];
                } else {
                    gc = disc_t * d_t[j] * spec.u_c(c[j]) + slope;
                }
                ws.util[j] = gc;
                if (hank) ws.scratch[j] = gn;
            }
            for (int cidx = 0; cidx < cs.count; ++cidx) {
                const double wgt = cs.weights[cidx];
                double* dst = grad_hh->data() + policies.household.plane_offset(cs.cells[cidx], 0);
                for (int j = 0; j < J; ++j) dst[j] += wgt * ws.util[j];
                if (hank) {
                    double* dstn =
                        grad_hh->data() + policies.household.plane_offset(cs.cells[cidx], 1);
                    for (int j = 0; j < J; ++j) dstn[j] += wgt * ws.scratch[j];
                }
            }
        }

        // V_t = beta^t u_t + A_t V_{t+1}
        for (int j = 0; j < J; ++j) {
            const double u_j = hank ? spec.utility(ws.actions[j], ws.actions[J + j])
                                    : spec.utility(ws.actions[j]);
            double cont = 0.0;
            if (t < t1) {
                const int iy = j % n_y;
                const int lo = lot.lo[j];
                const double wl = lot.w_lo[j];
                auto row = ychain.row(iy);
                for (int yn = 0; yn < n_y; ++yn)
                    cont += row[yn] * (wl * ws.V[lo * n_y + yn] + (1.0 - wl) * ws.V[(lo + 1) * n_y + yn]);
            }
            ws.V_next[j] = disc_t * u_j + cont;
        }
        ws.V.swap(ws.V_next);
    }

    // firm price-setting tape: discounted-profit derivative w.r.t. the
    // inflation table at the symmetric point, aggregates held fixed
    if (hank && grad_firm != nullptr && policies.firm) {
        const PolicyTable& firm = *policies.firm;
        std::vector<double> D(W);
        D[0] = 1.0;
        for (int t = t0 + 1; t <= t1; ++t) D[t - t0] = D[t - t0 - 1] / traj.real_rate[t];
        const double eps_s = spec.eps_subst;
        double F = 0.0;
        AggCoord fcoord;
        fcoord.prices.resize(1);
        for (int t = t1; t >= t0; --t) {
            const double z_level = lay.z_grid[traj.z_path[t]];
            const double w_t = traj.price_path[static_cast<std::size_t>(t) * np + 1];
            const double mc = w_t / z_level;
            const double Dt = D[t - t0];
            F += Dt * traj.output[t] * (eps_s * mc - (eps_s - 1.0));
            const double g_pi = -Dt * spec.theta * traj.inflation[t] * traj.output[t] +
                                F / (1.0 + traj.inflation[t]);
            fcoord.z_index = traj.z_path[t];
            fcoord.prices[0] = w_t;
            const CornerSet fcs = price_corners(firm.layout, fcoord);
            for (int cidx = 0; cidx < fcs.count; ++cidx)
                (*grad_firm)[firm.plane_offset(fcs.cells[cidx], 0)] += fcs.weights[cidx] * g_pi;
        }
    }

    return value;
}

ObjectiveReport evaluate_objective(const ModelSpec& spec, const PolicyBundle& policies,
                                   const std::vector<Trajectory>& trajectories,
                                   const ObjectiveOptions& opts, int n_workers) {
    if (trajectories.empty())
        throw std::invalid_argument("evaluate_objective: need at least one trajectory");
    const int N = static_cast<int>(trajectories.size());
    const std::size_t hh_size = policies.household.values.size();
    const std::size_t firm_size = policies.firm ? policies.firm->values.size() : 0;

    ObjectiveReport report;
    report.per_trajectory_values.assign(N, 0.0);
    report.gradient.assign(hh_size, 0.0);
    if (firm_size > 0) report.firm_gradient.assign(firm_size, 0.0);
    report.truncation_horizon = trajectories[0].T;

    if (n_workers < 1) n_workers = 1;
    const int used = std::min(n_workers, N);
    std::vector<std::vector<double>> ghh(used), gfirm(used);
    for (int w = 0; w < used; ++w) {
        ghh[w].assign(hh_size, 0.0);
        if (firm_size > 0) gfirm[w].assign(firm_size, 0.0);
    }

    parallel_chunks(N, used, [&](int w, int begin, int end) {
        EngineWorkspace ws;
        for (int i = begin; i < end; ++i) {
            report.per_trajectory_values[i] =
                objective_on_trajectory(spec, policies, trajectories[i], i, opts, &ghh[w],
                                        firm_size > 0 ? &gfirm[w] : nullptr, ws);
        }
    });

    double sum = 0.0;
    for (double v : report.per_trajectory_values) sum += v;
    report.value = sum / N;
    for (int w = 0; w < used; ++w) {
        for (std::size_t i = 0; i < hh_size; ++i) report.gradient[i] += ghh[w][i];
        for (std::size_t i = 0; i < firm_size; ++i) report.firm_gradient[i] += gfirm[w][i];
    }
    const double inv_n = 1.0 / N;
    for (double& v : report.gradient) v *= inv_n;
    for (double& v : report.firm_gradient) v *= inv_n;
    return report;
}

}  // namespace srl
