#include "srl/clearing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace srl {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

SupplySchedule supply_schedule(const PolicyTable& policy, const Histogram& g, int z_index,
                               double z_level, double bond_supply,
                               std::span<const double> lagged_prices) {
    const StateLayout& lay = policy.layout;
    const int J = lay.J();
    if (static_cast<int>(g.mass.size()) != J)
        throw std::invalid_argument("supply_schedule: histogram size mismatch");
    if (lay.n_price_axes() != 1)
        throw std::invalid_argument("supply_schedule: expects a single price axis");

    double wealth = 0.0, income = 0.0;
    for (int j = 0; j < J; ++j) {
        wealth += g.mass[j] * lay.b_grid[lay.b_of(j)];
        income += g.mass[j] * lay.y_grid[lay.y_of(j)];
    }

    SupplySchedule sched;
    sched.z_index = z_index;
    sched.price_grid = lay.price_grids[0];
    sched.values.resize(sched.price_grid.size());
    AggCoord coord;
    coord.z_index = z_index;
    coord.prices.resize(1);
    if (lay.lag_depth == 1) coord.lagged.assign(lagged_prices.begin(), lagged_prices.end());
    for (std::size_t l = 0; l < sched.price_grid.size(); ++l) {
        const double p = sched.price_grid[l];
        coord.prices[0] = p;
        const CornerSet cs = price_corners(lay, coord);
        double consumption = 0.0;
        for (int c = 0; c < cs.count; ++c)
            consumption += cs.weights[c] * dot(g.mass, policy.plane(cs.cells[c], 0));
        // aggregate saving: b' = (1+p) b + y z - c summed against the histogram
        sched.values[l] = (1.0 + p) * wealth + z_level * income - consumption - bond_supply;
    }
    return sched;
}

ClearingOutcome clear_bracket(const SupplySchedule& schedule, double target) {
    const auto& S = schedule.values;
    const auto& P = schedule.price_grid;
    if (S.size() < 2) throw std::invalid_argument("clear_bracket: need at least 2 nodes");
    bool any_finite = false;
    for (double v : S) any_finite = any_finite || std::isfinite(v);
    if (!any_finite) throw std::invalid_argument("clear_bracket: schedule has no finite values");

    ClearingOutcome out;
    for (std::size_t k = 0; k < S.size(); ++k) {
        if (!std::isfinite(S[k])) continue;
        if (S[k] == target) {
            out.price = P[k];
            out.residual = 0.0;
            return out;
        }
        if (k + 1 < S.size() && std::isfinite(S[k + 1]) && S[k] <= target && target <= S[k + 1]) {
            out.price = P[k] + (target - S[k]) * (P[k + 1] - P[k]) / (S[k + 1] - S[k]);
            out.residual = 0.0;
            return out;
        }
    }
    // no ascending bracket: fall back to the grid node closest to the target
    out.clamped = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < S.size(); ++k) {
        if (!std::isfinite(S[k])) continue;
        const double gap = std::abs(S[k] - target);
        if (gap < best) {
            best = gap;
            out.price = P[k];
            out.residual = gap;
        }
    }
    return out;
}

KsPrices ks_price_map(const Histogram& g, std::span<const double> b_grid, double z_level,
                      double alpha, double delta) {
    const int n_y = static_cast<int>(g.mass.size() / b_grid.size());
    double K = 0.0;
    for (std::size_t j = 0; j < g.mass.size(); ++j) K += g.mass[j] * b_grid[j / n_y];
    if (!(K > 0.0)) throw std::invalid_argument("ks_price_map: aggregate capital must be > 0");
    KsPrices out;
    out.capital = K;
    out.rental = alpha * z_level * std::pow(K, alpha - 1.0);
    out.r = out.rental - delta;
    out.w = (1.0 - alpha) * z_level * std::pow(K, alpha);
    return out;
}

HankOutcome hank_clearing(const PolicyTable& policy_hh, const PolicyTable& policy_firm,
                          const Histogram& g, int z_index, int eps_index,
                          double nominal_rate_in, const HankPricingParams& params) {
    if (!(nominal_rate_in > 0.0))
        throw std::invalid_argument("hank_clearing: gross nominal rate must be > 0");
    const StateLayout& lay = policy_hh.layout;
    if (lay.n_price_axes() != 2)
        throw std::invalid_argument("hank_clearing: expects price axes (r, w)");
    const int J = lay.J();
    if (static_cast<int>(g.mass.size()) != J)
        throw std::invalid_argument("hank_clearing: histogram size mismatch");

    const double z = lay.z_grid[z_index];
    const double eps = lay.eps_grid.empty() ? 0.0 : lay.eps_grid[eps_index];
    const auto& wgrid = lay.price_grids[1];
    const double B = params.bond_supply;

    double wealth = 0.0;
    for (int j = 0; j < J; ++j) wealth += g.mass[j] * lay.b_grid[lay.b_of(j)];

    std::vector<double> actions(static_cast<std::size_t>(J) * 2);
    AggCoord firm_coord;
    firm_coord.z_index = z_index;
    firm_coord.prices.resize(1);
    AggCoord hh_coord;
    hh_coord.z_index = z_index;
    hh_coord.eps_index = eps_index;
    hh_coord.prices.resize(2);

    int eval_clamps = 0;
    // evaluates inflation, the implied real rate, and all aggregates at a wage
    auto period_at = [&](double w) {
        firm_coord.prices[0] = w;
        std::array<double, 1> pi_buf{};
        eval_clamps += eval_policy(policy_firm, firm_coord, pi_buf);
        const double pi = pi_buf[0];
        const double R = nominal_rate_in / (1.0 + pi);
        if (!(R > 0.0)) throw std::runtime_error("hank_clearing: non-positive gross real rate");
        const double r = R - 1.0;
        hh_coord.prices[0] = r;
        hh_coord.prices[1] = w;
        eval_clamps += eval_policy(policy_hh, hh_coord, actions);
        const double* c = actions.data();
        const double* n = actions.data() + J;
        double L = 0.0, C = 0.0;
        for (int j = 0; j < J; ++j) {
            const double m = g.mass[j];
            if (m == 0.0) continue;
            L += m * lay.y_grid[lay.y_of(j)] * n[j];
            C += m * c[j];
        }
        const double Y = z * L;
        const double d = (1.0 - w / z) * Y - 0.5 * params.theta * pi * pi * Y;
        const double T = r * B;
        const double demand = R * wealth + w * L + d - T - C;
        struct Point {
            double pi, r, Y, L, d, T, C, demand;
        };
        return Point{pi, r, Y, L, d, T, C, demand};
    };

    SupplySchedule sched;
    sched.z_index = z_index;
    sched.price_grid = wgrid;
    sched.values.resize(wgrid.size());
    for (std::size_t l = 0; l < wgrid.size(); ++l) sched.values[l] = period_at(wgrid[l]).demand - B;

    const ClearingOutcome cleared = clear_bracket(sched, 0.0);
    const auto final_pt = period_at(cleared.price);

    HankOutcome out;
    out.w = cleared.price;
    out.inflation = final_pt.pi;
    out.r = final_pt.r;
    out.output = final_pt.Y;
    out.labor = final_pt.L;
    out.dividend = final_pt.d;
    out.tax = final_pt.T;
    out.consumption = final_pt.C;
    out.bond_demand = final_pt.demand;
    out.residual = std::abs(final_pt.demand - B);
    out.clamped = cleared.clamped;
    out.eval_clamps = eval_clamps;
    out.nominal_next = params.rbar_gross * std::pow(1.0 + final_pt.pi, params.phi) * std::exp(eps);
    return out;
}

}  // namespace srl
