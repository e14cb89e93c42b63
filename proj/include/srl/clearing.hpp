#pragma once

#include <span>
#include <vector>

#include "srl/policy.hpp"
#include "srl/transition.hpp"

namespace srl {

// Aggregate net supply evaluated on the candidate price grid for one
// aggregate state: S(p_k) = b'(z, p_k) . g - target supply.
struct SupplySchedule {
    std::vector<double> price_grid;
    std::vector<double> values;
    int z_index = 0;
};

struct ClearingOutcome {
    double price = 0.0;
    double residual = 0.0;  // |S(price) - target| after interpolation
    bool clamped = false;   // no bracket existed; price is the best grid node
};

// Saving schedule for the Huggett economy: one dot product per price node
// between the histogram and the implied b' column, net of bond supply.
// fixed_* pin the other policy coordinates (none for the one-price model).
SupplySchedule supply_schedule(const PolicyTable& policy, const Histogram& g, int z_index,
                               double z_level, double bond_supply,
                               std::span<const double> lagged_prices = {});

// Finds the first adjacent pair with S(p_k) <= target <= S(p_{k+1}) scanning
// upward and returns the linear interpolant; with no bracket, returns the
// grid node minimizing |S - target| flagged as clamped.
ClearingOutcome clear_bracket(const SupplySchedule& schedule, double target);

struct KsPrices {
    double r = 0.0;       // net return on capital, r^K - delta
    double rental = 0.0;  // r^K
    double w = 0.0;
    double capital = 0.0;
};

// Marginal-product prices for the Krusell-Smith economy with L = 1:
// r^K = alpha z K^(alpha-1), w = (1-alpha) z K^alpha, K = g . b.
KsPrices ks_price_map(const Histogram& g, std::span<const double> b_grid, double z_level,
                      double alpha, double delta);

struct HankPricingParams {
    double theta = 100.0;      // price adjustment cost
    double eps_subst = 10.0;   // elasticity of substitution
    double phi = 1.5;          // Taylor coefficient
    double rbar_gross = 1.025; // gross rate target
    double bond_supply = 5.0;
};

struct HankOutcome {
    double r = 0.0;
    double w = 0.0;
    double inflation = 0.0;
    double output = 0.0;
    double labor = 0.0;        // effective labor, g . (y n)
    double dividend = 0.0;
    double tax = 0.0;
    double nominal_next = 0.0; // 1 + i_{t+1} from the Taylor rule
    double consumption = 0.0;
    double bond_demand = 0.0;  // recomputed at the cleared wage
    double residual = 0.0;     // |bond demand - B|
    bool clamped = false;
    int eval_clamps = 0;
};

// One-period HANK clearing: scans the wage grid, gets inflation from the firm
// policy, the real rate from the Fisher equation, aggregates household bond
// demand, and bracket-interpolates the wage so that demand meets the fixed
// supply. Also returns the implied aggregates and next-period nominal rate.
HankOutcome hank_clearing(const PolicyTable& policy_hh, const PolicyTable& policy_firm,
                          const Histogram& g, int z_index, int eps_index,
                          double nominal_rate_in, const HankPricingParams& params);

}  // namespace srl
