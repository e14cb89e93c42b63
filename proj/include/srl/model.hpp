#pragma once

#include <optional>
#include <string>

#include "srl/clearing.hpp"
#include "srl/layout.hpp"
#include "srl/markov.hpp"
#include "srl/policy.hpp"
#include "srl/transition.hpp"

namespace srl {

enum class ModelKind { HuggettGE, HuggettPE, KrusellSmith, Hank };

struct HuggettParams {
    double beta = 0.96;
    double sigma = 2.0;
    double rho_y = 0.6;
    double nu_y = 0.2;
    double rho_z = 0.9;
    double nu_z = 0.02;
    double bond_supply = 0.0;
    double borrow_limit = -1.0;
    // partial-equilibrium interest-rate process
    double rbar = 0.038;
    double rho_r = 0.8;
    double nu_r = 0.02;
};

struct KsParams {
    double beta = 0.95;
    double sigma = 3.0;
    double alpha = 0.36;
    double delta = 0.08;
    double rho_y = 0.6;
    double nu_y = 0.2;
    double rho_z = 0.9;
    double nu_z = 0.03;
    double borrow_limit = 0.0;
};

struct HankParams {
    double beta = 0.975;
    double sigma = 1.0;  // log utility
    double eta = 1.0;    // inverse Frisch elasticity
    double phi = 1.5;
    double theta = 100.0;
    double eps_subst = 10.0;
    double rbar_gross = 1.025;
    double bond_supply = 5.0;
    double rho_y = 0.6;
    double nu_y = 0.2;
    double rho_z = 0.9;
    double nu_z = 0.07;
    double rho_eps = 0.9;
    double nu_eps = 0.002;
};

// Grid sizes and bounds; zero-initialized fields fall back to the per-model
// defaults applied by the spec constructors.
struct GridConfig {
    int n_b = 0;
    double b_max = 0.0;
    int n_y = 0;
    int n_z = 0;
    int n_eps = 0;
    int n_r = 0;
    double r_min = 0.0, r_max = 0.0;
    int n_w = 0;
    double w_min = 0.0, w_max = 0.0;
    double span_y = 3.0, span_z = 3.0, span_eps = 3.0, span_r = 3.0;
    int lag_depth = 0;
    bool exp_spacing = false;
    double exp_curvature = 2.0;
};

// A concrete economy: preferences, budget structure, exogenous chains, the
// policy state layout, and the market-clearing block. Immutable once built.
struct ModelSpec {
    ModelKind kind = ModelKind::HuggettGE;
    std::string name;

    double beta = 0.96;
    double sigma = 2.0;
    double eta = 0.0;       // labor disutility curvature (HANK)
    double c_min = 1e-3;
    double n_min = 1e-3;

    StateLayout layout;
    StateLayout firm_layout;  // HANK only

    MarkovChain y_chain;      // income levels = layout.y_grid
    MarkovChain z_chain;      // indices into layout.z_grid
    MarkovChain eps_chain;    // HANK monetary shock (levels = layout.eps_grid)
    MarkovChain pe_r_chain;   // HuggettPE exogenous rate (grid = price axis 0)

    double bond_supply = 0.0;
    double borrow_limit = 0.0;
    double initial_wealth = 0.0;  // seeds the warm-up histogram

    // Krusell-Smith production block
    double alpha = 0.0;
    double delta = 0.0;

    // HANK blocks
    double phi = 0.0;
    double theta = 0.0;
    double eps_subst = 0.0;
    double rbar_gross = 0.0;
    double ref_transfer = 0.0;  // steady-state d - T used by guesses/projection

    bool has_firm() const { return kind == ModelKind::Hank; }
    bool has_labor_choice() const { return kind == ModelKind::Hank; }
    int n_prices() const { return static_cast<int>(layout.price_grids.size()); }

    double utility(double c) const;
    double utility(double c, double n) const;
    double u_c(double c) const;
    double u_n(double n) const;

    HankPricingParams hank_pricing() const {
        return {theta, eps_subst, phi, rbar_gross, bond_supply};
    }

    // Histogram with all mass at initial_wealth (split between the two
    // bracketing wealth nodes) times the stationary income distribution.
    Histogram initial_histogram() const;
};

struct PolicyBundle {
    PolicyTable household;
    std::optional<PolicyTable> firm;
};

ModelSpec huggett_ge_spec(const HuggettParams& params = {}, const GridConfig& grids = {});
ModelSpec huggett_pe_spec(const HuggettParams& params = {}, const GridConfig& grids = {});
ModelSpec ks_spec(const KsParams& params = {}, const GridConfig& grids = {});
ModelSpec hank_spec(const HankParams& params = {}, const GridConfig& grids = {});

// Closed-form permanent-income guess for Huggett-style economies; requires a
// strictly positive rate grid. sigma0 < sigma softens the curvature.
PolicyTable initial_guess_huggett(const ModelSpec& spec, std::optional<double> sigma0 = {});

// Constant-rule guesses: consumption = share of cash on hand (floored at
// c_min), constant labor, constant inflation for the firm table.
PolicyBundle constant_guess(const ModelSpec& spec, double consumption_share, double labor_level,
                            double inflation_level);

// Clamps every stored action into its feasible box (c in [c_min, cash - b_low],
// labor >= n_min). Idempotent.
void project_feasible(const ModelSpec& spec, PolicyTable& household);
void project_firm(const ModelSpec& spec, PolicyTable& firm);
void project_bundle(const ModelSpec& spec, PolicyBundle& bundle);

// Per-node cash on hand before subtracting consumption, at the node's own
// aggregate coordinates (HANK uses the reference transfer and the node's own
// labor entry).
double node_resources(const ModelSpec& spec, int j, long cell, const PolicyTable& household);

}  // namespace srl
