#include "srl/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace srl {

namespace {

std::vector<double> wealth_grid(double lo, double hi, int n, const GridConfig& g) {
    return g.exp_spacing ? exp_spaced_grid(lo, hi, n, g.exp_curvature) : uniform_grid(lo, hi, n);
}

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double ModelSpec::utility(double c) const {
    if (sigma == 1.0) return std::log(c);
    return std::pow(c, 1.0 - sigma) / (1.0 - sigma);
}

double ModelSpec::utility(double c, double n) const {
    return utility(c) - std::pow(n, 1.0 + eta) / (1.0 + eta);
}

double ModelSpec::u_c(double c) const {
    if (sigma == 1.0) return 1.0 / c;
    return std::pow(c, -sigma);
}

double ModelSpec::u_n(double n) const { return -std::pow(n, eta); }

Histogram ModelSpec::initial_histogram() const {
    Histogram g;
    g.mass.assign(layout.J(), 0.0);
    const Bracket br = bracket_on_grid(layout.b_grid, initial_wealth);
    const std::vector<double> ydist = y_chain.stationary();
    for (int iy = 0; iy < layout.n_y(); ++iy) {
        g.mass[br.lo * layout.n_y() + iy] += br.w_lo * ydist[iy];
        g.mass[(br.lo + 1) * layout.n_y() + iy] += (1.0 - br.w_lo) * ydist[iy];
    }
    return g;
}

ModelSpec huggett_ge_spec(const HuggettParams& p, const GridConfig& grids) {
    GridConfig g = grids;
    if (g.n_b == 0) g.n_b = 200;
    if (g.b_max == 0.0) g.b_max = 50.0;
    if (g.n_y == 0) g.n_y = 3;
    if (g.n_r == 0) g.n_r = 20;
    if (g.r_min == 0.0 && g.r_max == 0.0) { g.r_min = 0.01; g.r_max = 0.06; }
    if (g.n_z == 0) g.n_z = 30;
    require(g.n_b >= 2, "huggett_ge_spec: n_b must be >= 2");
    require(g.r_min > 0.0, "huggett_ge_spec: rate grid must be strictly positive");

    ModelSpec spec;
    spec.kind = ModelKind::HuggettGE;
    spec.name = "huggett-ge";
    spec.beta = p.beta;
    spec.sigma = p.sigma;
    spec.bond_supply = p.bond_supply;
    spec.borrow_limit = p.borrow_limit;
    spec.initial_wealth = p.bond_supply;

    spec.y_chain = exp_grid(tauchen({p.rho_y, p.nu_y, 0.0}, g.n_y, g.span_y));
    spec.z_chain = exp_grid(tauchen({p.rho_z, p.nu_z, 0.0}, g.n_z, g.span_z));

    spec.layout.b_grid = wealth_grid(p.borrow_limit, g.b_max, g.n_b, g);
    spec.layout.y_grid = spec.y_chain.grid;
    spec.layout.z_grid = spec.z_chain.grid;
    spec.layout.price_grids = {uniform_grid(g.r_min, g.r_max, g.n_r)};
    spec.layout.lag_depth = g.lag_depth;
    spec.layout.validate();
    return spec;
}

ModelSpec huggett_pe_spec(const HuggettParams& p, const GridConfig& grids) {
    GridConfig g = grids;
    if (g.n_b == 0) g.n_b = 200;
    if (g.b_max == 0.0) g.b_max = 50.0;
    if (g.n_y == 0) g.n_y = 3;
    if (g.n_r == 0) g.n_r = 20;
    require(g.n_b >= 2, "huggett_pe_spec: n_b must be >= 2");

    ModelSpec spec;
    spec.kind = ModelKind::HuggettPE;
    spec.name = "huggett-pe";
    spec.beta = p.beta;
    spec.sigma = p.sigma;
    spec.bond_supply = p.bond_supply;
    spec.borrow_limit = p.borrow_limit;
    spec.initial_wealth = p.bond_supply;

    spec.y_chain = exp_grid(tauchen({p.rho_y, p.nu_y, 0.0}, g.n_y, g.span_y));
    spec.z_chain = singleton_chain(1.0);
    spec.pe_r_chain = discretize_sqrt_process({p.rbar, p.rho_r, p.nu_r}, g.n_r, g.span_r);

    spec.layout.b_grid = wealth_grid(p.borrow_limit, g.b_max, g.n_b, g);
    spec.layout.y_grid = spec.y_chain.grid;
    spec.layout.z_grid = spec.z_chain.grid;
    spec.layout.price_grids = {spec.pe_r_chain.grid};
    spec.layout.lag_depth = g.lag_depth;
    spec.layout.validate();
    return spec;
}

ModelSpec ks_spec(const KsParams& p, const GridConfig& grids) {
    GridConfig g = grids;
    if (g.n_b == 0) g.n_b = 200;
    if (g.b_max == 0.0) g.b_max = 100.0;
    if (g.n_y == 0) g.n_y = 3;
    if (g.n_r == 0) g.n_r = 30;
    if (g.r_min == 0.0 && g.r_max == 0.0) { g.r_min = 0.02; g.r_max = 0.07; }
    if (g.n_w == 0) g.n_w = 50;
    if (g.w_min == 0.0 && g.w_max == 0.0) { g.w_min = 0.9; g.w_max = 1.5; }
    if (g.n_z == 0) g.n_z = 7;
    require(g.n_b >= 2, "ks_spec: n_b must be >= 2");
    require(p.borrow_limit >= 0.0, "ks_spec: capital holdings cannot be negative");

    ModelSpec spec;
    spec.kind = ModelKind::KrusellSmith;
    spec.name = "ks";
    spec.beta = p.beta;
    spec.sigma = p.sigma;
    spec.alpha = p.alpha;
    spec.delta = p.delta;
    spec.borrow_limit = p.borrow_limit;
    // steady-state capital of the deterministic economy seeds the histogram
    const double r_ss = 1.0 / p.beta - 1.0;
    spec.initial_wealth = std::pow(p.alpha / (r_ss + p.delta), 1.0 / (1.0 - p.alpha));

    spec.y_chain = exp_grid(tauchen({p.rho_y, p.nu_y, 0.0}, g.n_y, g.span_y));
    spec.z_chain = exp_grid(tauchen({p.rho_z, p.nu_z, 0.0}, g.n_z, g.span_z));

    spec.layout.b_grid = wealth_grid(p.borrow_limit, g.b_max, g.n_b, g);
    spec.layout.y_grid = spec.y_chain.grid;
    spec.layout.z_grid = spec.z_chain.grid;
    spec.layout.price_grids = {uniform_grid(g.r_min, g.r_max, g.n_r),
                               uniform_grid(g.w_min, g.w_max, g.n_w)};
    spec.layout.lag_depth = g.lag_depth;
    spec.layout.validate();
    return spec;
}

ModelSpec hank_spec(const HankParams& p, const GridConfig& grids) {
    GridConfig g = grids;
    if (g.n_b == 0) g.n_b = 200;
    if (g.b_max == 0.0) g.b_max = 100.0;
    if (g.n_y == 0) g.n_y = 3;
    if (g.n_r == 0) g.n_r = 30;
    if (g.r_min == 0.0 && g.r_max == 0.0) { g.r_min = 0.01; g.r_max = 0.04; }
    if (g.n_w == 0) g.n_w = 30;
    if (g.w_min == 0.0 && g.w_max == 0.0) { g.w_min = 0.7; g.w_max = 1.0; }
    if (g.n_z == 0) g.n_z = 50;
    if (g.n_eps == 0) g.n_eps = 50;
    require(g.n_b >= 2, "hank_spec: n_b must be >= 2");
    require(p.phi > 1.0, "hank_spec: Taylor coefficient must exceed 1");
    require(p.eps_subst > 1.0, "hank_spec: elasticity of substitution must exceed 1");
    require(p.theta > 0.0, "hank_spec: price adjustment cost must be positive");

    ModelSpec spec;
    spec.kind = ModelKind::Hank;
    spec.name = "hank";
    spec.beta = p.beta;
    spec.sigma = p.sigma;
    spec.eta = p.eta;
    spec.phi = p.phi;
    spec.theta = p.theta;
    spec.eps_subst = p.eps_subst;
    spec.rbar_gross = p.rbar_gross;
    spec.bond_supply = p.bond_supply;
    spec.borrow_limit = 0.0;
    spec.initial_wealth = p.bond_supply;
    // zero-inflation reference: d0 = (1 - (eps-1)/eps) Y0 with Y0 = 1, T0 = (Rbar-1) B
    spec.ref_transfer = 1.0 / p.eps_subst - (p.rbar_gross - 1.0) * p.bond_supply;

    spec.y_chain = exp_grid(tauchen({p.rho_y, p.nu_y, 0.0}, g.n_y, g.span_y));
    spec.z_chain = exp_grid(tauchen({p.rho_z, p.nu_z, 0.0}, g.n_z, g.span_z));
    spec.eps_chain = tauchen({p.rho_eps, p.nu_eps, 0.0}, g.n_eps, g.span_eps);

    spec.layout.b_grid = wealth_grid(0.0, g.b_max, g.n_b, g);
    spec.layout.y_grid = spec.y_chain.grid;
    spec.layout.z_grid = spec.z_chain.grid;
    spec.layout.eps_grid = spec.eps_chain.grid;
    spec.layout.price_grids = {uniform_grid(g.r_min, g.r_max, g.n_r),
                               uniform_grid(g.w_min, g.w_max, g.n_w)};
    spec.layout.lag_depth = g.lag_depth;
    spec.layout.validate();

    spec.firm_layout.b_grid = {0.0};
    spec.firm_layout.y_grid = {1.0};
    spec.firm_layout.z_grid = spec.layout.z_grid;
    spec.firm_layout.price_grids = {spec.layout.price_grids[1]};
    spec.firm_layout.validate();
    return spec;
}

double node_resources(const ModelSpec& spec, int j, long cell, const PolicyTable& household) {
    const StateLayout& lay = spec.layout;
    int iz = 0, ieps = 0, nodes[8] = {};
    lay.decode_cell(cell, iz, ieps, nodes);
    const double b = lay.b_grid[lay.b_of(j)];
    const double y = lay.y_grid[lay.y_of(j)];
    const double z = lay.z_grid[iz];
    const double r = lay.price_grids[0][nodes[0]];
    switch (spec.kind) {
        case ModelKind::HuggettGE:
        case ModelKind::HuggettPE:
            return (1.0 + r) * b + y * z;
        case ModelKind::KrusellSmith: {
            const double w = lay.price_grids[1][nodes[1]];
            return (1.0 + r) * b + w * y;
        }
        case ModelKind::Hank: {
            const double w = lay.price_grids[1][nodes[1]];
            const double n = household.plane(cell, 1)[j];
            return (1.0 + r) * b + w * y * n + spec.ref_transfer;
        }
    }
    return 0.0;
}

PolicyTable initial_guess_huggett(const ModelSpec& spec, std::optional<double> sigma0) {
    if (spec.kind != ModelKind::HuggettGE && spec.kind != ModelKind::HuggettPE)
        throw std::invalid_argument("initial_guess_huggett: requires a Huggett-style economy");
    const StateLayout& lay = spec.layout;
    for (double r : lay.price_grids[0])
        if (!(r > 0.0))
            throw std::invalid_argument("initial_guess_huggett: rate grid must be strictly positive");
    const double sig = sigma0.value_or(spec.sigma);
    require(sig > 0.0, "initial_guess_huggett: sigma must be positive");
    require(spec.beta > 0.0 && spec.beta < 1.0, "initial_guess_huggett: beta must be in (0,1)");

    PolicyTable table = PolicyTable::zeros(lay, 1);
    const int J = lay.J();
    int nodes[8] = {};
    for (long cell = 0; cell < lay.n_cells(); ++cell) {
        int iz = 0, ieps = 0;
        lay.decode_cell(cell, iz, ieps, nodes);
        const double z = lay.z_grid[iz];
        const double r = lay.price_grids[0][nodes[0]];
        const double kappa = std::pow(spec.beta * (1.0 + r), 1.0 / sig);
        auto col = table.plane(cell, 0);
        for (int j = 0; j < J; ++j) {
            const double b = lay.b_grid[lay.b_of(j)];
            const double y = lay.y_grid[lay.y_of(j)];
            // optimal rule if (y, z, r) were frozen forever
            col[j] = (1.0 + r - kappa) * (b + y * z / r);
        }
    }
    project_feasible(spec, table);
    return table;
}

PolicyBundle constant_guess(const ModelSpec& spec, double consumption_share, double labor_level,
                            double inflation_level) {
    require(consumption_share > 0.0 && consumption_share <= 1.0,
            "constant_guess: consumption share must be in (0,1]");
    PolicyBundle bundle;
    bundle.household = PolicyTable::zeros(spec.layout, spec.has_labor_choice() ? 2 : 1);
    if (spec.has_labor_choice()) {
        for (long cell = 0; cell < spec.layout.n_cells(); ++cell) {
            auto n_col = bundle.household.plane(cell, 1);
            std::fill(n_col.begin(), n_col.end(), labor_level);
        }
    }
    const int J = spec.layout.J();
    for (long cell = 0; cell < spec.layout.n_cells(); ++cell) {
        auto c_col = bundle.household.plane(cell, 0);
        for (int j = 0; j < J; ++j) {
            const double cash = node_resources(spec, j, cell, bundle.household);
            c_col[j] = std::max(spec.c_min, consumption_share * cash);
        }
    }
    project_feasible(spec, bundle.household);
    if (spec.has_firm()) {
        PolicyTable firm = PolicyTable::zeros(spec.firm_layout, 1);
        std::fill(firm.values.begin(), firm.values.end(), inflation_level);
        project_firm(spec, firm);
        bundle.firm = std::move(firm);
    }
    return bundle;
}

void project_feasible(const ModelSpec& spec, PolicyTable& household) {
    const StateLayout& lay = spec.layout;
    const int J = lay.J();
    int nodes[8] = {};
    for (long cell = 0; cell < lay.n_cells(); ++cell) {
        int iz = 0, ieps = 0;
        lay.decode_cell(cell, iz, ieps, nodes);
        auto c_col = household.plane(cell, 0);
        if (spec.has_labor_choice()) {
            const double r = lay.price_grids[0][nodes[0]];
            const double w = lay.price_grids[1][nodes[1]];
            auto n_col = household.plane(cell, 1);
            for (int j = 0; j < J; ++j) {
                const double b = lay.b_grid[lay.b_of(j)];
                const double y = lay.y_grid[lay.y_of(j)];
                // labor floor keeps the consumption box nonempty
                const double base = (1.0 + r) * b + spec.ref_transfer;
                const double n_feas =
                    (spec.c_min + spec.borrow_limit - base) / std::max(w * y, 1e-12);
                n_col[j] = std::max({n_col[j], spec.n_min, n_feas});
                const double cash = base + w * y * n_col[j];
                const double ub = std::max(spec.c_min, cash - spec.borrow_limit);
                c_col[j] = std::clamp(c_col[j], spec.c_min, ub);
            }
        } else {
            for (int j = 0; j < J; ++j) {
                const double cash = node_resources(spec, j, cell, household);
                const double ub = std::max(spec.c_min, cash - spec.borrow_limit);
                c_col[j] = std::clamp(c_col[j], spec.c_min, ub);
            }
        }
    }
}

void project_firm(const ModelSpec& spec, PolicyTable& firm) {
    (void)spec;
    // keep gross inflation well away from -1 so the Taylor rule and Fisher
    // equation stay defined for any interim table
    for (double& v : firm.values) v = std::clamp(v, -0.5, 1.0);
}

void project_bundle(const ModelSpec& spec, PolicyBundle& bundle) {
    project_feasible(spec, bundle.household);
    if (bundle.firm) project_firm(spec, *bundle.firm);
}

}  // namespace srl
