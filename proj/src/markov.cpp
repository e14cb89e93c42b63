#include "srl/markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "srl/rng.hpp"

namespace srl {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void check_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

// Fills one row with interval masses of a normal with the given mean/sd over
// the bins implied by a uniform grid with spacing step. sd == 0 degenerates
// to point mass at the nearest node.
void normal_row(std::span<const double> grid, double mean, double sd, double step, double* out) {
    const int n = static_cast<int>(grid.size());
    if (sd <= 0.0) {
        std::fill(out, out + n, 0.0);
        int nearest = 0;
        double best = std::abs(grid[0] - mean);
        for (int j = 1; j < n; ++j) {
            const double d = std::abs(grid[j] - mean);
            if (d < best) { best = d; nearest = j; }
        }
        out[nearest] = 1.0;
        return;
    }
    for (int j = 0; j < n; ++j) {
        if (j == 0) {
            out[j] = norm_cdf((grid[0] + 0.5 * step - mean) / sd);
        } else if (j == n - 1) {
            out[j] = 1.0 - norm_cdf((grid[n - 1] - 0.5 * step - mean) / sd);
        } else {
            out[j] = norm_cdf((grid[j] + 0.5 * step - mean) / sd) -
                     norm_cdf((grid[j] - 0.5 * step - mean) / sd);
        }
    }
    // nudge the largest entry so the row sums to 1 at machine precision
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += out[j];
    int amax = 0;
    for (int j = 1; j < n; ++j)
        if (out[j] > out[amax]) amax = j;
    out[amax] += 1.0 - sum;
}

}  // namespace

double MarkovChain::max_row_sum_error() const {
    double worst = 0.0;
    for (int i = 0; i < n(); ++i) {
        double s = 0.0;
        for (double p : row(i)) s += p;
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

std::vector<double> MarkovChain::stationary(double tol, int max_iter) const {
    const int m = n();
    std::vector<double> pi(m, 1.0 / m), next(m);
    for (int it = 0; it < max_iter; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < m; ++i) {
            const double w = pi[i];
            auto r = row(i);
            for (int j = 0; j < m; ++j) next[j] += w * r[j];
        }
        double diff = 0.0;
        for (int j = 0; j < m; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
        pi.swap(next);
        if (diff < tol) break;
    }
    return pi;
}

MarkovChain tauchen(const Ar1Params& params, int n, double span) {
    if (n < 2) throw std::invalid_argument("tauchen: grid size must be >= 2");
    check_finite(params.rho, "rho");
    check_finite(params.nu, "nu");
    check_finite(params.mean, "mean");
    if (std::abs(params.rho) >= 1.0) throw std::invalid_argument("tauchen: |rho| must be < 1");
    if (params.nu < 0.0) throw std::invalid_argument("tauchen: nu must be >= 0");
    if (!(span > 0.0)) throw std::invalid_argument("tauchen: span must be > 0");

    const double sigma_uncond = params.nu / std::sqrt(1.0 - params.rho * params.rho);
    MarkovChain chain;
    chain.grid.resize(n);
    const double lo = params.mean - span * sigma_uncond;
    const double hi = params.mean + span * sigma_uncond;
    const double step = (n > 1) ? (hi - lo) / (n - 1) : 0.0;
    for (int i = 0; i < n; ++i) chain.grid[i] = lo + step * i;
    chain.grid[n - 1] = hi;

    chain.transition.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double mean_i = (1.0 - params.rho) * params.mean + params.rho * chain.grid[i];
        normal_row(chain.grid, mean_i, params.nu, step, chain.transition.data() + static_cast<std::size_t>(i) * n);
    }
    return chain;
}

MarkovChain discretize_sqrt_process(const SqrtProcessParams& params, int n, double span) {
    if (n < 2) throw std::invalid_argument("discretize_sqrt_process: grid size must be >= 2");
    check_finite(params.mean_level, "mean_level");
    check_finite(params.rho_r, "rho_r");
    check_finite(params.nu_r, "nu_r");
    if (!(params.mean_level > 0.0))
        throw std::invalid_argument("discretize_sqrt_process: mean_level must be > 0");
    if (std::abs(params.rho_r) >= 1.0)
        throw std::invalid_argument("discretize_sqrt_process: |rho_r| must be < 1");
    if (params.nu_r < 0.0)
        throw std::invalid_argument("discretize_sqrt_process: nu_r must be >= 0");

    // stationary sd of the linearized process around the long-run mean
    const double sigma_stat =
        params.nu_r * std::sqrt(params.mean_level) / std::sqrt(1.0 - params.rho_r * params.rho_r);
    // zero volatility still needs a positive band for the grid
    const double width = sigma_stat > 0.0 ? span * sigma_stat : 0.1 * span * params.mean_level;
    const double lo = params.mean_level - width;
    const double hi = params.mean_level + width;
    if (!(lo > 0.0))
        throw std::invalid_argument(
            "discretize_sqrt_process: parameters imply non-positive grid support");

    MarkovChain chain;
    chain.grid.resize(n);
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) chain.grid[i] = lo + step * i;
    chain.grid[n - 1] = hi;

    chain.transition.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double r = chain.grid[i];
        const double mean_i = (1.0 - params.rho_r) * params.mean_level + params.rho_r * r;
        const double sd_i = params.nu_r * std::sqrt(std::max(r, 0.0));
        normal_row(chain.grid, mean_i, sd_i, step, chain.transition.data() + static_cast<std::size_t>(i) * n);
    }
    return chain;
}

std::vector<int> simulate_chain(const MarkovChain& chain, int t0_index, int horizon,
                                std::uint64_t rng_seed) {
    if (t0_index < 0 || t0_index >= chain.n())
        throw std::invalid_argument("simulate_chain: t0_index out of range");
    if (horizon < 1) throw std::invalid_argument("simulate_chain: horizon must be >= 1");

    std::vector<int> path(horizon + 1);
    path[0] = t0_index;
    Rng rng(rng_seed);
    for (int t = 0; t < horizon; ++t) path[t + 1] = rng.draw_discrete(chain.row(path[t]));
    return path;
}

MarkovChain exp_grid(const MarkovChain& chain) {
    MarkovChain out = chain;
    for (double& g : out.grid) g = std::exp(g);
    return out;
}

MarkovChain singleton_chain(double value) {
    MarkovChain c;
    c.grid = {value};
    c.transition = {1.0};
    return c;
}

}  // namespace srl
