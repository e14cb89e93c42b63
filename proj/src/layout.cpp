#include "srl/layout.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace srl {

namespace {

void check_increasing(const std::vector<double>& g, const char* name) {
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        if (!(g[i] < g[i + 1]))
            throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
}

}  // namespace

void StateLayout::validate() const {
    // degenerate 1x1 individual state is allowed for representative-agent
    // tables (the firm block); household layouts need a real wealth grid
    if (n_b() < 2 && !(n_b() == 1 && n_y() == 1))
        throw std::invalid_argument("layout: need at least 2 wealth nodes");
    if (n_y() < 1) throw std::invalid_argument("layout: need at least 1 income state");
    if (n_z() < 1) throw std::invalid_argument("layout: need at least 1 aggregate state");
    if (lag_depth != 0 && lag_depth != 1)
        throw std::invalid_argument("layout: lag_depth must be 0 or 1");
    check_increasing(b_grid, "b");
    check_increasing(y_grid, "y");
    check_increasing(z_grid, "z");
    if (!eps_grid.empty()) check_increasing(eps_grid, "eps");
    for (const auto& pg : price_grids) {
        if (pg.size() < 2) throw std::invalid_argument("layout: price grids need >= 2 nodes");
        check_increasing(pg, "price");
    }
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
    if (n < 2) throw std::invalid_argument("uniform_grid: n must be >= 2");
    if (!(lo < hi)) throw std::invalid_argument("uniform_grid: lo must be < hi");
    std::vector<double> g(n);
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo + step * i;
    g[n - 1] = hi;
    return g;
}

std::vector<double> exp_spaced_grid(double lo, double hi, int n, double curvature) {
    if (n < 2) throw std::invalid_argument("exp_spaced_grid: n must be >= 2");
    if (!(lo < hi)) throw std::invalid_argument("exp_spaced_grid: lo must be < hi");
    if (!(curvature > 0.0)) throw std::invalid_argument("exp_spaced_grid: curvature must be > 0");
    std::vector<double> g(n);
    const double denom = std::expm1(curvature);
    for (int i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / (n - 1);
        g[i] = lo + (hi - lo) * std::expm1(curvature * s) / denom;
    }
    g[0] = lo;
    g[n - 1] = hi;
    return g;
}

}  // namespace srl
