#pragma once

#include <cstddef>
#include <vector>

namespace srl {

// Discretized state space: individual (b, y) grid, exogenous aggregate axes
// (z and optionally a second shock), and one strictly increasing grid per
// continuous price coordinate. With lag_depth == 1 the price grids are
// duplicated as additional lagged-price axes.
struct StateLayout {
    std::vector<double> b_grid;
    std::vector<double> y_grid;
    std::vector<double> z_grid;
    std::vector<double> eps_grid;                  // empty unless a second shock exists
    std::vector<std::vector<double>> price_grids;  // current-price axes
    int lag_depth = 0;                             // 0 or 1

    int n_b() const { return static_cast<int>(b_grid.size()); }
    int n_y() const { return static_cast<int>(y_grid.size()); }
    int n_z() const { return static_cast<int>(z_grid.size()); }
    int n_eps() const { return eps_grid.empty() ? 1 : static_cast<int>(eps_grid.size()); }

    // individual grid size; state j = ib * n_y + iy
    int J() const { return n_b() * n_y(); }
    int b_of(int j) const { return j / n_y(); }
    int y_of(int j) const { return j % n_y(); }

    int n_price_axes() const { return static_cast<int>(price_grids.size()); }
    // continuous axes: current prices followed by lagged copies
    int n_cont_axes() const { return n_price_axes() * (1 + lag_depth); }
    const std::vector<double>& cont_axis(int a) const {
        return price_grids[static_cast<std::size_t>(a) % price_grids.size()];
    }

    long n_exo_cells() const { return static_cast<long>(n_z()) * n_eps(); }
    long n_price_cells() const {
        long p = 1;
        for (int a = 0; a < n_cont_axes(); ++a) p *= static_cast<long>(cont_axis(a).size());
        return p;
    }
    long n_cells() const { return n_exo_cells() * n_price_cells(); }

    // flat aggregate-cell index from exogenous indices and per-axis brackets
    long cell_index(int iz, int ieps, const int* axis_nodes) const {
        long c = static_cast<long>(iz) * n_eps() + ieps;
        for (int a = 0; a < n_cont_axes(); ++a)
            c = c * static_cast<long>(cont_axis(a).size()) + axis_nodes[a];
        return c;
    }

    // inverse of cell_index; axis_nodes must hold n_cont_axes() slots
    void decode_cell(long cell, int& iz, int& ieps, int* axis_nodes) const {
        for (int a = n_cont_axes() - 1; a >= 0; --a) {
            const long sz = static_cast<long>(cont_axis(a).size());
            axis_nodes[a] = static_cast<int>(cell % sz);
            cell /= sz;
        }
        ieps = static_cast<int>(cell % n_eps());
        iz = static_cast<int>(cell / n_eps());
    }

    void validate() const;  // throws on malformed grids
};

// Uniform grid on [lo, hi] with n nodes.
std::vector<double> uniform_grid(double lo, double hi, int n);

// Grid on [lo, hi] with nodes concentrated toward lo (exponential spacing).
std::vector<double> exp_spaced_grid(double lo, double hi, int n, double curvature = 2.0);

}  // namespace srl
