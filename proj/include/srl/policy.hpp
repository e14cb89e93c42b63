#pragma once

#include <span>
#include <vector>

#include "srl/layout.hpp"

namespace srl {

// Aggregate coordinate at which a policy is evaluated: exact exogenous
// indices plus continuous price values (and lagged prices when the layout
// carries a lag axis).
struct AggCoord {
    int z_index = 0;
    int eps_index = 0;
    std::vector<double> prices;
    std::vector<double> lagged;
};

// Tabular policy: one value per (individual state, aggregate cell, action).
// Storage is [cell][action][J] with the individual state contiguous, so a
// policy column for a fixed aggregate cell is a dense span.
struct PolicyTable {
    StateLayout layout;
    int action_dim = 1;
    std::vector<double> values;

    static PolicyTable zeros(const StateLayout& layout, int action_dim);

    std::size_t plane_offset(long cell, int action) const {
        return (static_cast<std::size_t>(cell) * action_dim + action) * layout.J();
    }
    std::span<double> plane(long cell, int action) {
        return {values.data() + plane_offset(cell, action), static_cast<std::size_t>(layout.J())};
    }
    std::span<const double> plane(long cell, int action) const {
        return {values.data() + plane_offset(cell, action), static_cast<std::size_t>(layout.J())};
    }
};

// Multilinear interpolation stencil over the continuous axes of a layout:
// at most 2^(#axes) corner cells with convex weights. Exogenous indices are
// exact lookups. Weights are constants given the coordinate, so everything
// evaluated through a stencil is linear in the table values.
struct CornerSet {
    static constexpr int max_corners = 16;
    int count = 0;
    long cells[max_corners];
    double weights[max_corners];
    int clamp_events = 0;  // coordinates outside the grid, clamped to the boundary
};

CornerSet price_corners(const StateLayout& layout, const AggCoord& coord);

// Evaluates the policy at a coordinate: out must hold action_dim * J values,
// laid out as [action][J]. Returns the number of clamp events.
int eval_policy(const PolicyTable& table, const AggCoord& coord, std::span<double> out);

// Convenience allocating variant.
std::vector<double> eval_policy(const PolicyTable& table, const AggCoord& coord);

// Bracket search on a strictly increasing grid: index of the bracket's lower
// node (clamped to [0, n-2]) and the weight on it. On-grid values get weight
// one on their own node. interior reports whether x was strictly inside.
struct Bracket {
    int lo;
    double w_lo;
    double inv_step;  // 1 / (grid[lo+1] - grid[lo])
    bool interior;
};
Bracket bracket_on_grid(std::span<const double> grid, double x);

}  // namespace srl
