#include "srl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace srl {

PolicyTable PolicyTable::zeros(const StateLayout& layout, int action_dim) {
    layout.validate();
    if (action_dim < 1) throw std::invalid_argument("PolicyTable: action_dim must be >= 1");
    PolicyTable t;
    t.layout = layout;
    t.action_dim = action_dim;
    t.values.assign(static_cast<std::size_t>(layout.n_cells()) * action_dim * layout.J(), 0.0);
    return t;
}

Bracket bracket_on_grid(std::span<const double> grid, double x) {
    const int n = static_cast<int>(grid.size());
    Bracket br;
    if (x <= grid[0]) {
        br.lo = 0;
        br.w_lo = 1.0;
        br.inv_step = 1.0 / (grid[1] - grid[0]);
        br.interior = false;
        return br;
    }
    if (x >= grid[n - 1]) {
        br.lo = n - 2;
        br.w_lo = 0.0;
        br.inv_step = 1.0 / (grid[n - 1] - grid[n - 2]);
        br.interior = false;
        return br;
    }
    // last node <= x, so an exact node match keeps full weight on that node
    int lo = static_cast<int>(std::upper_bound(grid.begin(), grid.end(), x) - grid.begin()) - 1;
    lo = std::min(lo, n - 2);
    br.lo = lo;
    br.inv_step = 1.0 / (grid[lo + 1] - grid[lo]);
    br.w_lo = (grid[lo + 1] - x) * br.inv_step;
    br.interior = true;
    return br;
}

CornerSet price_corners(const StateLayout& layout, const AggCoord& coord) {
    const int d = layout.n_cont_axes();
    const int np = layout.n_price_axes();
    if (static_cast<int>(coord.prices.size()) != np)
        throw std::invalid_argument("price_corners: price dimension mismatch");
    if (layout.lag_depth == 1 && static_cast<int>(coord.lagged.size()) != np)
        throw std::invalid_argument("price_corners: lagged price dimension mismatch");
    if (coord.z_index < 0 || coord.z_index >= layout.n_z())
        throw std::invalid_argument("price_corners: z index out of range");
    if (coord.eps_index < 0 || coord.eps_index >= layout.n_eps())
        throw std::invalid_argument("price_corners: eps index out of range");

    Bracket br[CornerSet::max_corners > 0 ? 8 : 0];
    int clamps = 0;
    for (int a = 0; a < d; ++a) {
        const double x = (a < np) ? coord.prices[a] : coord.lagged[a - np];
        br[a] = bracket_on_grid(layout.cont_axis(a), x);
        if (!br[a].interior && (x < layout.cont_axis(a).front() || x > layout.cont_axis(a).back()))
            ++clamps;
    }

    CornerSet cs;
    cs.clamp_events = clamps;
    const int n_corners = 1 << d;
    if (n_corners > CornerSet::max_corners)
        throw std::invalid_argument("price_corners: too many continuous axes");
    int nodes[8];
    for (int mask = 0; mask < n_corners; ++mask) {
        double w = 1.0;
        for (int a = 0; a < d; ++a) {
            const bool upper = (mask >> a) & 1;
            nodes[a] = br[a].lo + (upper ? 1 : 0);
            w *= upper ? (1.0 - br[a].w_lo) : br[a].w_lo;
        }
        if (w == 0.0) continue;  // skip zero-weight corners (exact node hits)
        cs.cells[cs.count] = layout.cell_index(coord.z_index, coord.eps_index, nodes);
        cs.weights[cs.count] = w;
        ++cs.count;
    }
    if (cs.count == 0) {  // all weights zero cannot happen; keep the base corner
        for (int a = 0; a < d; ++a) nodes[a] = br[a].lo;
        cs.cells[0] = layout.cell_index(coord.z_index, coord.eps_index, nodes);
        cs.weights[0] = 1.0;
        cs.count = 1;
    }
    return cs;
}

int eval_policy(const PolicyTable& table, const AggCoord& coord, std::span<double> out) {
    const int J = table.layout.J();
    if (static_cast<int>(out.size()) != J * table.action_dim)
        throw std::invalid_argument("eval_policy: output buffer size mismatch");
    const CornerSet cs = price_corners(table.layout, coord);
    std::fill(out.begin(), out.end(), 0.0);
    for (int a = 0; a < table.action_dim; ++a) {
        double* dst = out.data() + static_cast<std::size_t>(a) * J;
        for (int c = 0; c < cs.count; ++c) {
            const double w = cs.weights[c];
            const double* src = table.values.data() + table.plane_offset(cs.cells[c], a);
            for (int j = 0; j < J; ++j) dst[j] += w * src[j];
        }
    }
    return cs.clamp_events;
}

std::vector<double> eval_policy(const PolicyTable& table, const AggCoord& coord) {
    std::vector<double> out(static_cast<std::size_t>(table.layout.J()) * table.action_dim);
    eval_policy(table, coord, out);
    return out;
}

}  // namespace srl
