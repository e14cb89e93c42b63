#include "srl/transition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "srl/policy.hpp"

namespace srl {

TransitionLottery build_lottery(std::span<const double> bprime, const StateLayout& layout) {
    const int J = layout.J();
    if (static_cast<int>(bprime.size()) != J)
        throw std::invalid_argument("build_lottery: bprime length mismatch");
    TransitionLottery lot;
    lot.n_b = layout.n_b();
    lot.n_y = layout.n_y();
    lot.lo.resize(J);
    lot.w_lo.resize(J);
    lot.inv_step.resize(J);
    lot.interior.resize(J);
    const std::span<const double> grid(layout.b_grid);
    for (int j = 0; j < J; ++j) {
        const double bp = bprime[j];
        if (!std::isfinite(bp))
            throw std::invalid_argument("build_lottery: non-finite b' at state " + std::to_string(j));
        const Bracket br = bracket_on_grid(grid, bp);
        lot.lo[j] = br.lo;
        lot.w_lo[j] = br.w_lo;
        lot.inv_step[j] = br.inv_step;
        lot.interior[j] = br.interior ? 1 : 0;
    }
    return lot;
}

void forward_into(std::span<const double> g, const TransitionLottery& lottery,
                  const MarkovChain& y_chain, std::span<double> out, std::span<double> scratch) {
    const int n_b = lottery.n_b;
    const int n_y = lottery.n_y;
    const int J = n_b * n_y;
    if (static_cast<int>(g.size()) != J || static_cast<int>(out.size()) != J ||
        static_cast<int>(scratch.size()) != J)
        throw std::invalid_argument("forward: dimension mismatch");
    if (y_chain.n() != n_y) throw std::invalid_argument("forward: income chain size mismatch");

    // wealth lottery scatter, income state unchanged
    std::fill(scratch.begin(), scratch.end(), 0.0);
    for (int j = 0; j < J; ++j) {
        const double m = g[j];
        if (m == 0.0) continue;
        const int iy = j % n_y;
        const int lo = lottery.lo[j];
        const double w = lottery.w_lo[j];
        scratch[lo * n_y + iy] += m * w;
        scratch[(lo + 1) * n_y + iy] += m * (1.0 - w);
    }
    // income transition within each wealth node
    for (int ib = 0; ib < n_b; ++ib) {
        double* dst = out.data() + static_cast<std::size_t>(ib) * n_y;
        const double* src = scratch.data() + static_cast<std::size_t>(ib) * n_y;
        for (int yn = 0; yn < n_y; ++yn) dst[yn] = 0.0;
        for (int y = 0; y < n_y; ++y) {
            const double m = src[y];
            if (m == 0.0) continue;
            auto row = y_chain.row(y);
            for (int yn = 0; yn < n_y; ++yn) dst[yn] += m * row[yn];
        }
    }
}

Histogram forward(const Histogram& g, const TransitionLottery& lottery, const MarkovChain& y_chain) {
    Histogram out;
    out.mass.resize(g.mass.size());
    std::vector<double> scratch(g.mass.size());
    forward_into(g.mass, lottery, y_chain, out.mass, scratch);
    return out;
}

std::vector<double> lottery_mean(const TransitionLottery& lottery, const StateLayout& layout) {
    const int J = layout.J();
    std::vector<double> mean(J);
    for (int j = 0; j < J; ++j) {
        const int lo = lottery.lo[j];
        mean[j] = lottery.w_lo[j] * layout.b_grid[lo] + (1.0 - lottery.w_lo[j]) * layout.b_grid[lo + 1];
    }
    return mean;
}

std::vector<double> vjp_bprime(std::span<const double> V, std::span<const double> g,
                               const TransitionLottery& lottery, const MarkovChain& y_chain) {
    const int n_y = lottery.n_y;
    const int J = lottery.n_b * n_y;
    if (static_cast<int>(V.size()) != J || static_cast<int>(g.size()) != J)
        throw std::invalid_argument("vjp_bprime: dimension mismatch");
    std::vector<double> out(J, 0.0);
    for (int j = 0; j < J; ++j) {
        if (!lottery.interior[j] || g[j] == 0.0) continue;
        const int iy = j % n_y;
        const int lo = lottery.lo[j];
        auto row = y_chain.row(iy);
        double slope = 0.0;
        for (int yn = 0; yn < n_y; ++yn)
            slope += row[yn] * (V[lo * n_y + yn] - V[(lo + 1) * n_y + yn]);
        // d w_lo / d b' = -inv_step inside the bracket
        out[j] = -g[j] * lottery.inv_step[j] * slope;
    }
    return out;
}

}  // namespace srl
