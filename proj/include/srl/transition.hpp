#pragma once

#include <span>
#include <vector>

#include "srl/layout.hpp"
#include "srl/markov.hpp"

namespace srl {

// Cross-sectional distribution over the (b, y) grid.
struct Histogram {
    std::vector<double> mass;

    double total() const {
        double s = 0.0;
        for (double m : mass) s += m;
        return s;
    }
};

// Young (2010) two-point lottery for next-period wealth: each b' is split
// between the adjacent wealth nodes with linear-interpolation weights.
// Combined with the income transition row this realizes one row of the
// policy-induced transition matrix without ever materializing it.
struct TransitionLottery {
    std::vector<int> lo;          // lower destination node per source state
    std::vector<double> w_lo;     // weight on the lower node, in [0,1]
    std::vector<double> inv_step; // 1 / bracket width (dw/db' = -inv_step when interior)
    std::vector<unsigned char> interior;  // 0 when b' was clamped to a boundary node
    int n_b = 0;
    int n_y = 0;
};

// Builds the lottery from per-state next-period wealth. Values outside the
// grid are clamped to the boundary node with weight one. Throws on non-finite
// b' with the offending state index in the message.
TransitionLottery build_lottery(std::span<const double> bprime, const StateLayout& layout);

// One Chapman-Kolmogorov step g' = A^T g via sparse scatter (wealth lottery)
// followed by the income-transition mix. Mass is conserved.
void forward_into(std::span<const double> g, const TransitionLottery& lottery,
                  const MarkovChain& y_chain, std::span<double> out, std::span<double> scratch);

Histogram forward(const Histogram& g, const TransitionLottery& lottery, const MarkovChain& y_chain);

// Identical operator to forward(); the name marks the call sites where the
// result participates in gradient recording (the weights carry derivative
// information with respect to b').
inline Histogram pushforward_value(const Histogram& d, const TransitionLottery& lottery,
                                   const MarkovChain& y_chain) {
    return forward(d, lottery, y_chain);
}

// Expected next-period wealth per source state under the lottery; equals
// clamp(b') exactly (the lottery is mean-preserving by construction).
std::vector<double> lottery_mean(const TransitionLottery& lottery, const StateLayout& layout);

// Adjoint helper: d/db'_j of V . (A^T g) for fixed V and g. Zero where the
// lottery was clamped.
std::vector<double> vjp_bprime(std::span<const double> V, std::span<const double> g,
                               const TransitionLottery& lottery, const MarkovChain& y_chain);

}  // namespace srl
