#pragma once

#include <string>
#include <vector>

#include "srl/model.hpp"

namespace srl {

// Value-function-iteration solution of the Huggett partial-equilibrium
// problem on the (b, y, r) grid; the accuracy benchmark for the policy
// gradient solver. Storage is [(iy * n_r + ir) * n_b + ib] so b-slices are
// contiguous for interpolation.
struct VfiSolution {
    std::vector<double> value;
    std::vector<double> policy_c;
    int n_b = 0, n_y = 0, n_r = 0;
    int iterations = 0;
    double final_bellman_residual = 0.0;
    bool converged = false;

    std::size_t idx(int ib, int iy, int ir) const {
        return (static_cast<std::size_t>(iy) * n_r + ir) * n_b + ib;
    }
};

// Bellman iteration with expectations over the product (y, r) chain and
// continuation values interpolated linearly in b. Maximization over
// consumption uses a coarse candidate scan refined by golden-section search.
VfiSolution solve_pe_vfi(const ModelSpec& spec, double tol = 1e-8, int max_iter = 5000);

// Sup-norm change from one extra Bellman application.
double bellman_residual(const VfiSolution& solution, const ModelSpec& spec);

// Repacks the VFI consumption policy as a PolicyTable on the PE layout so it
// can be compared against or checkpointed like a trained policy.
PolicyTable vfi_policy_table(const VfiSolution& solution, const ModelSpec& spec);

// CSV export with columns b, y, r, c.
void export_vfi_csv(const VfiSolution& solution, const ModelSpec& spec, const std::string& path);

}  // namespace srl
