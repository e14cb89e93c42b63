#include "srl/vfi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace srl {

namespace {

// linear interpolation in b with flat extension beyond the grid, matching
// the boundary clamping of the wealth lottery
double interp_b(const std::vector<double>& bgrid, const double* slice, double b) {
    const int n = static_cast<int>(bgrid.size());
    if (b <= bgrid[0]) return slice[0];
    if (b >= bgrid[n - 1]) return slice[n - 1];
    int lo = static_cast<int>(std::upper_bound(bgrid.begin(), bgrid.end(), b) - bgrid.begin()) - 1;
    lo = std::min(lo, n - 2);
    const double w = (bgrid[lo + 1] - b) / (bgrid[lo + 1] - bgrid[lo]);
    return w * slice[lo] + (1.0 - w) * slice[lo + 1];
}

struct BellmanContext {
    const ModelSpec* spec;
    const std::vector<double>* bgrid;
    std::vector<double> rgrid;
    std::vector<double> y_levels;
    double z_level;
    int n_b, n_y, n_r;
};

// one Bellman sweep: fills new_value (and policy when non-null) from value
void bellman_sweep(const BellmanContext& ctx, const std::vector<double>& value,
                   const MarkovChain& y_chain, const MarkovChain& r_chain,
                   std::vector<double>& new_value, std::vector<double>* policy) {
    const ModelSpec& spec = *ctx.spec;
    const int n_b = ctx.n_b, n_y = ctx.n_y, n_r = ctx.n_r;

    // expected continuation W[b', y, r] = E[V(b', y', r') | y, r]
    std::vector<double> tmp(value.size());
    for (int iy = 0; iy < n_y; ++iy)
        for (int ir = 0; ir < n_r; ++ir) {
            auto rrow = r_chain.row(ir);
            double* dst = tmp.data() + (static_cast<std::size_t>(iy) * n_r + ir) * n_b;
            for (int ib = 0; ib < n_b; ++ib) dst[ib] = 0.0;
            for (int jr = 0; jr < n_r; ++jr) {
                const double pr = rrow[jr];
                if (pr == 0.0) continue;
                const double* src = value.data() + (static_cast<std::size_t>(iy) * n_r + jr) * n_b;
                for (int ib = 0; ib < n_b; ++ib) dst[ib] += pr * src[ib];
            }
        }
    std::vector<double> W(value.size());
    for (int iy = 0; iy < n_y; ++iy) {
        auto yrow = y_chain.row(iy);
        for (int ir = 0; ir < n_r; ++ir) {
            double* dst = W.data() + (static_cast<std::size_t>(iy) * n_r + ir) * n_b;
            for (int ib = 0; ib < n_b; ++ib) dst[ib] = 0.0;
            for (int jy = 0; jy < n_y; ++jy) {
                const double py = yrow[jy];
                if (py == 0.0) continue;
                const double* src = tmp.data() + (static_cast<std::size_t>(jy) * n_r + ir) * n_b;
                for (int ib = 0; ib < n_b; ++ib) dst[ib] += py * src[ib];
            }
        }
    }

    const double blow = spec.borrow_limit;
    for (int iy = 0; iy < n_y; ++iy)
        for (int ir = 0; ir < n_r; ++ir) {
            const double y = ctx.y_levels[iy];
            const double r = ctx.rgrid[ir];
            const double* cont = W.data() + (static_cast<std::size_t>(iy) * n_r + ir) * n_b;
            for (int ib = 0; ib < n_b; ++ib) {
                const double cash = (1.0 + r) * (*ctx.bgrid)[ib] + y * ctx.z_level;
                const double c_hi = std::max(spec.c_min, cash - blow);
                const double c_lo = spec.c_min;
                auto eval = [&](double c) {
                    return spec.utility(c) + spec.beta * interp_b(*ctx.bgrid, cont, cash - c);
                };
                // coarse candidate scan, then golden-section refinement
                constexpr int n_scan = 24;
                double best_c = c_lo, best_v = eval(c_lo);
                for (int k = 1; k < n_scan; ++k) {
                    const double c = c_lo + (c_hi - c_lo) * k / (n_scan - 1);
                    const double v = eval(c);
                    if (v > best_v) { best_v = v; best_c = c; }
                }
                const double width = (c_hi - c_lo) / (n_scan - 1);
                double a = std::max(c_lo, best_c - width);
                double b = std::min(c_hi, best_c + width);
                constexpr double invphi = 0.6180339887498949;
                double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
                double f1 = eval(x1), f2 = eval(x2);
                for (int it = 0; it < 64 && b - a > 1e-12 * std::max(1.0, c_hi); ++it) {
                    if (f1 > f2) {
                        b = x2; x2 = x1; f2 = f1;
                        x1 = b - invphi * (b - a);
                        f1 = eval(x1);
                    } else {
                        a = x1; x1 = x2; f1 = f2;
                        x2 = a + invphi * (b - a);
                        f2 = eval(x2);
                    }
                }
                double c_star = best_c, v_star = best_v;
                if (f1 > v_star) { v_star = f1; c_star = x1; }
                if (f2 > v_star) { v_star = f2; c_star = x2; }
                const std::size_t id = (static_cast<std::size_t>(iy) * n_r + ir) * n_b + ib;
                new_value[id] = v_star;
                if (policy) (*policy)[id] = c_star;
            }
        }
}

BellmanContext make_context(const ModelSpec& spec) {
    if (spec.kind != ModelKind::HuggettPE)
        throw std::invalid_argument("solve_pe_vfi: requires a Huggett partial-equilibrium spec");
    BellmanContext ctx;
    ctx.spec = &spec;
    ctx.bgrid = &spec.layout.b_grid;
    ctx.rgrid = spec.pe_r_chain.grid;
    ctx.y_levels = spec.layout.y_grid;
    ctx.z_level = spec.layout.z_grid[0];
    ctx.n_b = spec.layout.n_b();
    ctx.n_y = spec.layout.n_y();
    ctx.n_r = static_cast<int>(ctx.rgrid.size());
    return ctx;
}

}  // namespace

VfiSolution solve_pe_vfi(const ModelSpec& spec, double tol, int max_iter) {
    const BellmanContext ctx = make_context(spec);
    VfiSolution sol;
    sol.n_b = ctx.n_b;
    sol.n_y = ctx.n_y;
    sol.n_r = ctx.n_r;
    const std::size_t n_states = static_cast<std::size_t>(ctx.n_b) * ctx.n_y * ctx.n_r;
    sol.value.assign(n_states, 0.0);
    sol.policy_c.assign(n_states, 0.0);

    // start from the value of consuming cash on hand forever
    for (int iy = 0; iy < ctx.n_y; ++iy)
        for (int ir = 0; ir < ctx.n_r; ++ir)
            for (int ib = 0; ib < ctx.n_b; ++ib) {
                const double cash = (1.0 + ctx.rgrid[ir]) * (*ctx.bgrid)[ib] +
                                    ctx.y_levels[iy] * ctx.z_level;
                const double c = std::max(spec.c_min, cash - spec.borrow_limit);
                sol.value[sol.idx(ib, iy, ir)] = spec.utility(c) / (1.0 - spec.beta);
            }

    std::vector<double> next(n_states);
    for (int it = 0; it < max_iter; ++it) {
        bellman_sweep(ctx, sol.value, spec.y_chain, spec.pe_r_chain, next, &sol.policy_c);
        double diff = 0.0;
        for (std::size_t i = 0; i < n_states; ++i)
            diff = std::max(diff, std::abs(next[i] - sol.value[i]));
        sol.value.swap(next);
        sol.iterations = it + 1;
        sol.final_bellman_residual = diff;
        if (diff < tol) {
            sol.converged = true;
            break;
        }
    }
    return sol;
}

double bellman_residual(const VfiSolution& solution, const ModelSpec& spec) {
    const BellmanContext ctx = make_context(spec);
    std::vector<double> next(solution.value.size());
    bellman_sweep(ctx, solution.value, spec.y_chain, spec.pe_r_chain, next, nullptr);
    double diff = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
        diff = std::max(diff, std::abs(next[i] - solution.value[i]));
    return diff;
}

PolicyTable vfi_policy_table(const VfiSolution& solution, const ModelSpec& spec) {
    PolicyTable table = PolicyTable::zeros(spec.layout, 1);
    const int n_y = spec.layout.n_y();
    for (int ir = 0; ir < solution.n_r; ++ir) {
        auto col = table.plane(ir, 0);
        for (int ib = 0; ib < solution.n_b; ++ib)
            for (int iy = 0; iy < n_y; ++iy)
                col[ib * n_y + iy] = solution.policy_c[solution.idx(ib, iy, ir)];
    }
    return table;
}

void export_vfi_csv(const VfiSolution& solution, const ModelSpec& spec, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("export_vfi_csv: cannot open " + path);
    std::fprintf(f, "b,y,r,c\n");
    for (int iy = 0; iy < solution.n_y; ++iy)
        for (int ir = 0; ir < solution.n_r; ++ir)
            for (int ib = 0; ib < solution.n_b; ++ib)
                std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", spec.layout.b_grid[ib],
                             spec.layout.y_grid[iy], spec.pe_r_chain.grid[ir],
                             solution.policy_c[solution.idx(ib, iy, ir)]);
    std::fclose(f);
}

}  // namespace srl
