#include "srl/checkpoint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace srl {

namespace {

constexpr char kMagic[8] = {'S', 'R', 'L', 'P', 'O', 'L', 'v', '1'};
constexpr std::uint32_t kVersion = 1;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_u32(std::FILE* f, std::uint32_t v) {
    if (std::fwrite(&v, sizeof(v), 1, f) != 1) throw std::runtime_error("checkpoint: write failed");
}

std::uint32_t read_u32(std::FILE* f) {
    std::uint32_t v = 0;
    if (std::fread(&v, sizeof(v), 1, f) != 1) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

void write_f64s(std::FILE* f, const std::vector<double>& v) {
    write_u32(f, static_cast<std::uint32_t>(v.size()));
    if (!v.empty() && std::fwrite(v.data(), sizeof(double), v.size(), f) != v.size())
        throw std::runtime_error("checkpoint: write failed");
}

std::vector<double> read_f64s(std::FILE* f) {
    const std::uint32_t n = read_u32(f);
    std::vector<double> v(n);
    if (n > 0 && std::fread(v.data(), sizeof(double), n, f) != n)
        throw std::runtime_error("checkpoint: truncated file");
    return v;
}

}  // namespace

void save_checkpoint(const PolicyTable& table, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path);
    if (std::fwrite(kMagic, 1, 8, f.get()) != 8) throw std::runtime_error("checkpoint: write failed");
    write_u32(f.get(), kVersion);
    write_u32(f.get(), static_cast<std::uint32_t>(table.layout.lag_depth));
    write_u32(f.get(), static_cast<std::uint32_t>(table.action_dim));
    write_u32(f.get(), static_cast<std::uint32_t>(table.layout.price_grids.size()));
    write_f64s(f.get(), table.layout.b_grid);
    write_f64s(f.get(), table.layout.y_grid);
    write_f64s(f.get(), table.layout.z_grid);
    write_f64s(f.get(), table.layout.eps_grid);
    for (const auto& pg : table.layout.price_grids) write_f64s(f.get(), pg);
    write_f64s(f.get(), table.values);
}

PolicyTable load_checkpoint(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[8];
    if (std::fread(magic, 1, 8, f.get()) != 8 || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    if (read_u32(f.get()) != kVersion)
        throw std::runtime_error("checkpoint: unsupported version in " + path);
    PolicyTable table;
    table.layout.lag_depth = static_cast<int>(read_u32(f.get()));
    table.action_dim = static_cast<int>(read_u32(f.get()));
    const std::uint32_t n_axes = read_u32(f.get());
    table.layout.b_grid = read_f64s(f.get());
    table.layout.y_grid = read_f64s(f.get());
    table.layout.z_grid = read_f64s(f.get());
    table.layout.eps_grid = read_f64s(f.get());
    table.layout.price_grids.resize(n_axes);
    for (auto& pg : table.layout.price_grids) pg = read_f64s(f.get());
    table.layout.validate();
    table.values = read_f64s(f.get());
    const std::size_t expect =
        static_cast<std::size_t>(table.layout.n_cells()) * table.action_dim * table.layout.J();
    if (table.values.size() != expect)
        throw std::runtime_error("checkpoint: value array size mismatch in " + path);
    return table;
}

void export_policy_csv(const PolicyTable& table, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "w"));
    if (!f) throw std::runtime_error("checkpoint: cannot open " + path);
    const StateLayout& lay = table.layout;

    std::fprintf(f.get(), "ib,b,iy,y,iz,z");
    if (!lay.eps_grid.empty()) std::fprintf(f.get(), ",ieps,eps");
    for (int a = 0; a < lay.n_cont_axes(); ++a)
        std::fprintf(f.get(), ",ip%d,p%d", a, a);
    for (int a = 0; a < table.action_dim; ++a) std::fprintf(f.get(), ",action%d", a);
    std::fprintf(f.get(), "\n");

    int nodes[8] = {};
    for (long cell = 0; cell < lay.n_cells(); ++cell) {
        int iz = 0, ieps = 0;
        lay.decode_cell(cell, iz, ieps, nodes);
        for (int j = 0; j < lay.J(); ++j) {
            const int ib = lay.b_of(j), iy = lay.y_of(j);
            std::fprintf(f.get(), "%d,%.17g,%d,%.17g,%d,%.17g", ib, lay.b_grid[ib], iy,
                         lay.y_grid[iy], iz, lay.z_grid[iz]);
            if (!lay.eps_grid.empty())
                std::fprintf(f.get(), ",%d,%.17g", ieps, lay.eps_grid[ieps]);
            for (int a = 0; a < lay.n_cont_axes(); ++a)
                std::fprintf(f.get(), ",%d,%.17g", nodes[a], lay.cont_axis(a)[nodes[a]]);
            for (int a = 0; a < table.action_dim; ++a)
                std::fprintf(f.get(), ",%.17g", table.plane(cell, a)[j]);
            std::fprintf(f.get(), "\n");
        }
    }
}

}  // namespace srl
