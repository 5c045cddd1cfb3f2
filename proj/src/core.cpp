#include "kelsim/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kelsim/rng.hpp"

namespace kelsim {

void ModelParams::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (dim < 1) fail("dimension N must be >= 1");
    if (!(chi > 0.0) || !std::isfinite(chi)) fail("chi must be > 0");
    if (!(mu >= 0.0) || !std::isfinite(mu)) fail("mu must be >= 0");
    if (!(c_d > 0.0) || !std::isfinite(c_d)) fail("c_d must be > 0");
    if (!std::isfinite(m_exp)) fail("m must be finite");
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) fail("lambda0 must be > 0");
    if (!(c_gn > 0.0) || !std::isfinite(c_gn)) fail("c_gn must be > 0");
}

double Grid::min_spacing() const {
    return dim_ == 1 ? h_[0] : std::min(h_[0], h_[1]);
}

Grid make_grid(int dim, std::span<const std::size_t> n_cells, std::span<const double> lengths) {
    if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2, got " + std::to_string(dim));
    const auto d = static_cast<std::size_t>(dim);
    if (n_cells.size() != d || lengths.size() != d)
        throw ConfigError("grid needs one cell count and one length per axis");
    Grid g;
    g.dim_ = dim;
    for (std::size_t a = 0; a < d; ++a) {
        if (n_cells[a] < 4) throw ConfigError("grid needs at least 4 cells per axis");
        if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) throw ConfigError("grid lengths must be > 0");
        g.n_[a] = n_cells[a];
        g.len_[a] = lengths[a];
        g.h_[a] = lengths[a] / static_cast<double>(n_cells[a]);
    }
    return g;
}

double Field::min() const {
    return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

double Field::max() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

bool Field::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

void check_field(const Field& f, const Grid& grid, const char* what) {
    if (f.size() != grid.cell_count())
        throw NumericError(std::string(what) + ": field size does not match grid");
    if (!f.all_finite()) throw NumericError(std::string(what) + ": non-finite value");
}

namespace {

struct Validator {
    void operator()(const initial::Constant& c) const {
        if (!(c.value >= 0.0) || !std::isfinite(c.value)) throw ConfigError("constant initial value must be >= 0");
    }
    void operator()(const initial::Gaussian& g) const {
        if (!(g.amplitude >= 0.0) || !std::isfinite(g.amplitude))
            throw ConfigError("gaussian amplitude must be >= 0");
        if (!(g.width > 0.0) || !std::isfinite(g.width)) throw ConfigError("gaussian width must be > 0");
        if (!std::isfinite(g.center[0]) || !std::isfinite(g.center[1]))
            throw ConfigError("gaussian center must be finite");
    }
    void operator()(const initial::FilteredNoise& n) const {
        if (!(n.amplitude >= 0.0) || !std::isfinite(n.amplitude))
            throw ConfigError("noise amplitude must be >= 0");
        if (n.cutoff < 0) throw ConfigError("noise cutoff (smoothing passes) must be >= 0");
    }
};

}  // namespace

void validate(const InitialData& spec) { std::visit(Validator{}, spec); }

std::string describe(const InitialData& spec) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, initial::Constant>) {
                os << "constant(" << s.value << ")";
            } else if constexpr (std::is_same_v<T, initial::Gaussian>) {
                os << "gaussian(" << s.amplitude << ", [" << s.center[0] << ", " << s.center[1] << "], "
                   << s.width << ")";
            } else {
                os << "filtered-noise(" << s.seed << ", " << s.amplitude << ", " << s.cutoff << ")";
            }
        },
        spec);
    return os.str();
}

void smooth_121(Field& f, const Grid& grid, int passes) {
    Field tmp(f.size());
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const std::size_t nx = grid.cells(0);
        const std::size_t ny = grid.cells(1);
        for (int pass = 0; pass < passes; ++pass) {
            for (std::size_t iy = 0; iy < ny; ++iy) {
                for (std::size_t ix = 0; ix < nx; ++ix) {
                    const std::size_t i = grid.index(ix, iy);
                    std::size_t lo = i;
                    std::size_t hi = i;
                    if (axis == 0) {
                        if (ix > 0) lo = grid.index(ix - 1, iy);
                        if (ix + 1 < nx) hi = grid.index(ix + 1, iy);
                    } else {
                        if (iy > 0) lo = grid.index(ix, iy - 1);
                        if (iy + 1 < ny) hi = grid.index(ix, iy + 1);
                    }
                    tmp[i] = 0.25 * f[lo] + 0.5 * f[i] + 0.25 * f[hi];
                }
            }
            std::swap(f.values, tmp.values);
        }
    }
}

Field make_initial(const Grid& grid, const InitialData& spec) {
    validate(spec);
    Field f(grid.cell_count());
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, initial::Constant>) {
                std::fill(f.values.begin(), f.values.end(), s.value);
            } else if constexpr (std::is_same_v<T, initial::Gaussian>) {
                const double inv = 1.0 / (2.0 * s.width * s.width);
                for (std::size_t iy = 0; iy < grid.cells(1); ++iy) {
                    const double dy = grid.dim() == 2 ? grid.center(1, iy) - s.center[1] : 0.0;
                    for (std::size_t ix = 0; ix < grid.cells(0); ++ix) {
                        const double dx = grid.center(0, ix) - s.center[0];
                        f[grid.index(ix, iy)] = s.amplitude * std::exp(-(dx * dx + dy * dy) * inv);
                    }
                }
            } else {
                CounterRng rng(s.seed);
                for (auto& x : f.values) x = rng.uniform(-1.0, 1.0);
                smooth_121(f, grid, s.cutoff);
                double peak = 0.0;
                for (double x : f.values) peak = std::max(peak, std::abs(x));
                for (auto& x : f.values) {
                    const double shifted = peak > 0.0 ? 0.5 + 0.5 * x / peak : 0.5;
                    x = std::clamp(s.amplitude * shifted, 0.0, s.amplitude);
                }
            }
        },
        spec);
    return f;
}

}  // namespace kelsim
