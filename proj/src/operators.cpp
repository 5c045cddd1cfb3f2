#include "kelsim/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace kelsim::ops {

namespace {

// Short %g rendering for error messages; std::to_string rounds tiny values to 0.
std::string format_value(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Specialised exponent evaluation: m = 1, 1.25, 1.5 and 2 avoid pow() in the
// face loop.
struct DiffusivityEval {
    double c_d;
    double expo;
    enum Kind { Constant, Linear, Sqrt, FourthRoot, General } kind;

    explicit DiffusivityEval(const ModelParams& p) : c_d(p.c_d), expo(p.m_exp - 1.0) {
        kind = expo == 0.0    ? Constant
               : expo == 1.0  ? Linear
               : expo == 0.5  ? Sqrt
               : expo == 0.25 ? FourthRoot
                              : General;
    }

    double operator()(double u) const {
        if (u < 0.0) {
            if (u < -kTolNeg || std::isnan(u))
                throw StateError("negative density " + format_value(u) + " beyond tolerance");
            u = 0.0;
        }
        switch (kind) {
            case Constant: return c_d;
            case Linear: return c_d * (u + 1.0);
            case Sqrt: return c_d * std::sqrt(u + 1.0);
            case FourthRoot: return c_d * std::sqrt(std::sqrt(u + 1.0));
            case General: break;
        }
        return c_d * std::pow(u + 1.0, expo);
    }
};

// Visits every interior face in storage order (axis 0 rows, then axis 1),
// calling sink(i, j, inv_h, flux).
template <class Sink>
FluxStats visit_faces(const Field& u, const Field& v, const ModelParams& params, const Grid& grid, Sink&& sink) {
    const DiffusivityEval dfn(params);
    const std::size_t nx = grid.cells(0);
    const std::size_t ny = grid.cells(1);
    const double chi = params.chi;
    double dmax = 0.0;
    double wmax = 0.0;
    auto face = [&](std::size_t i, std::size_t j, double inv_h) {
        const double ui = u[i];
        const double uj = u[j];
        const double d = dfn(0.5 * (ui + uj));
        const double w = chi * (v[j] - v[i]) * inv_h;
        const double up = w > 0.0 ? ui : uj;
        dmax = std::max(dmax, d);
        wmax = std::max(wmax, std::abs(w));
        sink(i, j, inv_h, d * (uj - ui) * inv_h - w * up);
    };
    {
        const double inv_h = 1.0 / grid.spacing(0);
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const std::size_t row = grid.index(0, iy);
            for (std::size_t ix = 0; ix + 1 < nx; ++ix) face(row + ix, row + ix + 1, inv_h);
        }
    }
    if (grid.dim() == 2) {
        const double inv_h = 1.0 / grid.spacing(1);
        for (std::size_t iy = 0; iy + 1 < ny; ++iy)
            for (std::size_t ix = 0; ix < nx; ++ix) face(grid.index(ix, iy), grid.index(ix, iy + 1), inv_h);
    }
    return {dmax, wmax};
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw NumericError(std::string("non-finite value in ") + what);
}

}  // namespace

double diffusivity(double u, const ModelParams& params) { return DiffusivityEval(params)(u); }

FaceFluxes assemble_fluxes(const State& state, const ModelParams& params, const Grid& grid) {
    if (state.u.size() != grid.cell_count() || state.v.size() != grid.cell_count())
        throw NumericError("assemble_fluxes: field size does not match grid");
    const std::size_t nx = grid.cells(0);
    const std::size_t ny = grid.cells(1);
    FaceFluxes out;
    out.flux[0].reserve((nx - 1) * ny);
    if (grid.dim() == 2) out.flux[1].reserve(nx * (ny - 1));
    const std::size_t n_x_faces = (nx - 1) * ny;
    std::size_t k = 0;
    const FluxStats st = visit_faces(state.u, state.v, params, grid, [&](std::size_t, std::size_t, double, double f) {
        out.flux[k < n_x_faces ? 0 : 1].push_back(f);
        ++k;
    });
    require_finite(st.max_diffusivity, "face diffusivity");
    require_finite(st.max_speed, "face velocity");
    for (const auto& fl : out.flux)
        for (double f : fl) require_finite(f, "face flux");
    out.max_diffusivity = st.max_diffusivity;
    out.max_speed = st.max_speed;
    return out;
}

FluxStats flux_divergence(const Field& u, const Field& v, const ModelParams& params, const Grid& grid,
                          std::vector<double>& div) {
    div.assign(grid.cell_count(), 0.0);
    double* d = div.data();
    return visit_faces(u, v, params, grid, [d](std::size_t i, std::size_t j, double inv_h, double f) {
        const double g = f * inv_h;
        d[i] += g;
        d[j] -= g;
    });
}

Field divergence(const FaceFluxes& fluxes, const Grid& grid) {
    const std::size_t nx = grid.cells(0);
    const std::size_t ny = grid.cells(1);
    Field div(grid.cell_count(), 0.0);
    {
        const double inv_h = 1.0 / grid.spacing(0);
        const auto& fx = fluxes.flux[0];
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const std::size_t row = grid.index(0, iy);
            for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
                const double f = fx[iy * (nx - 1) + ix] * inv_h;
                div[row + ix] += f;
                div[row + ix + 1] -= f;
            }
        }
    }
    if (grid.dim() == 2) {
        const double inv_h = 1.0 / grid.spacing(1);
        const auto& fy = fluxes.flux[1];
        for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const double f = fy[iy * nx + ix] * inv_h;
                div[grid.index(ix, iy)] += f;
                div[grid.index(ix, iy + 1)] -= f;
            }
        }
    }
    return div;
}

Field rhs_u(const State& state, const ModelParams& params, const Grid& grid, const FaceFluxes& fluxes) {
    Field r = divergence(fluxes, grid);
    if (params.mu != 0.0) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double u = state.u[i];
            r[i] += params.mu * (u - u * u);
        }
    }
    return r;
}

Field rhs_u(const State& state, const ModelParams& params, const Grid& grid) {
    return rhs_u(state, params, grid, assemble_fluxes(state, params, grid));
}

Field laplacian(const Field& f, const Grid& grid) {
    if (f.size() != grid.cell_count()) throw NumericError("laplacian: field size does not match grid");
    const std::size_t nx = grid.cells(0);
    const std::size_t ny = grid.cells(1);
    const double ihx2 = 1.0 / (grid.spacing(0) * grid.spacing(0));
    const double ihy2 = 1.0 / (grid.spacing(1) * grid.spacing(1));
    const bool two_d = grid.dim() == 2;
    Field lap(grid.cell_count());
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const std::size_t i = grid.index(ix, iy);
            const double c = f[i];
            // Reflected ghost cell: missing neighbour equals the cell itself.
            const double w = ix > 0 ? f[i - 1] : c;
            const double e = ix + 1 < nx ? f[i + 1] : c;
            double acc = (w - 2.0 * c + e) * ihx2;
            if (two_d) {
                const double s = iy > 0 ? f[i - nx] : c;
                const double n = iy + 1 < ny ? f[i + nx] : c;
                acc += (s - 2.0 * c + n) * ihy2;
            }
            lap[i] = acc;
        }
    }
    return lap;
}

Field rhs_v(const State& state, const Grid& grid) {
    if (state.u.size() != grid.cell_count()) throw NumericError("rhs_v: field size does not match grid");
    Field r = laplacian(state.v, grid);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] += state.u[i] - state.v[i];
        require_finite(r[i], "rhs_v");
    }
    return r;
}

}  // namespace kelsim::ops
