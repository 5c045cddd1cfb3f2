#pragma once

#include <array>
#include <vector>

#include "kelsim/core.hpp"

namespace kelsim::ops {

/**
 * Fluxes through the interior faces of the mesh.
 *
 * Along axis a, the face between cell i (low side) and its neighbour j
 * (high side) carries
 *
 *     F = D((u_i + u_j)/2) (u_j - u_i)/h - w u_up,   w = chi (v_j - v_i)/h,
 *
 * with u_up = u_i if w > 0 and u_j otherwise. F is the amount of u flowing
 * from j into i per unit face area and unit time; cell j loses exactly F.
 * Boundary faces are not stored: their flux is zero.
 *
 * Faces of axis 0 are stored row by row, (nx-1) per row; faces of axis 1 are
 * stored with x fastest, nx per row, (ny-1) rows.
 */
struct FaceFluxes {
    std::array<std::vector<double>, 2> flux;
    /// Largest D over all faces (0 when there are none).
    double max_diffusivity = 0.0;
    /// Largest |w| over all faces.
    double max_speed = 0.0;
};

/// C_D (u + 1)^(m - 1). Values in [-kTolNeg, 0) are read as 0; below that
/// throws StateError.
double diffusivity(double u, const ModelParams& params);

FaceFluxes assemble_fluxes(const State& state, const ModelParams& params, const Grid& grid);

struct FluxStats {
    double max_diffusivity = 0.0;
    double max_speed = 0.0;
};

/// Fused assemble_fluxes + divergence: writes the divergence into `div`
/// (resized to the cell count) without storing face values. Same summation
/// order as divergence(assemble_fluxes(...)), hence bit-identical. Non-finite
/// inputs propagate into `div` rather than throwing.
FluxStats flux_divergence(const Field& u, const Field& v, const ModelParams& params, const Grid& grid,
                          std::vector<double>& div);

/// Discrete divergence of the fluxes: (F_high - F_low)/h summed over axes.
Field divergence(const FaceFluxes& fluxes, const Grid& grid);

/// Divergence of the fluxes plus the logistic source mu (u - u^2).
Field rhs_u(const State& state, const ModelParams& params, const Grid& grid);

/// Same as rhs_u, reusing fluxes already assembled for this state.
Field rhs_u(const State& state, const ModelParams& params, const Grid& grid, const FaceFluxes& fluxes);

/// Neumann Laplacian (reflected ghost cells) of v, minus v, plus u.
Field rhs_v(const State& state, const Grid& grid);

/// Neumann 3/5-point Laplacian alone.
Field laplacian(const Field& f, const Grid& grid);

}  // namespace kelsim::ops
