#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kelsim/errors.hpp"

namespace kelsim {

/// Roundoff allowance below zero for the cell density.
inline constexpr double kTolNeg = 1e-10;

/**
 * Physical and analytical constants of the chemotaxis model
 *
 *     u_t = div(D(u) grad u) - chi div(u grad v) + mu (u - u^2)
 *     v_t = lap v - v + u
 *
 * with D(u) = c_d (u + 1)^(m_exp - 1). lambda0 and c_gn are the
 * maximal-regularity and Gagliardo-Nirenberg constants used by the
 * boundedness criteria; they are either supplied or estimated.
 */
struct ModelParams {
    int dim = 2;
    double chi = 1.0;
    double mu = 0.0;
    double c_d = 1.0;
    double m_exp = 2.0;
    double lambda0 = 1.0;
    double c_gn = 1.0;

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

/// Uniform cell-centred mesh on [0, L0] (x [0, L1]) with reflecting faces.
class Grid {
public:
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] std::size_t cells(int axis) const { return n_[axis]; }
    [[nodiscard]] double length(int axis) const { return len_[axis]; }
    [[nodiscard]] double spacing(int axis) const { return h_[axis]; }
    [[nodiscard]] double min_spacing() const;

    [[nodiscard]] std::size_t cell_count() const { return n_[0] * n_[1]; }
    [[nodiscard]] double cell_volume() const { return h_[0] * h_[1]; }
    [[nodiscard]] double volume() const { return len_[0] * len_[1]; }

    /// Linear index, x fastest.
    [[nodiscard]] std::size_t index(std::size_t ix, std::size_t iy = 0) const { return iy * n_[0] + ix; }
    /// Cell-centre coordinate along an axis.
    [[nodiscard]] double center(int axis, std::size_t i) const {
        return (static_cast<double>(i) + 0.5) * h_[axis];
    }

    friend Grid make_grid(int dim, std::span<const std::size_t> n_cells, std::span<const double> lengths);
    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int dim_ = 1;
    // Unused second axis of a 1D grid has one cell of unit length.
    std::array<std::size_t, 2> n_{1, 1};
    std::array<double, 2> len_{1.0, 1.0};
    std::array<double, 2> h_{1.0, 1.0};
};

/// Builds a grid; dim in {1, 2}, at least 4 cells and a positive length per axis.
Grid make_grid(int dim, std::span<const std::size_t> n_cells, std::span<const double> lengths);

inline Grid make_grid(int dim, std::initializer_list<std::size_t> n_cells, std::initializer_list<double> lengths) {
    return make_grid(dim, std::span<const std::size_t>(n_cells.begin(), n_cells.size()),
                     std::span<const double>(lengths.begin(), lengths.size()));
}

/// One real value per cell.
struct Field {
    std::vector<double> values;

    Field() = default;
    explicit Field(std::size_t n, double fill = 0.0) : values(n, fill) {}
    explicit Field(std::vector<double> v) : values(std::move(v)) {}

    [[nodiscard]] std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    [[nodiscard]] std::span<const double> view() const { return values; }

    [[nodiscard]] double min() const;
    [[nodiscard]] double max() const;
    [[nodiscard]] bool all_finite() const;

    friend bool operator==(const Field&, const Field&) = default;
};

/// Throws NumericError unless the field matches the grid and is finite.
void check_field(const Field& f, const Grid& grid, const char* what);

struct State {
    Field u;
    Field v;
    double t = 0.0;
    std::uint64_t step = 0;
    double last_dt = 0.0;
};

namespace initial {

struct Constant {
    double value = 1.0;
};

/// amplitude * exp(-|x - center|^2 / (2 width^2)); center[1] ignored in 1D.
struct Gaussian {
    double amplitude = 1.0;
    std::array<double, 2> center{0.5, 0.5};
    double width = 0.1;
};

/// Seeded white noise smoothed by `cutoff` passes of the 1-2-1 averaging
/// stencil, rescaled into [0, amplitude].
struct FilteredNoise {
    std::uint64_t seed = 0;
    double amplitude = 1.0;
    int cutoff = 8;
};

}  // namespace initial

using InitialData = std::variant<initial::Constant, initial::Gaussian, initial::FilteredNoise>;

void validate(const InitialData& spec);
std::string describe(const InitialData& spec);

/// Deterministic nonnegative field for the given initial-data description.
Field make_initial(const Grid& grid, const InitialData& spec);

/// In-place nearest-neighbour smoothing with reflecting boundaries.
void smooth_121(Field& f, const Grid& grid, int passes);

}  // namespace kelsim
