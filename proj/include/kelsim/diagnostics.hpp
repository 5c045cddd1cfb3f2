#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kelsim/core.hpp"

namespace kelsim::diag {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Compensated (Neumaier) sum in index order.
double stable_sum(std::span<const double> xs);

/// (sum |f|^p vol)^(1/p); p = kInf gives max |f|. Throws DomainError for p < 1.
double lp_norm(const Field& f, double p, const Grid& grid);

/// sum f vol, summed in index order with compensation.
double mass(const Field& f, const Grid& grid);

/// L2 norm of the face-difference gradient.
double grad_l2(const Field& f, const Grid& grid);

struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    /// (p, |u|_p) for each extra exponent requested, in request order.
    std::vector<std::pair<double, double>> lp_norms;
    double linf_u = 0.0;
    double min_u = 0.0;
    double l2_u = 0.0;
    double l2_v = 0.0;
    /// int_t^{t+tau} int u^2 when the window fits in the trajectory.
    std::optional<double> u2_window;
};

DiagnosticsRecord make_record(const State& s, const Grid& grid, std::span<const double> extra_p);

struct WindowValue {
    double t;
    double value;
    bool truncated;  ///< window ran past the last record
};

/**
 * Trapezoid-in-time integral of |u|_2^2 over [t_k, t_k + tau] for every
 * record k, interpolating linearly at the right end. Windows that run past
 * the last record are cut there and flagged.
 */
std::vector<WindowValue> u2_window_integral(std::span<const DiagnosticsRecord> records, double tau);

/// tau = min{1, T/6}.
double window_width(double horizon);

/// Exponent a = (N/theta - N/p) / (1 - N/2 + N/theta) of the GN inequality.
double gn_exponent(int dim, double p, double theta);

/**
 * |u|_p / (|grad u|_2^a |u|_theta^(1-a) + |u|_theta), a lower witness for C_GN.
 * Throws DomainError when a is not in (0, 1) and DegenerateError for a zero
 * denominator.
 */
double gn_ratio(const Field& f, double p, double theta, const Grid& grid);

/// Seeded family of test fields for the C_GN estimate. Member k of each family
/// depends only on (seed, family, k), so raising a count only adds members.
struct GnCorpusSpec {
    std::uint64_t seed = 1;
    int constants = 4;
    int bumps = 16;
    int noise = 16;
    int spikes = 8;
};

std::vector<Field> gn_corpus(const GnCorpusSpec& spec, const Grid& grid);

/// Max of gn_ratio over the corpus: a lower-bound estimate of C_GN.
double estimate_cgn(const GnCorpusSpec& spec, double p, double theta, const Grid& grid);

/// Discrete W^{2,gamma} norm: L^gamma norms of the values, face gradients and
/// 3/5-point second differences, summed.
double w2_norm(const Field& f, double gamma, const Grid& grid);

/**
 * Left/right ratio of the maximal-regularity inequality for one forcing:
 * v_t - lap v + v = g with v(0) = 0 on [0, horizon], g piecewise constant on
 * equal sub-intervals (one Field each). Weights e^{gamma s} are applied as
 * e^{gamma (s - horizon)}. Returns nothing when the right side vanishes.
 */
std::optional<double> maxreg_ratio(std::span<const Field> forcing, double gamma, double horizon,
                                   const Grid& grid);

/// Max of maxreg_ratio over seeded random forcings: a lower-bound estimate of
/// lambda0. Throws NumericError if the integration goes non-finite.
double estimate_lambda0(double gamma, const Grid& grid, int trial_count, std::uint64_t seed, double horizon);

/// The seeded forcing used by trial `index` of estimate_lambda0.
std::vector<Field> lambda0_forcing(const Grid& grid, std::uint64_t seed, int index, double horizon);

}  // namespace kelsim::diag
