#pragma once

#include <optional>
#include <string>

#include "kelsim/core.hpp"

namespace kelsim::theory {

/// Absolute tolerance for the equality m = 2 - 2/N in the second case.
inline constexpr double kTolEq = 1e-12;
/// Upper end of the search interval of find_p0.
inline constexpr double kPMax = 1e6;
/// Margin required of h at the returned p0.
inline constexpr double kDeltaH = 1e-9;

/// Lower bound on m above which boundedness holds. Empty when every m
/// qualifies (mu >= chi * max{1, lambda0}).
struct CriticalExponent {
    std::optional<double> value;

    [[nodiscard]] bool unconstrained() const { return !value.has_value(); }
    /// True when m lies strictly above the exponent.
    [[nodiscard]] bool admits(double m) const { return !value || m > *value; }
};

CriticalExponent critical_exponent(const ModelParams& params);

/// C_GN (1 + |u0|_1) / 3 * (2 - 2/N)^2 * max{1, lambda0} * chi.
/// Throws DegenerateError for N = 1, where 2 - 2/N vanishes.
double cd_threshold(const ModelParams& params, double u0_l1);

enum class RegimeStatus { TheoremBoundedI, TheoremBoundedII, NotCovered };

struct RegimeVerdict {
    RegimeStatus status = RegimeStatus::NotCovered;
    std::string detail;

    [[nodiscard]] bool theorem_bounded() const { return status != RegimeStatus::NotCovered; }
};

/// "TheoremBounded(I)", "TheoremBounded(II)" or "NotCovered".
std::string to_string(RegimeStatus s);

/// NotCovered means no boundedness guarantee, not a blow-up prediction.
RegimeVerdict classify_regime(const ModelParams& params, double u0_l1);

/// B1(p) = 1/(p+1) * ((p+1)/p)^(-p) * ((p-1)/p)^(p+1); p >= 1.
double b1_constant(double p);

/// H(y) = y + B1(p) y^(-p) chi^(p+1) lambda0, the function minimised by lemma_min.
double h_tilde(double y, double p, double chi, double lambda0);

struct LemmaMin {
    double minimizer;  ///< 0 for p = 1 (infimum, not attained)
    double minimum;
};

/**
 * Closed-form minimum of h_tilde over y > 0:
 *   y* = (B1 lambda0 p)^(1/(p+1)) chi,  min = (p-1)/p * lambda0^(1/(p+1)) * chi.
 * For p > 1 the result is cross-checked against golden_section_min; a relative
 * mismatch above 1e-8 raises ConsistencyError.
 */
LemmaMin lemma_min(double p, double chi, double lambda0);

/// Closed form only, without the numerical cross-check.
LemmaMin lemma_min_closed_form(double p, double chi, double lambda0);

/// h(p) = 4 C_D / (C_GN (1 + |u0|_1)) - (1 - 2/N + p)^2 / p * max{1, lambda0} * chi.
double h_function(double p, const ModelParams& params, double u0_l1);

/**
 * Largest p0 in (1, kPMax] with h(p0) >= kDeltaH (bisection on the decreasing
 * branch of h). Throws PreconditionError when the C_D threshold condition fails.
 */
double find_p0(const ModelParams& params, double u0_l1);

}  // namespace kelsim::theory
