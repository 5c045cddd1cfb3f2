#include "kelsim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kelsim::theory {

namespace {

// 2 - 2/N, rounded once.
double classical_exponent(int n) { return static_cast<double>(2 * n - 2) / static_cast<double>(n); }

double sensitivity(const ModelParams& p) { return p.chi * std::max(1.0, p.lambda0); }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

// Golden-section search for the minimum of a unimodal f on [lo, hi], run in
// log(y) so that minimizers spanning many decades are located equally well.
template <class F>
double golden_section_log(F&& f, double lo, double hi, int iterations = 400) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(lo);
    double b = std::log(hi);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(std::exp(c));
    double fd = f(std::exp(d));
    for (int it = 0; it < iterations && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(std::exp(d));
        }
    }
    return std::exp(0.5 * (a + b));
}

}  // namespace

CriticalExponent critical_exponent(const ModelParams& params) {
    const double s = sensitivity(params);
    if (params.mu >= s) return {};
    const double ratio = s / (s - params.mu);
    const double n = params.dim;
    return {(2.0 * n - 2.0 * ratio) / n};
}

double cd_threshold(const ModelParams& params, double u0_l1) {
    if (params.dim == 1)
        throw DegenerateError("C_D threshold is 0 for N = 1 (2 - 2/N vanishes); the equality case gives no information");
    if (!(u0_l1 >= 0.0)) throw DomainError("initial mass must be >= 0");
    const double e = classical_exponent(params.dim);
    return params.c_gn * (1.0 + u0_l1) / 3.0 * e * e * sensitivity(params);
}

std::string to_string(RegimeStatus s) {
    switch (s) {
        case RegimeStatus::TheoremBoundedI: return "TheoremBounded(I)";
        case RegimeStatus::TheoremBoundedII: return "TheoremBounded(II)";
        case RegimeStatus::NotCovered: return "NotCovered";
    }
    return "?";
}

RegimeVerdict classify_regime(const ModelParams& params, double u0_l1) {
    params.validate();
    const auto crit = critical_exponent(params);
    if (crit.unconstrained()) {
        return {RegimeStatus::TheoremBoundedI,
                "mu = " + fmt(params.mu) + " >= chi*max{1,lambda0} = " + fmt(sensitivity(params)) +
                    ": every m qualifies"};
    }
    if (params.m_exp > *crit.value) {
        return {RegimeStatus::TheoremBoundedI, "m = " + fmt(params.m_exp) + " > m* = " + fmt(*crit.value)};
    }
    const double classical = classical_exponent(params.dim);
    std::string why = "m = " + fmt(params.m_exp) + " <= m* = " + fmt(*crit.value);
    if (std::abs(params.m_exp - classical) <= kTolEq) {
        if (params.dim == 1) return {RegimeStatus::NotCovered, why + "; equality case degenerate for N = 1"};
        const double thr = cd_threshold(params, u0_l1);
        if (params.c_d > thr) {
            return {RegimeStatus::TheoremBoundedII,
                    "m = 2 - 2/N and C_D = " + fmt(params.c_d) + " > threshold " + fmt(thr)};
        }
        why += "; m = 2 - 2/N but C_D = " + fmt(params.c_d) + " <= threshold " + fmt(thr);
    } else {
        why += " and m != 2 - 2/N = " + fmt(classical);
    }
    return {RegimeStatus::NotCovered, why};
}

double b1_constant(double p) {
    if (!(p >= 1.0)) throw DomainError("B1 requires p >= 1");
    return std::pow((p + 1.0) / p, -p) * std::pow((p - 1.0) / p, p + 1.0) / (p + 1.0);
}

double h_tilde(double y, double p, double chi, double lambda0) {
    return y + b1_constant(p) * std::pow(y, -p) * std::pow(chi, p + 1.0) * lambda0;
}

LemmaMin lemma_min_closed_form(double p, double chi, double lambda0) {
    if (!(p >= 1.0)) throw DomainError("lemma_min requires p >= 1");
    if (!(chi > 0.0) || !(lambda0 > 0.0)) throw DomainError("lemma_min requires chi > 0 and lambda0 > 0");
    if (p == 1.0) return {0.0, 0.0};
    const double y = std::pow(b1_constant(p) * lambda0 * p, 1.0 / (p + 1.0)) * chi;
    const double min = (p - 1.0) / p * std::pow(lambda0, 1.0 / (p + 1.0)) * chi;
    return {y, min};
}

LemmaMin lemma_min(double p, double chi, double lambda0) {
    const LemmaMin closed = lemma_min_closed_form(p, chi, lambda0);
    if (p == 1.0) return closed;

    const double hi = 10.0 * chi * std::max(1.0, lambda0);
    const double lo = 1e-14 * chi;
    auto f = [&](double y) { return h_tilde(y, p, chi, lambda0); };
    const double y_num = golden_section_log(f, lo, hi);
    const double min_num = f(y_num);
    const double rel = std::abs(min_num - closed.minimum) / std::abs(closed.minimum);
    if (rel > 1e-8) {
        throw ConsistencyError("lemma_min: closed form " + fmt(closed.minimum) + " vs numerical " + fmt(min_num) +
                               " (relative mismatch " + fmt(rel) + ")");
    }
    return closed;
}

double h_function(double p, const ModelParams& params, double u0_l1) {
    if (!(p >= 1.0)) throw DomainError("h(p) requires p >= 1");
    const double n = params.dim;
    const double shift = 1.0 - 2.0 / n + p;
    return 4.0 * params.c_d / (params.c_gn * (1.0 + u0_l1)) - shift * shift / p * sensitivity(params);
}

double find_p0(const ModelParams& params, double u0_l1) {
    params.validate();
    const double threshold = params.dim == 1 ? 0.0 : cd_threshold(params, u0_l1);
    if (!(params.c_d > threshold)) {
        throw PreconditionError("find_p0: C_D = " + fmt(params.c_d) + " does not exceed the threshold " +
                                fmt(threshold));
    }
    auto h = [&](double p) { return h_function(p, params, u0_l1); };
    const double h1 = h(1.0);
    if (!(h1 > 0.0)) throw PreconditionError("find_p0: h(1) = " + fmt(h1) + " is not positive");

    const double target = std::min(kDeltaH, 0.5 * h1);
    if (h(kPMax) >= target) return kPMax;
    double lo = 1.0;
    double hi = kPMax;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) >= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace kelsim::theory
