#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kelsim/theory.hpp"

using namespace kelsim;
using namespace kelsim::theory;

namespace {

ModelParams params(int dim, double chi, double mu, double lambda0 = 1.0) {
    ModelParams p;
    p.dim = dim;
    p.chi = chi;
    p.mu = mu;
    p.lambda0 = lambda0;
    return p;
}

// Independent oracle: coarse log-spaced scan followed by ternary refinement
// directly on y, evaluated from the textbook form of H.
double oracle_min(double p, double chi, double lambda0, double* arg = nullptr) {
    const double b1 = std::pow((p + 1.0) / p, -p) * std::pow((p - 1.0) / p, p + 1.0) / (p + 1.0);
    auto h = [&](double y) { return y + b1 * std::pow(y, -p) * std::pow(chi, p + 1.0) * lambda0; };
    double best = 0.0;
    double best_y = 0.0;
    for (int k = 0; k <= 4000; ++k) {
        const double y = chi * std::pow(10.0, -8.0 + 10.0 * k / 4000.0);
        const double v = h(y);
        if (k == 0 || v < best) {
            best = v;
            best_y = y;
        }
    }
    double lo = best_y / 1.01;
    double hi = best_y * 1.01;
    for (int it = 0; it < 300; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (h(m1) < h(m2)) hi = m2;
        else lo = m1;
    }
    if (arg) *arg = 0.5 * (lo + hi);
    return h(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("critical exponent examples") {
    CHECK(critical_exponent(params(3, 1.0, 0.0)).value.value() == 4.0 / 3.0);
    CHECK(critical_exponent(params(2, 1.0, 0.0)).value.value() == 1.0);
    CHECK(critical_exponent(params(1, 1.0, 0.0)).value.value() == 0.0);
    CHECK(critical_exponent(params(2, 1.0, 2.0)).unconstrained());
    CHECK(critical_exponent(params(2, 1.0, 1.0)).unconstrained());
    CHECK(critical_exponent(params(2, 1.0, 0.5)).value.value() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("critical exponent is monotone") {
    double prev = critical_exponent(params(2, 1.0, 0.0, 2.0)).value.value();
    for (double mu = 0.1; mu < 2.0; mu += 0.1) {
        const double m = critical_exponent(params(2, 1.0, mu, 2.0)).value.value();
        CHECK(m < prev);
        prev = m;
    }
    const double a = critical_exponent(params(2, 1.0, 0.5, 2.0)).value.value();
    const double b = critical_exponent(params(2, 1.5, 0.5, 2.0)).value.value();
    const double c = critical_exponent(params(2, 1.0, 0.5, 3.0)).value.value();
    CHECK(b > a);
    CHECK(c > a);
}

TEST_CASE("unconstrained exactly when mu reaches chi max(1, lambda0)") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> chi_d(0.01, 10.0), lam_d(0.01, 10.0), mu_d(0.0, 20.0);
    std::uniform_int_distribution<int> dim_d(1, 4);
    for (int k = 0; k < 1000; ++k) {
        const ModelParams p = params(dim_d(gen), chi_d(gen), mu_d(gen), lam_d(gen));
        const bool expect = p.mu >= p.chi * std::max(1.0, p.lambda0);
        REQUIRE(critical_exponent(p).unconstrained() == expect);
    }
}

TEST_CASE("C_D threshold examples") {
    CHECK(cd_threshold(params(2, 1.0, 0.0), 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    ModelParams p = params(2, 1.0, 0.0);
    p.c_gn = 3.0;
    CHECK(cd_threshold(p, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(cd_threshold(params(1, 1.0, 0.0), 0.0), DegenerateError);
}

TEST_CASE("regime classification") {
    ModelParams p = params(3, 1.0, 0.0);
    p.m_exp = 1.5;
    CHECK(classify_regime(p, 0.0).status == RegimeStatus::TheoremBoundedI);

    p.m_exp = 4.0 / 3.0;
    p.c_d = 10.0 * cd_threshold(p, 1.0);
    CHECK(classify_regime(p, 1.0).status == RegimeStatus::TheoremBoundedII);
    p.c_d = 0.5 * cd_threshold(p, 1.0);
    CHECK(classify_regime(p, 1.0).status == RegimeStatus::NotCovered);

    p.m_exp = 1.2;
    p.c_d = 0.01;
    CHECK(classify_regime(p, 1.0).status == RegimeStatus::NotCovered);
    CHECK_FALSE(classify_regime(p, 1.0).detail.empty());

    CHECK(to_string(RegimeStatus::TheoremBoundedI) == "TheoremBounded(I)");
    CHECK(to_string(RegimeStatus::TheoremBoundedII) == "TheoremBounded(II)");
    CHECK(to_string(RegimeStatus::NotCovered) == "NotCovered");
}

TEST_CASE("with mu = 0 case I holds iff m > 2 - 2/N") {
    for (int n = 1; n <= 4; ++n) {
        const double mc = 2.0 - 2.0 / n;
        for (double dm : {-0.5, -0.01, 0.01, 0.5}) {
            ModelParams p = params(n, 1.0, 0.0);
            p.m_exp = mc + dm;
            p.c_d = 1e-3;
            CHECK((classify_regime(p, 1.0).status == RegimeStatus::TheoremBoundedI) == (dm > 0));
        }
    }
}

TEST_CASE("logistic damping admits every exponent") {
    ModelParams p = params(2, 1.0, 2.0);
    p.m_exp = 0.2;
    CHECK(classify_regime(p, 100.0).status == RegimeStatus::TheoremBoundedI);
}

TEST_CASE("B1 values") {
    CHECK(b1_constant(1.0) == 0.0);
    CHECK(b1_constant(2.0) == doctest::Approx(1.0 / 54.0).epsilon(1e-14));
    CHECK(std::abs(b1_constant(2.0) - 1.0 / 54.0) <= 1e-14);
    CHECK(b1_constant(3.0) == doctest::Approx(1.0 / 48.0).epsilon(1e-14));
    CHECK_THROWS_AS(b1_constant(0.5), DomainError);
}

TEST_CASE("lemma_min spot values") {
    const auto a = lemma_min(2.0, 1.0, 1.0);
    CHECK(std::abs(a.minimizer - 1.0 / 3.0) <= 1e-10);
    CHECK(std::abs(a.minimum - 0.5) <= 1e-10);
    const auto b = lemma_min(2.0, 2.0, 1.0);
    CHECK(std::abs(b.minimizer - 2.0 / 3.0) <= 1e-10);
    CHECK(std::abs(b.minimum - 1.0) <= 1e-10);
    const auto c = lemma_min(1.0, 5.0, 3.0);
    CHECK(c.minimum == 0.0);
    CHECK(c.minimizer == 0.0);
    CHECK_THROWS_AS(lemma_min(0.9, 1.0, 1.0), DomainError);
}

TEST_CASE("lemma_min agrees with an independent minimiser on the lattice") {
    for (double p : {1.5, 2.0, 3.0, 5.0, 10.0})
        for (double chi : {0.1, 1.0, 10.0})
            for (double lam : {0.5, 1.0, 4.0}) {
                double arg = 0.0;
                const double ref = oracle_min(p, chi, lam, &arg);
                const auto got = lemma_min(p, chi, lam);
                CAPTURE(p);
                CAPTURE(chi);
                CAPTURE(lam);
                CHECK(std::abs(got.minimum - ref) <= 1e-8 * ref);
                CHECK(std::abs(got.minimizer - arg) <= 1e-5 * arg);
                CHECK(h_tilde(got.minimizer, p, chi, lam) == doctest::Approx(got.minimum).epsilon(1e-12));
            }
}

TEST_CASE("lemma_min is homogeneous in chi") {
    for (double p : {1.5, 3.0, 7.0}) {
        const double base = lemma_min(p, 1.3, 2.0).minimum;
        for (double c : {0.01, 0.5, 4.0, 100.0})
            CHECK(lemma_min(p, c * 1.3, 2.0).minimum == doctest::Approx(c * base).epsilon(1e-12));
    }
}

TEST_CASE("h function examples") {
    ModelParams p = params(2, 1.0, 0.0);
    CHECK(h_function(1.0, p, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(h_function(2.5, p, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
    p.c_d = 1.0 / 3.0;
    CHECK(h_function(1.0, p, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    ModelParams q = params(3, 2.0, 0.0, 1.5);
    q.c_gn = 0.7;
    q.c_d = cd_threshold(q, 4.0);
    const double ratio = q.c_d / (q.c_gn * 5.0);
    CHECK(h_function(1.0, q, 4.0) == doctest::Approx(ratio).epsilon(1e-13));
}

TEST_CASE("h decreases for p >= 1") {
    ModelParams p = params(3, 1.0, 0.0, 2.0);
    double prev = h_function(1.0, p, 1.0);
    for (double x = 1.25; x < 50.0; x += 0.25) {
        const double h = h_function(x, p, 1.0);
        CHECK(h < prev);
        prev = h;
    }
}

TEST_CASE("find_p0 examples") {
    const ModelParams p = params(2, 1.0, 0.0);
    const double p0 = find_p0(p, 0.0);
    CHECK(std::abs(p0 - 4.0) <= 1e-6);
    CHECK(h_function(p0, p, 0.0) > 0.0);

    ModelParams weak = p;
    weak.c_d = 0.1;
    CHECK_THROWS_AS(find_p0(weak, 0.0), PreconditionError);
    weak.c_d = 1.0 / 3.0;
    CHECK_THROWS_AS(find_p0(weak, 0.0), PreconditionError);
}

TEST_CASE("find_p0 postcondition over random valid inputs") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    std::uniform_int_distribution<int> dim_d(2, 4);
    int checked = 0;
    for (int k = 0; k < 300; ++k) {
        ModelParams p = params(dim_d(gen), u(gen), 0.0, u(gen));
        p.c_gn = u(gen);
        const double l1 = u(gen);
        p.c_d = cd_threshold(p, l1) * (1.0 + u(gen));
        const double p0 = find_p0(p, l1);
        REQUIRE(p0 > 1.0);
        REQUIRE(h_function(p0, p, l1) > 0.0);
        ++checked;
    }
    CHECK(checked == 300);
}
