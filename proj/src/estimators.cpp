#include <algorithm>
#include <cmath>

#include "kelsim/diagnostics.hpp"
#include "kelsim/operators.hpp"
#include "kelsim/rng.hpp"

namespace kelsim::diag {

namespace {

enum Family : std::uint64_t { kConstants = 1, kBumps = 2, kNoise = 3, kSpikes = 4, kForcing = 5 };

CounterRng member_rng(std::uint64_t seed, Family family, std::uint64_t k) {
    return CounterRng(derive_seed(derive_seed(seed, family), k));
}

initial::Gaussian random_gaussian(CounterRng& rng, const Grid& grid, double w_lo, double w_hi) {
    initial::Gaussian g;
    g.amplitude = rng.uniform(0.5, 2.0);
    g.center[0] = rng.uniform(0.0, grid.length(0));
    g.center[1] = grid.dim() == 2 ? rng.uniform(0.0, grid.length(1)) : 0.0;
    g.width = rng.uniform(w_lo, w_hi);
    return g;
}

double min_length(const Grid& grid) {
    return grid.dim() == 1 ? grid.length(0) : std::min(grid.length(0), grid.length(1));
}

}  // namespace

std::vector<Field> gn_corpus(const GnCorpusSpec& spec, const Grid& grid) {
    if (spec.constants < 0 || spec.bumps < 0 || spec.noise < 0 || spec.spikes < 0)
        throw ConfigError("corpus counts must be >= 0");
    std::vector<Field> out;
    for (int k = 0; k < spec.constants; ++k)
        out.push_back(make_initial(grid, initial::Constant{1.0 + k}));
    const double len = min_length(grid);
    for (int k = 0; k < spec.bumps; ++k) {
        auto rng = member_rng(spec.seed, kBumps, static_cast<std::uint64_t>(k));
        out.push_back(make_initial(grid, random_gaussian(rng, grid, 0.05 * len, 0.3 * len)));
    }
    for (int k = 0; k < spec.noise; ++k) {
        auto rng = member_rng(spec.seed, kNoise, static_cast<std::uint64_t>(k));
        initial::FilteredNoise n;
        n.seed = rng.next_u64();
        n.amplitude = rng.uniform(0.5, 2.0);
        n.cutoff = 1 + static_cast<int>(rng.next_u64() % 16);
        out.push_back(make_initial(grid, n));
    }
    const double h = grid.min_spacing();
    for (int k = 0; k < spec.spikes; ++k) {
        auto rng = member_rng(spec.seed, kSpikes, static_cast<std::uint64_t>(k));
        out.push_back(make_initial(grid, random_gaussian(rng, grid, 0.5 * h, 2.0 * h)));
    }
    return out;
}

double estimate_cgn(const GnCorpusSpec& spec, double p, double theta, const Grid& grid) {
    double best = 0.0;
    std::size_t used = 0;
    for (const Field& f : gn_corpus(spec, grid)) {
        // A spike narrower than a cell can underflow to zero everywhere.
        if (f.max() <= 0.0) continue;
        best = std::max(best, gn_ratio(f, p, theta, grid));
        ++used;
    }
    if (used == 0) throw DegenerateError("estimate_cgn: corpus has no nonzero member");
    return best;
}

std::optional<double> maxreg_ratio(std::span<const Field> forcing, double gamma, double horizon,
                                   const Grid& grid) {
    if (!(gamma > 1.0)) throw DomainError("maximal-regularity ratio requires gamma > 1");
    if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
    if (forcing.empty()) throw DomainError("forcing needs at least one segment");
    for (const Field& g : forcing) check_field(g, grid, "forcing");

    const double h = grid.min_spacing();
    const double dt_stable = 0.25 * h * h / (2.0 * grid.dim());
    const double seg_len = horizon / static_cast<double>(forcing.size());
    const auto per_seg = static_cast<std::size_t>(std::ceil(seg_len / dt_stable));
    const double dt = seg_len / static_cast<double>(per_seg);

    // Right side: g is constant on each segment, so the time integral is exact.
    double rhs = 0.0;
    for (std::size_t k = 0; k < forcing.size(); ++k) {
        const double a = static_cast<double>(k) * seg_len - horizon;
        const double b = static_cast<double>(k + 1) * seg_len - horizon;
        const double gnorm = std::pow(lp_norm(forcing[k], gamma, grid), gamma);
        rhs += gnorm * (std::exp(gamma * b) - std::exp(gamma * a)) / gamma;
    }
    if (!(rhs > 0.0)) return std::nullopt;

    Field v(grid.cell_count(), 0.0);
    auto integrand = [&](double s) { return std::exp(gamma * (s - horizon)) * std::pow(w2_norm(v, gamma, grid), gamma); };
    double lhs = 0.0;
    double prev = integrand(0.0);
    double t = 0.0;
    for (std::size_t k = 0; k < forcing.size(); ++k) {
        const Field& g = forcing[k];
        for (std::size_t n = 0; n < per_seg; ++n) {
            const Field lap = ops::laplacian(v, grid);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += dt * (lap[i] - v[i] + g[i]);
            t = (static_cast<double>(k) * static_cast<double>(per_seg) + static_cast<double>(n + 1)) * dt;
            const double cur = integrand(t);
            if (!std::isfinite(cur)) throw NumericError("maximal-regularity integration became non-finite");
            lhs += 0.5 * dt * (prev + cur);
            prev = cur;
        }
    }
    return lhs / rhs;
}

std::vector<Field> lambda0_forcing(const Grid& grid, std::uint64_t seed, int index, double horizon) {
    const int segments = std::max(1, static_cast<int>(std::ceil(horizon)));
    auto rng = member_rng(seed, kForcing, static_cast<std::uint64_t>(index));
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(segments));
    for (int s = 0; s < segments; ++s) {
        Field f(grid.cell_count());
        CounterRng noise(rng.next_u64());
        for (auto& x : f.values) x = noise.uniform(-1.0, 1.0);
        smooth_121(f, grid, 2 + static_cast<int>(rng.next_u64() % 11));
        double peak = 0.0;
        for (double x : f.values) peak = std::max(peak, std::abs(x));
        const double amp = rng.uniform(0.5, 2.0);
        const double offset = amp * rng.uniform(-1.0, 1.0);
        for (auto& x : f.values) x = offset + (peak > 0.0 ? amp * x / peak : 0.0);
        out.push_back(std::move(f));
    }
    return out;
}

double estimate_lambda0(double gamma, const Grid& grid, int trial_count, std::uint64_t seed, double horizon) {
    if (trial_count < 1) throw ConfigError("estimate_lambda0 needs at least one trial");
    double best = 0.0;
    bool any = false;
    for (int k = 0; k < trial_count; ++k) {
        const auto forcing = lambda0_forcing(grid, seed, k, horizon);
        if (auto r = maxreg_ratio(forcing, gamma, horizon, grid)) {
            best = std::max(best, *r);
            any = true;
        }
    }
    if (!any) throw DegenerateError("estimate_lambda0: every trial had zero forcing");
    return best;
}

}  // namespace kelsim::diag
