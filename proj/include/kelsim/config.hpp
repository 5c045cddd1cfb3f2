#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kelsim/core.hpp"
#include "kelsim/diagnostics.hpp"
#include "kelsim/integrator.hpp"

namespace kelsim {

/// Parameters a sweep axis may vary.
enum class SweepParam { MExp, Mu, Chi, CD };

std::string to_string(SweepParam p);
/// Accepts m_exp (or m), mu, chi, c_d. Throws ConfigError otherwise.
SweepParam parse_sweep_param(std::string_view name);
/// Sets the named parameter on a copy of params.
ModelParams with_param(ModelParams params, SweepParam which, double value);
double get_param(const ModelParams& params, SweepParam which);

struct SweepAxis {
    SweepParam param = SweepParam::MExp;
    std::vector<double> values;
};

/**
 * Everything a run, sweep or estimate needs. Produced by parse_config from a
 * flat `key = value` text; see README for the key list and defaults.
 */
struct Config {
    ModelParams params;

    std::array<std::size_t, 2> n_cells{64, 64};
    std::array<double, 2> lengths{8.0, 8.0};

    integ::StepControl control{0.25, 1e-12, 0.1, 10.0, 1e6};
    double record_every = 0.1;
    std::vector<double> extra_p;

    InitialData u0 = initial::FilteredNoise{1, 2.0, 8};
    InitialData v0 = initial::Constant{0.0};
    /// When set, u0 is rescaled to this total mass.
    std::optional<double> u0_mass;

    // sweep
    std::optional<SweepAxis> axis1;
    std::optional<SweepAxis> axis2;
    int workers = 1;
    double plateau_window = 0.25;
    double plateau_ratio = 1.05;

    // theory
    std::vector<double> theory_p{2.0, 3.0};

    // estimators
    double gn_p = 2.0;
    double gn_theta = 1.0;
    diag::GnCorpusSpec gn_corpus;
    double lambda0_gamma = 2.0;
    int lambda0_trials = 8;
    std::uint64_t lambda0_seed = 7;
    double lambda0_horizon = 2.0;

    /// Grid for the simulator; throws ConfigError for dim outside {1, 2}.
    [[nodiscard]] Grid grid() const;
    /// Initial state on grid(), with the optional mass rescaling applied.
    [[nodiscard]] State initial_state() const;
    [[nodiscard]] integ::RunOptions run_options() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, malformed
/// values and violated invariants raise ConfigError with the line number.
Config parse_config(std::string_view text);

Config load_config(const std::string& path);

/// Parses "constant(c)", "gaussian(A, cx, cy, w)" (or "gaussian(A, cx, w)")
/// and "noise(seed, A, passes)".
InitialData parse_initial(std::string_view text);

}  // namespace kelsim
