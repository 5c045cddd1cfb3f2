#pragma once

#include <string>
#include <vector>

#include "kelsim/core.hpp"
#include "kelsim/diagnostics.hpp"
#include "kelsim/operators.hpp"

namespace kelsim::integ {

struct StepControl {
    double safety = 0.25;
    double dt_min = 1e-12;
    double dt_max = 0.1;
    double t_end = 1.0;
    /// Blow-up is declared once max u exceeds blowup_factor * max(1, max u0).
    double blowup_factor = 1e6;

    void validate() const;
};

enum class Verdict { CompletedBounded, NumericalBlowup, Aborted };

std::string to_string(Verdict v);

struct RunOutcome {
    Verdict verdict = Verdict::Aborted;
    /// Detection time for NumericalBlowup, failure time for Aborted.
    double t_event = 0.0;
    std::string reason;
    State final_state;
    std::vector<diag::DiagnosticsRecord> records;
};

struct DtResult {
    double dt;
    /// Stability bound before clamping to dt_max and t_end.
    double stability_dt;
    /// True when the stability bound itself fell below dt_min.
    bool below_min;
};

/**
 * safety * min of
 *   h^2 / (2d D_max)      u-diffusion
 *   h^2 / (2d)            v-diffusion
 *   h / (d W_max)         chemotactic advection (if W_max > 0)
 *   1 / (mu (2 u_max + 1)) logistic sink (if mu > 0)
 * then clamped to [dt_min, dt_max] and to t_end - t.
 */
DtResult stable_dt(const State& state, const ModelParams& params, const Grid& grid, const StepControl& control);

/// Same, from fluxes already assembled for this state.
DtResult stable_dt(const State& state, const ModelParams& params, const Grid& grid, const StepControl& control,
                   const ops::FaceFluxes& fluxes);

/// Forward Euler step. Throws StateError if min u drops below -kTolNeg and
/// NumericError on non-finite values.
State step(const State& state, const ModelParams& params, const Grid& grid, double dt);

struct RunOptions {
    /// Recording cadence in simulation time; first and last states always recorded.
    double record_every = 0.1;
    /// Extra L^p exponents stored in every record.
    std::vector<double> extra_p;
    /// Hard cap on the number of steps (0 = none); hitting it aborts.
    std::uint64_t max_steps = 0;
};

/// Advances to control.t_end. Deterministic: identical inputs give bit-identical outcomes.
RunOutcome run(const State& initial, const ModelParams& params, const Grid& grid, const StepControl& control,
               const RunOptions& options);

/// Fills u2_window on records whose window [t, t + tau] fits in the trajectory.
void attach_u2_windows(std::vector<diag::DiagnosticsRecord>& records, double tau);

}  // namespace kelsim::integ
