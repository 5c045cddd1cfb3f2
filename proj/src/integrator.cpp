#include "kelsim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace kelsim::integ {

void StepControl::validate() const {
    if (!(safety > 0.0 && safety <= 1.0)) throw ConfigError("safety must be in (0, 1]");
    if (!(dt_min > 0.0)) throw ConfigError("dt_min must be > 0");
    if (!(dt_max > dt_min)) throw ConfigError("dt_max must exceed dt_min");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be > 0");
    if (!(blowup_factor > 0.0)) throw ConfigError("blowup_factor must be > 0");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::CompletedBounded: return "CompletedBounded";
        case Verdict::NumericalBlowup: return "NumericalBlowup";
        case Verdict::Aborted: return "Aborted";
    }
    return "?";
}

namespace {

// Short %g rendering for error messages; std::to_string rounds tiny values to 0.
std::string format_value(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

DtResult dt_from(double u_max, double d_max, double w_max, double t, const ModelParams& params, const Grid& grid,
                 const StepControl& control) {
    const double h = grid.min_spacing();
    const double d = grid.dim();
    double bound = h * h / (2.0 * d);
    if (d_max > 0.0) bound = std::min(bound, h * h / (2.0 * d * d_max));
    if (w_max > 0.0) bound = std::min(bound, h / (d * w_max));
    if (params.mu > 0.0) bound = std::min(bound, 1.0 / (params.mu * (2.0 * u_max + 1.0)));
    bound *= control.safety;

    DtResult r{};
    r.stability_dt = bound;
    r.below_min = bound < control.dt_min;
    double dt = std::clamp(bound, control.dt_min, control.dt_max);
    const double remaining = control.t_end - t;
    if (dt >= remaining * (1.0 - 1e-12)) dt = remaining;
    r.dt = dt;
    return r;
}

// Scratch buffers reused across steps.
struct Workspace {
    std::vector<double> div;
    Field lap;
};

// Forward Euler from s into next, given the divergence already in ws.div.
void advance_into(const State& s, State& next, const ModelParams& params, const Grid& grid, double dt,
                  Workspace& ws) {
    ws.lap = ops::laplacian(s.v, grid);
    const std::size_t n = s.u.size();
    next.u.values.resize(n);
    next.v.values.resize(n);
    const double mu = params.mu;
    double umin = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = s.u[i];
        double ru = ws.div[i];
        if (mu != 0.0) ru += mu * (u - u * u);
        const double rv = ws.lap[i] + (u - s.v[i]);
        const double un = u + dt * ru;
        const double vn = s.v[i] + dt * rv;
        next.u[i] = un;
        next.v[i] = vn;
        umin = std::min(umin, un);
        finite = finite && std::isfinite(un) && std::isfinite(vn);
    }
    if (!finite) throw NumericError("non-finite value after step " + std::to_string(s.step + 1));
    if (umin < -kTolNeg)
        throw StateError("density " + format_value(umin) + " below tolerance after step " +
                         std::to_string(s.step + 1));
    next.t = s.t + dt;
    next.step = s.step + 1;
    next.last_dt = dt;
}

}  // namespace

DtResult stable_dt(const State& state, const ModelParams& params, const Grid& grid, const StepControl& control,
                   const ops::FaceFluxes& fluxes) {
    return dt_from(state.u.max(), fluxes.max_diffusivity, fluxes.max_speed, state.t, params, grid, control);
}

DtResult stable_dt(const State& state, const ModelParams& params, const Grid& grid, const StepControl& control) {
    return stable_dt(state, params, grid, control, ops::assemble_fluxes(state, params, grid));
}

State step(const State& state, const ModelParams& params, const Grid& grid, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw NumericError("step size must be positive and finite");
    check_field(state.u, grid, "u");
    check_field(state.v, grid, "v");
    Workspace ws;
    ops::flux_divergence(state.u, state.v, params, grid, ws.div);
    State next;
    advance_into(state, next, params, grid, dt, ws);
    return next;
}

void attach_u2_windows(std::vector<diag::DiagnosticsRecord>& records, double tau) {
    const auto windows = diag::u2_window_integral(records, tau);
    for (std::size_t k = 0; k < records.size(); ++k) {
        if (windows[k].truncated) {
            records[k].u2_window.reset();
        } else {
            records[k].u2_window = windows[k].value;
        }
    }
}

RunOutcome run(const State& initial, const ModelParams& params, const Grid& grid, const StepControl& control,
               const RunOptions& options) {
    params.validate();
    control.validate();
    if (params.dim != grid.dim()) throw ConfigError("model dimension does not match grid dimension");
    if (!(options.record_every > 0.0)) throw ConfigError("record_every must be > 0");
    check_field(initial.u, grid, "initial u");
    check_field(initial.v, grid, "initial v");
    if (initial.u.min() < -kTolNeg) throw StateError("initial u is negative");
    if (initial.v.min() < 0.0) throw StateError("initial v is negative");

    RunOutcome out;
    State s = initial;
    State scratch = initial;
    Workspace ws;
    const double threshold = control.blowup_factor * std::max(1.0, initial.u.max());
    out.records.push_back(diag::make_record(s, grid, options.extra_p));
    const double t0 = s.t;
    std::uint64_t record_index = 1;
    double next_record = t0 + options.record_every;
    bool last_recorded = true;

    auto finish = [&](Verdict v, std::string reason) {
        out.verdict = v;
        out.t_event = s.t;
        out.reason = std::move(reason);
        if (!last_recorded) out.records.push_back(diag::make_record(s, grid, options.extra_p));
        if (params.mu > 0.0) attach_u2_windows(out.records, diag::window_width(control.t_end));
        out.final_state = std::move(s);
        return std::move(out);
    };

    while (s.t < control.t_end) {
        if (options.max_steps != 0 && s.step >= options.max_steps)
            return finish(Verdict::Aborted, "step cap reached");
        try {
            const ops::FluxStats fx = ops::flux_divergence(s.u, s.v, params, grid, ws.div);
            if (!std::isfinite(fx.max_diffusivity) || !std::isfinite(fx.max_speed))
                throw NumericError("non-finite face coefficients at step " + std::to_string(s.step + 1));
            const DtResult dt = dt_from(s.u.max(), fx.max_diffusivity, fx.max_speed, s.t, params, grid, control);
            if (dt.below_min) return finish(Verdict::NumericalBlowup, "stable step fell below dt_min");
            const bool last_step = dt.dt == control.t_end - s.t;
            advance_into(s, scratch, params, grid, dt.dt, ws);
            std::swap(s, scratch);
            if (last_step) s.t = control.t_end;
        } catch (const NumericError& e) {
            return finish(Verdict::Aborted, e.what());
        }
        last_recorded = false;
        if (s.u.max() > threshold) return finish(Verdict::NumericalBlowup, "max u exceeded blow-up threshold");
        if (s.t >= next_record || s.t >= control.t_end) {
            out.records.push_back(diag::make_record(s, grid, options.extra_p));
            last_recorded = true;
            while (next_record <= s.t) next_record = t0 + static_cast<double>(++record_index) * options.record_every;
        }
    }
    return finish(Verdict::CompletedBounded, "reached t_end");
}

}  // namespace kelsim::integ
