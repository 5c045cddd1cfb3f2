// kelsim: command-line driver for the chemotaxis simulator, the sweep engine,
// the closed-form threshold calculator and the constant estimators.
//
// Exit codes: 0 success, 1 failed self-check, 2 configuration error,
// 3 numeric abort, 4 I/O error.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kelsim/config.hpp"
#include "kelsim/diagnostics.hpp"
#include "kelsim/integrator.hpp"
#include "kelsim/output.hpp"
#include "kelsim/sweep.hpp"
#include "kelsim/theory.hpp"

namespace fs = std::filesystem;
using namespace kelsim;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

fs::path prepare_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return p;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    const Config cfg = load_config(config_path);
    const Grid grid = cfg.grid();
    const State init = cfg.initial_state();
    const auto outcome = integ::run(init, cfg.params, grid, cfg.control, cfg.run_options());
    const fs::path dir = prepare_dir(out_dir);
    io::emit_timeseries(outcome, dir / "timeseries.csv");
    for (const auto& [name, field] : {std::pair{"u_final", &outcome.final_state.u}, {"v_final", &outcome.final_state.v}}) {
        const auto snap = io::emit_snapshot(*field, grid, dir / name);
        if (!snap.notice.empty()) std::cerr << "note: " << snap.notice << "\n";
    }
    std::cout << "verdict " << integ::to_string(outcome.verdict) << " at t = " << io::format_double(outcome.t_event)
              << " (" << outcome.reason << ")\n"
              << "steps " << outcome.final_state.step << ", records " << outcome.records.size() << "\n"
              << "mass " << io::format_double(outcome.records.front().mass) << " -> "
              << io::format_double(outcome.records.back().mass) << "\n";
    return outcome.verdict == integ::Verdict::Aborted ? kExitNumeric : 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int workers) {
    const Config cfg = load_config(config_path);
    SweepSpec spec = sweep_spec_from(cfg);
    if (workers > 0) spec.workers = workers;
    const auto cells = run_sweep(spec);
    const fs::path dir = prepare_dir(out_dir);
    io::write_text(dir / "phase.csv", phase_csv(spec, cells));
    int red = 0;
    for (const auto& c : cells) {
        std::cout << to_string(spec.axis1.param) << "=" << c.axis1 << " " << to_string(spec.axis2.param) << "="
                  << c.axis2 << ": " << to_string(c.empirical.status) << (c.empirical.growing ? " (growing)" : "")
                  << " / " << theory::to_string(c.theoretical.status) << (c.agree ? "" : "  <-- DISAGREE") << "\n";
        if (!c.agree) ++red;
    }
    std::cout << cells.size() << " points, " << red << " disagreements\n";
    return 0;
}

int cmd_theory(const std::string& config_path) {
    const Config cfg = load_config(config_path);
    const ModelParams& p = cfg.params;
    double u0_l1 = 0.0;
    if (p.dim == 1 || p.dim == 2) {
        const Grid grid = cfg.grid();
        u0_l1 = diag::mass(cfg.initial_state().u, grid);
    }
    std::cout << "N = " << p.dim << ", chi = " << p.chi << ", mu = " << p.mu << ", m = " << p.m_exp
              << ", C_D = " << p.c_d << ", lambda0 = " << p.lambda0 << ", C_GN = " << p.c_gn
              << ", |u0|_1 = " << io::format_double(u0_l1) << "\n";
    const auto crit = theory::critical_exponent(p);
    std::cout << "critical exponent m* = " << (crit.unconstrained() ? "unconstrained (any m)" : io::format_double(*crit.value))
              << "\n";
    try {
        std::cout << "C_D threshold = " << io::format_double(theory::cd_threshold(p, u0_l1)) << "\n";
    } catch (const DegenerateError& e) {
        std::cout << "C_D threshold: " << e.what() << "\n";
    }
    try {
        const double p0 = theory::find_p0(p, u0_l1);
        std::cout << "p0 = " << io::format_double(p0) << " (h(p0) = " << theory::h_function(p0, p, u0_l1) << ")\n";
    } catch (const PreconditionError& e) {
        std::cout << "p0: " << e.what() << "\n";
    }
    for (double q : cfg.theory_p) {
        const auto lm = theory::lemma_min(q, p.chi, p.lambda0);
        std::cout << "p = " << q << ": B1 = " << io::format_double(theory::b1_constant(q))
                  << ", argmin = " << io::format_double(lm.minimizer) << ", min = " << io::format_double(lm.minimum)
                  << "\n";
    }
    const auto verdict = theory::classify_regime(p, u0_l1);
    std::cout << "regime " << theory::to_string(verdict.status) << ": " << verdict.detail << "\n";
    return 0;
}

int cmd_check(const std::string& config_path) {
    const Config cfg = load_config(config_path);
    const Grid grid = cfg.grid();
    const State init = cfg.initial_state();
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
        if (!ok) ++failures;
    };

    for (double q : cfg.theory_p) {
        try {
            (void)theory::lemma_min(q, cfg.params.chi, cfg.params.lambda0);
            report("lemma_min p=" + io::format_double(q), true, "closed form matches golden-section search");
        } catch (const ConsistencyError& e) {
            report("lemma_min p=" + io::format_double(q), false, e.what());
        }
    }

    const auto a = integ::run(init, cfg.params, grid, cfg.control, cfg.run_options());
    const auto b = integ::run(init, cfg.params, grid, cfg.control, cfg.run_options());
    report("determinism", io::timeseries_csv(a.records) == io::timeseries_csv(b.records) &&
                              a.final_state.u == b.final_state.u && a.final_state.v == b.final_state.v,
           "two runs, byte-compared");
    report("run completed", a.verdict != integ::Verdict::Aborted, integ::to_string(a.verdict) + ": " + a.reason);

    double min_u = 0.0;
    for (const auto& r : a.records) min_u = std::min(min_u, r.min_u);
    report("positivity", min_u >= -kTolNeg, "min u = " + io::format_double(min_u));

    const double m0 = a.records.front().mass;
    if (cfg.params.mu == 0.0) {
        double drift = 0.0;
        for (const auto& r : a.records) drift = std::max(drift, std::abs(r.mass - m0) / m0);
        report("mass conservation", drift <= 1e-12, "max relative drift = " + io::format_double(drift));
    } else {
        const double bound = std::max(m0, grid.volume()) * (1.0 + 1e-6);
        double worst = 0.0;
        for (const auto& r : a.records) worst = std::max(worst, r.mass);
        report("L1 bound", worst <= bound, "max mass " + io::format_double(worst) + " <= " + io::format_double(bound));
    }
    return failures == 0 ? 0 : kExitCheckFailed;
}

int cmd_estimate(const std::string& config_path) {
    const Config cfg = load_config(config_path);
    const Grid grid = cfg.grid();
    const double cgn = diag::estimate_cgn(cfg.gn_corpus, cfg.gn_p, cfg.gn_theta, grid);
    std::cout << "C_GN lower-bound estimate (p = " << cfg.gn_p << ", theta = " << cfg.gn_theta
              << "): " << io::format_double(cgn) << "\n";
    const double l0 =
        diag::estimate_lambda0(cfg.lambda0_gamma, grid, cfg.lambda0_trials, cfg.lambda0_seed, cfg.lambda0_horizon);
    std::cout << "lambda0 lower-bound estimate (gamma = " << cfg.lambda0_gamma << ", " << cfg.lambda0_trials
              << " trials, T = " << cfg.lambda0_horizon << "): " << io::format_double(l0) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kelsim: quasilinear Keller-Segel simulator and boundedness laboratory"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    int workers = 0;

    auto* sim = app.add_subcommand("simulate", "run one simulation, write timeseries.csv and final snapshots");
    sim->add_option("config", config, "configuration file")->required();
    sim->add_option("-o,--out", out_dir, "output directory");

    auto* sweep = app.add_subcommand("sweep", "parameter sweep, writes phase.csv");
    sweep->add_option("config", config, "configuration file")->required();
    sweep->add_option("-o,--out", out_dir, "output directory");
    sweep->add_option("-w,--workers", workers, "worker threads (overrides the config; capped by KELSIM_THREADS)");

    auto* th = app.add_subcommand("theory", "print critical exponent, C_D threshold, p0 and lemma minima");
    th->add_option("config", config, "configuration file")->required();

    auto* check = app.add_subcommand("check", "run the invariant self-tests on a configuration");
    check->add_option("config", config, "configuration file")->required();

    auto* est = app.add_subcommand("estimate", "estimate C_GN and lambda0 (lower bounds)");
    est->add_option("config", config, "configuration file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config, out_dir);
        if (sweep->parsed()) return cmd_sweep(config, out_dir, workers);
        if (th->parsed()) return cmd_theory(config);
        if (check->parsed()) return cmd_check(config);
        if (est->parsed()) return cmd_estimate(config);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
