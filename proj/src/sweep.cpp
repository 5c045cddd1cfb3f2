#include "kelsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "kelsim/diagnostics.hpp"
#include "kelsim/output.hpp"

namespace kelsim {

std::string to_string(Empirical e) {
    switch (e) {
        case Empirical::Bounded: return "Bounded";
        case Empirical::Blowup: return "Blowup";
        case Empirical::Aborted: return "Aborted";
    }
    return "?";
}

EmpiricalVerdict classify_empirical(const integ::RunOutcome& outcome, double window, double ratio) {
    const auto& recs = outcome.records;
    if (recs.size() < 10)
        throw PreconditionError("classify_empirical needs at least 10 records, got " + std::to_string(recs.size()));
    if (outcome.verdict == integ::Verdict::NumericalBlowup) return {Empirical::Blowup, false};
    if (outcome.verdict == integ::Verdict::Aborted) return {Empirical::Aborted, false};

    const std::size_t n = recs.size();
    const std::size_t w = std::max<std::size_t>(1, static_cast<std::size_t>(window * static_cast<double>(n)));
    auto max_over = [&](std::size_t begin, std::size_t end) {
        double m = 0.0;
        for (std::size_t k = begin; k < end; ++k) m = std::max(m, recs[k].linf_u);
        return m;
    };
    const double last = max_over(n - w, n);
    const double before = max_over(n - 2 * w, n - w);
    return {Empirical::Bounded, last > ratio * before};
}

SweepSpec sweep_spec_from(const Config& config) {
    if (!config.axis1) throw ConfigError("sweep needs sweep_axis1 and sweep_values1");
    SweepSpec s;
    s.axis1 = *config.axis1;
    if (config.axis2) {
        s.axis2 = *config.axis2;
    } else {
        const SweepParam p = s.axis1.param == SweepParam::Mu ? SweepParam::Chi : SweepParam::Mu;
        s.axis2 = {p, {get_param(config.params, p)}};
    }
    s.base = config;
    s.workers = config.workers;
    return s;
}

int effective_workers(int requested) {
    int n = std::max(1, requested);
    if (const char* env = std::getenv("KELSIM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

PhaseCell run_point(const Config& base, double a1, SweepParam p1, double a2, SweepParam p2) {
    Config cfg = base;
    cfg.params = with_param(with_param(base.params, p1, a1), p2, a2);
    PhaseCell cell;
    cell.axis1 = a1;
    cell.axis2 = a2;

    const Grid grid = cfg.grid();
    const State init = cfg.initial_state();
    cell.theoretical = theory::classify_regime(cfg.params, diag::mass(init.u, grid));

    const auto outcome = integ::run(init, cfg.params, grid, cfg.control, cfg.run_options());
    cell.t_final = outcome.final_state.t;
    for (const auto& r : outcome.records) cell.max_linf = std::max(cell.max_linf, r.linf_u);
    cell.max_linf = std::max(cell.max_linf, outcome.final_state.u.max());
    cell.reason = outcome.reason;
    if (outcome.records.size() >= 10) {
        cell.empirical = classify_empirical(outcome, cfg.plateau_window, cfg.plateau_ratio);
    } else {
        // Too short a trajectory to judge a plateau; only the detector counts.
        cell.empirical.status = outcome.verdict == integ::Verdict::NumericalBlowup ? Empirical::Blowup
                                : outcome.verdict == integ::Verdict::Aborted      ? Empirical::Aborted
                                                                                  : Empirical::Bounded;
    }
    cell.agree = !(cell.theoretical.theorem_bounded() && cell.empirical.status == Empirical::Blowup);
    return cell;
}

std::vector<PhaseCell> run_sweep(const SweepSpec& spec) {
    const std::size_t n1 = spec.axis1.values.size();
    const std::size_t n2 = spec.axis2.values.size();
    const std::size_t total = n1 * n2;
    std::vector<PhaseCell> cells(total);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
            const double a1 = spec.axis1.values[k / n2];
            const double a2 = spec.axis2.values[k % n2];
            try {
                cells[k] = run_point(spec.base, a1, spec.axis1.param, a2, spec.axis2.param);
            } catch (const Error& e) {
                PhaseCell c;
                c.axis1 = a1;
                c.axis2 = a2;
                c.empirical.status = Empirical::Aborted;
                c.reason = e.what();
                cells[k] = std::move(c);
            }
        }
    };

    const int n_workers = std::min<int>(effective_workers(spec.workers), static_cast<int>(std::max<std::size_t>(1, total)));
    {
        std::vector<std::jthread> pool;
        for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
        worker();
    }
    return cells;
}

std::string phase_csv(const SweepSpec& spec, const std::vector<PhaseCell>& cells) {
    std::string out = to_string(spec.axis1.param) + "," + to_string(spec.axis2.param) +
                      ",empirical,theoretical,agree,t_final,max_linf,growing\n";
    for (const auto& c : cells) {
        out += io::format_double(c.axis1) + "," + io::format_double(c.axis2) + "," + to_string(c.empirical.status) +
               "," + theory::to_string(c.theoretical.status) + "," + (c.agree ? "true" : "false") + "," +
               io::format_double(c.t_final) + "," + io::format_double(c.max_linf) + "," +
               (c.empirical.growing ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace kelsim
