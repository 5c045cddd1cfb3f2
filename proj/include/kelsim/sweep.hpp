#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kelsim/config.hpp"
#include "kelsim/integrator.hpp"
#include "kelsim/theory.hpp"

namespace kelsim {

enum class Empirical { Bounded, Blowup, Aborted };

std::string to_string(Empirical e);

struct EmpiricalVerdict {
    Empirical status = Empirical::Aborted;
    /// Bounded but max u still rising over the final window.
    bool growing = false;
};

/**
 * Numerical proxy for boundedness. Blowup when the detector fired; otherwise
 * Bounded, flagged as growing when max |u|_inf over the last `window` fraction
 * of records exceeds `ratio` times the max over the equally long stretch just
 * before it. Needs at least 10 records (PreconditionError otherwise).
 */
EmpiricalVerdict classify_empirical(const integ::RunOutcome& outcome, double window = 0.25, double ratio = 1.05);

struct PhaseCell {
    double axis1 = 0.0;
    double axis2 = 0.0;
    EmpiricalVerdict empirical;
    theory::RegimeVerdict theoretical;
    /// False only when theory guarantees boundedness and the run blew up.
    bool agree = true;
    double t_final = 0.0;
    double max_linf = 0.0;
    std::string reason;
};

struct SweepSpec {
    SweepAxis axis1;
    SweepAxis axis2;
    Config base;
    int workers = 1;
};

/// Builds a sweep from a parsed config. A missing second axis becomes a
/// one-point axis over mu at its base value.
SweepSpec sweep_spec_from(const Config& config);

/// Worker count after applying the KELSIM_THREADS cap.
int effective_workers(int requested);

/// One simulation per lattice point (axis1 outer, axis2 inner), executed by
/// `workers` threads. Results are in lattice order and do not depend on the
/// worker count.
std::vector<PhaseCell> run_sweep(const SweepSpec& spec);

/// Single lattice point; exposed for tests.
PhaseCell run_point(const Config& base, double a1, SweepParam p1, double a2, SweepParam p2);

/// Header <axis1 name>,<axis2 name>,empirical,theoretical,agree,t_final,max_linf,growing.
std::string phase_csv(const SweepSpec& spec, const std::vector<PhaseCell>& cells);

}  // namespace kelsim
