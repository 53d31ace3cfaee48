#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fermicycle/dynamics.hpp"
#include "fermicycle/protocol.hpp"
#include "fermicycle/thermo.hpp"

namespace fermicycle {

struct Stroke {
    Protocol protocol;
    std::optional<std::string> bath;  // label into the cycle's bath registry
};

// Ordered strokes plus the bath registry they reference. Validated on
// construction: labels resolve, at least one stroke couples to a bath,
// bath-coupled strokes have positive duration, and the level energy is
// continuous around the loop (jumps must be explicit decoupled segments).
class Cycle {
public:
    Cycle(std::vector<Stroke> strokes, std::vector<Bath> baths);

    const std::vector<Stroke>& strokes() const noexcept { return strokes_; }
    const std::vector<Bath>& baths() const noexcept { return baths_; }
    const Bath& bath(const std::string& label) const;
    const Bath* bath_of(const Stroke& stroke) const;  // nullptr while decoupled
    double period() const noexcept { return period_; }

private:
    std::vector<Stroke> strokes_;
    std::vector<Bath> baths_;
    double period_;
};

struct BathHeat {
    std::string label;
    double temperature;
    double heat;  // absorbed by the dot over one period, > 0 means intake
};

// Per-cycle ledger measured over one period at the periodic steady state.
// Both work entries are extraction-positive, so first-law closure reads
// net_work + chemical_work = sum of bath heats (up to integration error).
struct CycleReport {
    double net_work = 0.0;
    double chemical_work = 0.0;
    std::vector<BathHeat> bath_heats;  // one entry per registered bath, registry order
    double entropy_change = 0.0;       // system entropy over the period (~0 at limit cycle)
    double entropy_production = 0.0;   // entropy_change - sum_b Q_b / T_b
    std::optional<double> efficiency;  // engaged only when net work and heat intake are positive
    double period = 0.0;
    long converged_after = 0;  // periods simulated to produce this report
    double limit_state = 0.0;  // occupation at the start of the measured period
    double residual = 0.0;     // |p(start) - p(start + period)| achieved
};

struct LimitCycleConfig {
    double tolerance = 1e-12;
    long max_periods = 100000;

    // The period map of the rate equation is affine in the start occupation,
    // so two probe periods pin it down and the fixed point is solved exactly;
    // Iterate falls back to plain fixed-point iteration.
    enum class Method { AffineSolve, Iterate };
    Method method = Method::AffineSolve;

    IntegratorConfig integrator = {};
};

// Drive the cycle to its periodic steady state and measure one period.
// Throws NonConvergenceError (with the last residual) when max_periods is
// exhausted.
CycleReport run_to_limit_cycle(const Cycle& cycle, double initial_occupation,
                               const LimitCycleConfig& config = {});

// Reversible-reference evaluation: on every coupled stroke the occupation
// snaps to f(start energy) and then tracks the instantaneous equilibrium.
// The snap's heat is booked against that stroke's bath, so the first law
// closes exactly; the period map is constant and one measured period
// suffices.
CycleReport run_quasistatic_cycle(const Cycle& cycle, const IntegratorConfig& integrator = {});

// Q_in: total heat absorbed (positive per-bath entries only).
double heat_absorbed(const CycleReport& report);

// W_net / Q_in, or empty when the cycle is not operating as an engine.
std::optional<double> efficiency(const CycleReport& report);

// entropy_change - sum_b Q_b / T_b; the cycle's irreversibility certificate.
double entropy_production(const CycleReport& report);

struct TraceSample {
    double time;        // within [0, period]
    double energy;
    double occupation;
    int stroke;         // index into the cycle's stroke list
};

// Sampled limit-cycle period: everything a bound functional could need —
// the full state/Hamiltonian trajectory plus which bath was attached when.
struct CycleTrace {
    double period = 0.0;
    std::vector<TraceSample> samples;
    std::vector<std::optional<Bath>> stroke_baths;  // per stroke, in order
};

// Re-run one period from the report's limit state, recording the trajectory.
// With quasistatic = true the occupation follows f(energy(t)) instead.
CycleTrace trace_limit_cycle(const Cycle& cycle, const CycleReport& report,
                             const IntegratorConfig& integrator = {}, bool quasistatic = false);

}  // namespace fermicycle
