#pragma once

#include <optional>
#include <vector>

#include "fermicycle/protocol.hpp"
#include "fermicycle/thermo.hpp"

namespace fermicycle {

// Fixed-step classical RK4. Steps are sized so that both Gamma*dt and
// |d energy|/T stay below the caps on every step; deterministic by
// construction, no adaptive state.
struct IntegratorConfig {
    double max_step_gamma = 0.01;  // cap on Gamma * dt per step
    double max_step_drive = 0.01;  // cap on |energy change| / T per step
    long min_steps = 16;           // per stroke
    long max_steps = 50'000'000;   // hard budget per stroke

    // > 0 forces this many steps per protocol segment (convergence studies).
    long forced_steps = 0;

    // Re-run at half the step size and require agreement; disagreement is a
    // NonConvergenceError carrying the step count.
    bool check_step_halving = false;
    double halving_tolerance = 1e-8;

    bool record_trajectory = false;
    long max_trajectory_samples = 4096;  // per stroke
};

struct TrajectoryPoint {
    double time;
    double energy;
    double occupation;
};

// Stroke-level energy ledger. Work is counted as extracted (> 0 when the
// level descends while occupied); heat is absorbed by the dot, measured
// against (energy - mu); chemical work is mu * (occupation change).
// First-law closure: dU = heat + chemical_work - work with U = p * energy.
struct PropagationResult {
    double final_occupation;
    double work;
    double heat;
    double chemical_work;
    std::vector<TrajectoryPoint> trajectory;  // nonempty iff requested
};

// Closed-form relaxation at fixed level energy:
// p(t) = f + (p0 - f) exp(-Gamma t). For Gamma*t >= 700 returns f exactly.
double relax_constant(double occupation, double energy, const Bath& bath, double elapsed);

// Propagate one stroke. Without a bath the occupation is frozen and the
// ledger is exact algebra (work = -p * energy swing, zero heat); with a bath
// the rate equation dp/dt = -Gamma (p - f(energy(t))) and the ledger
// integrals run through the same RK4 stages.
PropagationResult propagate_stroke(double occupation, const Protocol& protocol,
                                   const std::optional<Bath>& bath,
                                   const IntegratorConfig& integrator = {});

// Reference limit in which the occupation tracks the instantaneous
// equilibrium, p(t) = f(energy(t)); the ledger uses the same integrals.
// Starts at f(start energy) by definition.
PropagationResult quasistatic_stroke(const Protocol& protocol, const Bath& bath,
                                     const IntegratorConfig& integrator = {});

}  // namespace fermicycle
