#include "fermicycle/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fermicycle/errors.hpp"
#include "fermicycle/tolerances.hpp"

namespace fermicycle {

namespace {

int bath_index(const std::vector<Bath>& baths, const std::string& label) {
    for (std::size_t i = 0; i < baths.size(); ++i)
        if (baths[i].label() == label) return static_cast<int>(i);
    return -1;
}

}  // namespace

Cycle::Cycle(std::vector<Stroke> strokes, std::vector<Bath> baths)
    : strokes_(std::move(strokes)), baths_(std::move(baths)), period_(0.0) {
    if (strokes_.empty()) throw ConfigError("cycle needs at least one stroke");
    if (baths_.empty()) throw ConfigError("cycle needs at least one bath");

    for (std::size_t i = 0; i < baths_.size(); ++i)
        for (std::size_t j = i + 1; j < baths_.size(); ++j)
            if (baths_[i].label() == baths_[j].label())
                throw ConfigError("duplicate bath label '" + baths_[i].label() + "'");

    bool any_coupled = false;
    for (std::size_t i = 0; i < strokes_.size(); ++i) {
        const Stroke& s = strokes_[i];
        if (s.bath) {
            if (bath_index(baths_, *s.bath) < 0)
                throw ConfigError("stroke " + std::to_string(i) + " references unknown bath '" +
                                  *s.bath + "'");
            if (s.protocol.duration() <= 0.0)
                throw ConfigError("stroke " + std::to_string(i) +
                                  ": bath-coupled stroke requires positive duration");
            any_coupled = true;
        }
        period_ += s.protocol.duration();
    }
    if (!any_coupled) throw ConfigError("cycle must couple to a bath in at least one stroke");

    // The level must be continuous around the loop; any jump has to be an
    // explicit decoupled segment.
    for (std::size_t i = 0; i < strokes_.size(); ++i) {
        const std::size_t j = (i + 1) % strokes_.size();
        const double end = strokes_[i].protocol.end_energy();
        const double start = strokes_[j].protocol.start_energy();
        const double slack = Tolerances::junction_continuity * std::max(1.0, std::abs(end));
        if (std::abs(end - start) > slack)
            throw ConfigError("level energy jumps from " + std::to_string(end) + " to " +
                              std::to_string(start) + " between strokes " + std::to_string(i) +
                              " and " + std::to_string(j) +
                              "; insert an explicit decoupled drive segment");
    }
}

const Bath& Cycle::bath(const std::string& label) const {
    const int idx = bath_index(baths_, label);
    if (idx < 0) throw ConfigError("unknown bath '" + label + "'");
    return baths_[static_cast<std::size_t>(idx)];
}

const Bath* Cycle::bath_of(const Stroke& stroke) const {
    if (!stroke.bath) return nullptr;
    return &bath(*stroke.bath);
}

namespace {

struct PeriodLedger {
    double work = 0.0;
    double chemical_work = 0.0;
    std::vector<double> bath_heat;  // by bath registry index
};

// Simulate one period starting from occupation p. Ledger and trace are
// optional; the trace gets stroke-local samples shifted to cycle time.
double run_period(const Cycle& cycle, double p, const IntegratorConfig& integrator,
                  PeriodLedger* ledger, CycleTrace* trace) {
    double t_offset = 0.0;
    for (std::size_t i = 0; i < cycle.strokes().size(); ++i) {
        const Stroke& stroke = cycle.strokes()[i];
        const Bath* bath = cycle.bath_of(stroke);

        IntegratorConfig cfg = integrator;
        cfg.record_trajectory = trace != nullptr;

        const PropagationResult r = propagate_stroke(
            p, stroke.protocol, bath ? std::optional<Bath>(*bath) : std::nullopt, cfg);

        if (ledger) {
            ledger->work += r.work;
            ledger->chemical_work += r.chemical_work;
            if (bath) ledger->bath_heat[bath_index(cycle.baths(), bath->label())] += r.heat;
        }
        if (trace)
            for (const TrajectoryPoint& s : r.trajectory)
                trace->samples.push_back(
                    {t_offset + s.time, s.energy, s.occupation, static_cast<int>(i)});

        p = r.final_occupation;
        t_offset += stroke.protocol.duration();
    }
    return p;
}

CycleReport assemble_report(const Cycle& cycle, const PeriodLedger& ledger, double p_start,
                            double p_end, long periods, double residual) {
    CycleReport report;
    report.net_work = ledger.work;
    // Stroke ledgers count chemical work as intake (mu * dp); at cycle level
    // it is reported extraction-positive like net_work, so that
    // net_work + chemical_work == sum of bath heats at the limit cycle.
    report.chemical_work = -ledger.chemical_work;
    for (std::size_t b = 0; b < cycle.baths().size(); ++b)
        report.bath_heats.push_back(
            {cycle.baths()[b].label(), cycle.baths()[b].temperature(), ledger.bath_heat[b]});
    report.entropy_change = dot_entropy(p_end) - dot_entropy(p_start);

    double entropy_flow = 0.0;
    for (const BathHeat& bh : report.bath_heats) entropy_flow += bh.heat / bh.temperature;
    report.entropy_production = report.entropy_change - entropy_flow;

    report.period = cycle.period();
    report.converged_after = periods;
    report.limit_state = p_start;
    report.residual = residual;
    report.efficiency = efficiency(report);
    return report;
}

}  // namespace

CycleReport run_to_limit_cycle(const Cycle& cycle, double initial_occupation,
                               const LimitCycleConfig& config) {
    if (!(initial_occupation >= 0.0 && initial_occupation <= 1.0))
        throw std::invalid_argument("initial occupation must lie in [0, 1]");
    if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");

    long periods = 0;
    double p = initial_occupation;
    bool pinned = false;

    if (config.method == LimitCycleConfig::Method::AffineSolve) {
        // The rate equation is linear in p, so the period map is affine:
        // two probes determine it and the fixed point follows exactly.
        const double map_at_zero = run_period(cycle, 0.0, config.integrator, nullptr, nullptr);
        const double map_at_one = run_period(cycle, 1.0, config.integrator, nullptr, nullptr);
        periods = 2;
        const double contraction = map_at_one - map_at_zero;
        const double fixed_point = map_at_zero / (1.0 - contraction);
        if (std::isfinite(fixed_point) && fixed_point >= 0.0 && fixed_point <= 1.0) {
            p = fixed_point;
            pinned = true;
        }
    }

    if (!pinned) {
        double residual = std::numeric_limits<double>::infinity();
        while (periods < config.max_periods) {
            const double next = run_period(cycle, p, config.integrator, nullptr, nullptr);
            ++periods;
            residual = std::abs(next - p);
            p = next;
            if (residual <= config.tolerance) {
                pinned = true;
                break;
            }
        }
        if (!pinned)
            throw NonConvergenceError("limit cycle not reached after " + std::to_string(periods) +
                                          " periods; last residual " + std::to_string(residual),
                                      residual, periods);
    }

    // Measurement period; converged_after counts only the periods spent
    // reaching the fixed point, so it never exceeds max_periods.
    PeriodLedger ledger;
    ledger.bath_heat.assign(cycle.baths().size(), 0.0);
    const double p_end = run_period(cycle, p, config.integrator, &ledger, nullptr);
    const double residual = std::abs(p_end - p);

    if (residual > config.tolerance) {
        // The affine solve should land on the fixed point to roundoff; if it
        // did not (extreme contraction ratios), fall back to iteration.
        double q = p_end;
        double res = residual;
        while (periods < config.max_periods && res > config.tolerance) {
            const double next = run_period(cycle, q, config.integrator, nullptr, nullptr);
            ++periods;
            res = std::abs(next - q);
            q = next;
        }
        if (res > config.tolerance)
            throw NonConvergenceError("limit cycle not reached after " + std::to_string(periods) +
                                          " periods; last residual " + std::to_string(res),
                                      res, periods);
        ledger = PeriodLedger{};
        ledger.bath_heat.assign(cycle.baths().size(), 0.0);
        const double q_end = run_period(cycle, q, config.integrator, &ledger, nullptr);
        return assemble_report(cycle, ledger, q, q_end, periods, std::abs(q_end - q));
    }

    return assemble_report(cycle, ledger, p, p_end, periods, residual);
}

CycleReport run_quasistatic_cycle(const Cycle& cycle, const IntegratorConfig& integrator) {
    // Occupation at the period start: equilibrium of the last coupled stroke.
    const Bath* last_bath = nullptr;
    double last_end_energy = 0.0;
    for (const Stroke& s : cycle.strokes())
        if (const Bath* b = cycle.bath_of(s)) {
            last_bath = b;
            last_end_energy = s.protocol.end_energy();
        }
    const double p_start = fermi_occupation(last_end_energy, *last_bath);

    PeriodLedger ledger;
    ledger.bath_heat.assign(cycle.baths().size(), 0.0);

    double p = p_start;
    for (const Stroke& stroke : cycle.strokes()) {
        const Bath* bath = cycle.bath_of(stroke);
        if (!bath) {
            ledger.work -= p * (stroke.protocol.end_energy() - stroke.protocol.start_energy());
            continue;
        }
        const int idx = bath_index(cycle.baths(), bath->label());
        const double mu = bath->chemical_potential();
        const double f_start = fermi_occupation(stroke.protocol.start_energy(), *bath);

        // Instantaneous equilibration at the stroke head (the infinitely
        // slow limit of the finite-Gamma relaxation), booked as bath heat.
        ledger.bath_heat[idx] += (stroke.protocol.start_energy() - mu) * (f_start - p);
        ledger.chemical_work += mu * (f_start - p);

        const PropagationResult r = quasistatic_stroke(stroke.protocol, *bath, integrator);
        ledger.work += r.work;
        ledger.chemical_work += r.chemical_work;
        ledger.bath_heat[idx] += r.heat;
        p = r.final_occupation;
    }

    return assemble_report(cycle, ledger, p_start, p, 1, std::abs(p - p_start));
}

double heat_absorbed(const CycleReport& report) {
    double q_in = 0.0;
    for (const BathHeat& bh : report.bath_heats)
        if (bh.heat > 0.0) q_in += bh.heat;
    return q_in;
}

std::optional<double> efficiency(const CycleReport& report) {
    const double q_in = heat_absorbed(report);
    // Roundoff guard: ledger entries below the dust scale cannot certify an
    // engine; without it an equilibrium cycle's eta would be the ratio of
    // two rounding errors.
    double scale = 0.0;
    for (const BathHeat& bh : report.bath_heats) scale += std::abs(bh.heat);
    const double dust = 1e-12 * std::max(1.0, scale);
    if (report.net_work <= dust || q_in <= dust) return std::nullopt;
    return report.net_work / q_in;
}

double entropy_production(const CycleReport& report) {
    double entropy_flow = 0.0;
    for (const BathHeat& bh : report.bath_heats) entropy_flow += bh.heat / bh.temperature;
    return report.entropy_change - entropy_flow;
}

CycleTrace trace_limit_cycle(const Cycle& cycle, const CycleReport& report,
                             const IntegratorConfig& integrator, bool quasistatic) {
    CycleTrace trace;
    trace.period = cycle.period();
    for (const Stroke& s : cycle.strokes())
        trace.stroke_baths.push_back(cycle.bath_of(s) ? std::optional<Bath>(*cycle.bath_of(s))
                                                      : std::nullopt);

    if (!quasistatic) {
        run_period(cycle, report.limit_state, integrator, nullptr, &trace);
        return trace;
    }

    IntegratorConfig cfg = integrator;
    cfg.record_trajectory = true;
    double t_offset = 0.0;
    double p = report.limit_state;
    for (std::size_t i = 0; i < cycle.strokes().size(); ++i) {
        const Stroke& stroke = cycle.strokes()[i];
        const Bath* bath = cycle.bath_of(stroke);
        if (bath) {
            // Show the stroke-head equilibration jump in the trace; without
            // it a cycle opening on a coupled stroke would look aperiodic.
            trace.samples.push_back(
                {t_offset, stroke.protocol.start_energy(), p, static_cast<int>(i)});
        }
        PropagationResult r = bath ? quasistatic_stroke(stroke.protocol, *bath, cfg)
                                   : propagate_stroke(p, stroke.protocol, std::nullopt, cfg);
        for (const TrajectoryPoint& s : r.trajectory)
            trace.samples.push_back({t_offset + s.time, s.energy, s.occupation,
                                     static_cast<int>(i)});
        p = r.final_occupation;
        t_offset += stroke.protocol.duration();
    }
    return trace;
}

}  // namespace fermicycle
