#include "fermicycle/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fermicycle/errors.hpp"

namespace fermicycle {

namespace {

// One protocol piece with constant slope; the integrator never steps across
// a piece boundary, so RK4 keeps its full order on sampled shapes.
struct Segment {
    double t0;
    double t1;
    double e0;
    double slope;
};

std::vector<Segment> split_into_segments(const Protocol& protocol) {
    std::vector<Segment> segments;
    if (protocol.kind() == Protocol::Kind::Sampled) {
        const auto& knots = protocol.knots();
        segments.reserve(knots.size() - 1);
        for (std::size_t i = 1; i < knots.size(); ++i) {
            const double dt = knots[i].time - knots[i - 1].time;
            segments.push_back({knots[i - 1].time, knots[i].time, knots[i - 1].energy,
                                (knots[i].energy - knots[i - 1].energy) / dt});
        }
        return segments;
    }
    const double slope = protocol.duration() > 0.0
                             ? (protocol.end_energy() - protocol.start_energy()) / protocol.duration()
                             : 0.0;
    segments.push_back({0.0, protocol.duration(), protocol.start_energy(), slope});
    return segments;
}

long plan_segment_steps(const Segment& seg, double gamma, double temperature, double stroke_duration,
                        const IntegratorConfig& cfg) {
    if (cfg.forced_steps > 0) return cfg.forced_steps;
    const double dt = seg.t1 - seg.t0;
    const double energy_swing = std::abs(seg.slope) * dt;
    long n = static_cast<long>(std::ceil(gamma * dt / cfg.max_step_gamma));
    n = std::max(n, static_cast<long>(std::ceil(energy_swing / (temperature * cfg.max_step_drive))));
    n = std::max(n, static_cast<long>(std::ceil(cfg.min_steps * dt / stroke_duration)));
    return std::max(n, 1L);
}

struct Ledger {
    double occupation = 0.0;
    double work = 0.0;
    double heat = 0.0;
};

struct Recorder {
    std::vector<TrajectoryPoint>* out = nullptr;
    long stride = 1;
    long step = 0;

    void sample(double t, double e, double p, bool force = false) {
        if (!out) return;
        if (force || step % stride == 0) out->push_back({t, e, p});
        ++step;
    }
};

// RK4 over the coupled system (p, W, Q); W and Q are pure quadratures riding
// on the same stages.
Ledger integrate_stroke(double p0, const std::vector<Segment>& segments, const Bath& bath,
                        const std::vector<long>& steps_per_segment, Recorder& rec) {
    const double gamma = bath.coupling();
    const double mu = bath.chemical_potential();

    Ledger led;
    led.occupation = p0;

    for (std::size_t s = 0; s < segments.size(); ++s) {
        const Segment& seg = segments[s];
        const long n = steps_per_segment[s];
        const double h = (seg.t1 - seg.t0) / static_cast<double>(n);

        auto deriv = [&](double t_local, double p, double& dp, double& dw, double& dq) {
            const double e = seg.e0 + seg.slope * t_local;
            dp = -gamma * (p - fermi_occupation(e, bath));
            dw = -p * seg.slope;
            dq = (e - mu) * dp;
        };

        for (long i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * h;
            const double p = led.occupation;
            rec.sample(seg.t0 + t, seg.e0 + seg.slope * t, p);

            double dp1, dw1, dq1, dp2, dw2, dq2, dp3, dw3, dq3, dp4, dw4, dq4;
            deriv(t, p, dp1, dw1, dq1);
            deriv(t + 0.5 * h, p + 0.5 * h * dp1, dp2, dw2, dq2);
            deriv(t + 0.5 * h, p + 0.5 * h * dp2, dp3, dw3, dq3);
            deriv(t + h, p + h * dp3, dp4, dw4, dq4);

            led.occupation += h / 6.0 * (dp1 + 2.0 * dp2 + 2.0 * dp3 + dp4);
            led.work += h / 6.0 * (dw1 + 2.0 * dw2 + 2.0 * dw3 + dw4);
            led.heat += h / 6.0 * (dq1 + 2.0 * dq2 + 2.0 * dq3 + dq4);
        }
    }

    const Segment& last = segments.back();
    rec.sample(last.t1, last.e0 + last.slope * (last.t1 - last.t0), led.occupation, true);
    return led;
}

long total_steps(const std::vector<long>& steps_per_segment) {
    long total = 0;
    for (long n : steps_per_segment) total += n;
    return total;
}

}  // namespace

double relax_constant(double occupation, double energy, const Bath& bath, double elapsed) {
    if (!(occupation >= 0.0 && occupation <= 1.0))
        throw std::invalid_argument("occupation must lie in [0, 1]");
    if (!(elapsed >= 0.0)) throw std::invalid_argument("elapsed time must be >= 0");
    const double f = fermi_occupation(energy, bath);
    const double gt = bath.coupling() * elapsed;
    if (gt >= 700.0) return f;  // fixed point to double precision
    return f + (occupation - f) * std::exp(-gt);
}

PropagationResult propagate_stroke(double occupation, const Protocol& protocol,
                                   const std::optional<Bath>& bath,
                                   const IntegratorConfig& integrator) {
    if (!(occupation >= 0.0 && occupation <= 1.0))
        throw std::invalid_argument("occupation must lie in [0, 1]");

    if (!bath) {
        // Decoupled drive: the occupation is frozen, the ledger is exact.
        PropagationResult r;
        r.final_occupation = occupation;
        r.work = -occupation * (protocol.end_energy() - protocol.start_energy());
        r.heat = 0.0;
        r.chemical_work = 0.0;
        if (integrator.record_trajectory) {
            if (protocol.duration() <= 0.0) {
                r.trajectory.push_back({0.0, protocol.start_energy(), occupation});
                r.trajectory.push_back({0.0, protocol.end_energy(), occupation});
            } else {
                for (double t : protocol.breakpoints())
                    r.trajectory.push_back({t, protocol.energy_at(t), occupation});
            }
        }
        return r;
    }

    if (protocol.duration() <= 0.0)
        throw std::invalid_argument("bath-coupled stroke requires positive duration");

    const std::vector<Segment> segments = split_into_segments(protocol);
    std::vector<long> steps(segments.size());
    for (std::size_t s = 0; s < segments.size(); ++s)
        steps[s] = plan_segment_steps(segments[s], bath->coupling(), bath->temperature(),
                                      protocol.duration(), integrator);

    const long planned = total_steps(steps);
    if (planned > integrator.max_steps)
        throw NonConvergenceError("stroke integration would need " + std::to_string(planned) +
                                      " steps, above the budget of " +
                                      std::to_string(integrator.max_steps),
                                  std::numeric_limits<double>::quiet_NaN(), planned);

    std::vector<TrajectoryPoint> trajectory;
    Recorder rec;
    if (integrator.record_trajectory) {
        rec.out = &trajectory;
        rec.stride = std::max(1L, planned / std::max(1L, integrator.max_trajectory_samples - 1));
    }

    Ledger led = integrate_stroke(occupation, segments, *bath, steps, rec);

    if (integrator.check_step_halving) {
        std::vector<long> fine(steps);
        for (long& n : fine) n *= 2;
        Recorder no_rec;
        const Ledger led2 = integrate_stroke(occupation, segments, *bath, fine, no_rec);
        const double dev = std::max({std::abs(led.occupation - led2.occupation),
                                     std::abs(led.work - led2.work),
                                     std::abs(led.heat - led2.heat)});
        if (dev > integrator.halving_tolerance)
            throw NonConvergenceError(
                "step-halving check failed: results moved by " + std::to_string(dev) + " after " +
                    std::to_string(planned) + " -> " + std::to_string(2 * planned) + " steps",
                dev, planned);
        led = led2;  // keep the finer run
    }

    PropagationResult r;
    r.final_occupation = led.occupation;
    r.work = led.work;
    r.heat = led.heat;
    r.chemical_work = bath->chemical_potential() * (led.occupation - occupation);
    r.trajectory = std::move(trajectory);
    return r;
}

PropagationResult quasistatic_stroke(const Protocol& protocol, const Bath& bath,
                                     const IntegratorConfig& integrator) {
    if (protocol.duration() <= 0.0)
        throw std::invalid_argument("quasistatic stroke requires positive duration");

    const double temperature = bath.temperature();
    const double mu = bath.chemical_potential();
    const std::vector<Segment> segments = split_into_segments(protocol);

    PropagationResult r;
    r.final_occupation = fermi_occupation(protocol.end_energy(), bath);
    r.chemical_work = mu * (r.final_occupation - fermi_occupation(protocol.start_energy(), bath));
    r.work = 0.0;
    r.heat = 0.0;

    for (const Segment& seg : segments) {
        // Quadrature only: the occupation is pinned to f(energy(t)).
        const long n = plan_segment_steps(seg, 0.0, temperature, protocol.duration(), integrator);
        const double h = (seg.t1 - seg.t0) / static_cast<double>(n);

        auto deriv = [&](double t_local, double& dw, double& dq) {
            const double e = seg.e0 + seg.slope * t_local;
            const double f = fermi_occupation(e, bath);
            const double fprime = -f * (1.0 - f) / temperature;  // df/de
            dw = -f * seg.slope;
            dq = (e - mu) * fprime * seg.slope;
        };

        for (long i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * h;
            if (integrator.record_trajectory) {
                const double e = seg.e0 + seg.slope * t;
                r.trajectory.push_back({seg.t0 + t, e, fermi_occupation(e, bath)});
            }
            double dw1, dq1, dw2, dq2, dw4, dq4;
            deriv(t, dw1, dq1);
            deriv(t + 0.5 * h, dw2, dq2);
            deriv(t + h, dw4, dq4);
            // RK4 collapses to Simpson when the integrand has no state.
            r.work += h / 6.0 * (dw1 + 4.0 * dw2 + dw4);
            r.heat += h / 6.0 * (dq1 + 4.0 * dq2 + dq4);
        }
    }

    if (integrator.record_trajectory)
        r.trajectory.push_back({protocol.duration(), protocol.end_energy(), r.final_occupation});
    return r;
}

}  // namespace fermicycle
