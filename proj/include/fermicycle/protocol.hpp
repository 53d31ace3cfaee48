#pragma once

#include <vector>

namespace fermicycle {

struct ProtocolKnot {
    double time;
    double energy;
};

// Drive protocol for the dot level over one stroke: constant, linear ramp,
// or a piecewise-linear sampled shape. Time runs over [0, duration].
//
// A linear protocol may have zero duration: that is an instantaneous quench,
// legal only while decoupled from any bath (the stroke layer enforces this)
// and bookkept as exact algebraic work.
class Protocol {
public:
    enum class Kind { Constant, Linear, Sampled };

    static Protocol constant(double energy, double duration);
    static Protocol linear(double from, double to, double duration);
    static Protocol sampled(std::vector<ProtocolKnot> knots);

    Kind kind() const noexcept { return kind_; }
    double duration() const noexcept { return duration_; }
    double start_energy() const noexcept;
    double end_energy() const noexcept;

    // Level energy at time t (t clamped to [0, duration]). For a
    // zero-duration quench this reports the post-quench value.
    double energy_at(double t) const;

    // d(energy)/dt at time t; piecewise constant for sampled protocols and
    // taken from the right at interior breakpoints.
    double slope_at(double t) const;

    // Sum of |energy change| across segments; drives integrator step sizing.
    double total_variation() const;

    // Segment boundaries in stroke time, always starting 0 and ending at
    // duration. The integrator never steps across one.
    std::vector<double> breakpoints() const;

    const std::vector<ProtocolKnot>& knots() const noexcept { return knots_; }

private:
    Protocol(Kind kind, double from, double to, double duration, std::vector<ProtocolKnot> knots);

    Kind kind_;
    double from_;
    double to_;
    double duration_;
    std::vector<ProtocolKnot> knots_;  // populated for Sampled only
};

}  // namespace fermicycle
