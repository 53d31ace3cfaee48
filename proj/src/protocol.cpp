#include "fermicycle/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fermicycle {

namespace {

void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

}  // namespace

Protocol::Protocol(Kind kind, double from, double to, double duration,
                   std::vector<ProtocolKnot> knots)
    : kind_(kind), from_(from), to_(to), duration_(duration), knots_(std::move(knots)) {}

Protocol Protocol::constant(double energy, double duration) {
    require(std::isfinite(energy), "protocol energy must be finite");
    require(std::isfinite(duration) && duration > 0.0,
            "constant protocol duration must be > 0");
    return Protocol(Kind::Constant, energy, energy, duration, {});
}

Protocol Protocol::linear(double from, double to, double duration) {
    require(std::isfinite(from) && std::isfinite(to), "protocol energies must be finite");
    require(std::isfinite(duration) && duration >= 0.0,
            "linear protocol duration must be >= 0");
    return Protocol(Kind::Linear, from, to, duration, {});
}

Protocol Protocol::sampled(std::vector<ProtocolKnot> knots) {
    require(knots.size() >= 2, "sampled protocol needs at least two knots");
    require(knots.front().time == 0.0, "sampled protocol must start at t = 0");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        require(std::isfinite(knots[i].time) && std::isfinite(knots[i].energy),
                "sampled knot must be finite");
        if (i > 0)
            require(knots[i].time > knots[i - 1].time,
                    "sampled knot times must be strictly increasing");
    }
    const double duration = knots.back().time;
    const double from = knots.front().energy;
    const double to = knots.back().energy;
    return Protocol(Kind::Sampled, from, to, duration, std::move(knots));
}

double Protocol::start_energy() const noexcept { return from_; }

double Protocol::end_energy() const noexcept { return to_; }

double Protocol::energy_at(double t) const {
    if (duration_ <= 0.0) return to_;
    t = std::clamp(t, 0.0, duration_);
    switch (kind_) {
        case Kind::Constant:
            return from_;
        case Kind::Linear:
            return from_ + (to_ - from_) * (t / duration_);
        case Kind::Sampled: {
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const ProtocolKnot& k) { return v < k.time; });
            if (it == knots_.begin()) return knots_.front().energy;
            if (it == knots_.end()) return knots_.back().energy;
            const ProtocolKnot& hi = *it;
            const ProtocolKnot& lo = *(it - 1);
            const double w = (t - lo.time) / (hi.time - lo.time);
            return lo.energy + (hi.energy - lo.energy) * w;
        }
    }
    return to_;
}

double Protocol::slope_at(double t) const {
    if (duration_ <= 0.0) return 0.0;
    t = std::clamp(t, 0.0, duration_);
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::Linear:
            return (to_ - from_) / duration_;
        case Kind::Sampled: {
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const ProtocolKnot& k) { return v < k.time; });
            if (it == knots_.begin()) ++it;
            if (it == knots_.end()) --it;
            const ProtocolKnot& hi = *it;
            const ProtocolKnot& lo = *(it - 1);
            return (hi.energy - lo.energy) / (hi.time - lo.time);
        }
    }
    return 0.0;
}

double Protocol::total_variation() const {
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::Linear:
            return std::abs(to_ - from_);
        case Kind::Sampled: {
            double tv = 0.0;
            for (std::size_t i = 1; i < knots_.size(); ++i)
                tv += std::abs(knots_[i].energy - knots_[i - 1].energy);
            return tv;
        }
    }
    return 0.0;
}

std::vector<double> Protocol::breakpoints() const {
    if (kind_ == Kind::Sampled) {
        std::vector<double> times;
        times.reserve(knots_.size());
        for (const ProtocolKnot& k : knots_) times.push_back(k.time);
        return times;
    }
    return {0.0, duration_};
}

}  // namespace fermicycle
