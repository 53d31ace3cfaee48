#pragma once

// Shared test helpers: a deterministic RNG, closed-form oracles independent
// of the library's propagation path, and random cycle builders.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fermicycle/engine.hpp"

namespace testsupport {

// splitmix-seeded xorshift-free mt19937_64 with a fixed mapping to doubles,
// so every platform draws the same sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    long uniform_int(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(next_unit() * static_cast<double>(hi - lo + 1));
    }

private:
    double next_unit() {
        // splitmix64; top 53 bits to [0, 1)
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }

    std::uint64_t state_;
};

inline double fermi(double energy, double temperature, double mu = 0.0) {
    const double x = (energy - mu) / temperature;
    if (x >= 0.0) {
        const double w = std::exp(-x);
        return w / (1.0 + w);
    }
    return 1.0 / (1.0 + std::exp(x));
}

// Two-stroke quench + thermalize cycle solved as a closed-form two-point
// fixed-point map: x = exp(-Gamma tau) per thermalization stroke,
// p_hot_start = (f_c + f_h x)/(1 + x), p_hot_end = (f_h + f_c x)/(1 + x).
struct OttoOracle {
    double f_hot;
    double f_cold;
    double p_hot_start;
    double p_hot_end;
    double occupation_swing;  // p_hot_end - p_hot_start
    double heat_hot;
    double heat_cold;
    double net_work;
    double eta;
    double entropy_production;
};

inline OttoOracle otto_oracle(double t_hot, double t_cold, double e_hot, double e_cold,
                              double gamma_tau) {
    OttoOracle o;
    o.f_hot = fermi(e_hot, t_hot);
    o.f_cold = fermi(e_cold, t_cold);
    const double x = std::exp(-gamma_tau);
    o.p_hot_start = (o.f_cold + o.f_hot * x) / (1.0 + x);
    o.p_hot_end = (o.f_hot + o.f_cold * x) / (1.0 + x);
    o.occupation_swing = o.p_hot_end - o.p_hot_start;
    o.heat_hot = e_hot * o.occupation_swing;
    o.heat_cold = -e_cold * o.occupation_swing;
    o.net_work = o.heat_hot + o.heat_cold;
    o.eta = o.net_work / o.heat_hot;
    o.entropy_production = -o.heat_hot / t_hot - o.heat_cold / t_cold;
    return o;
}

// Exact work of a quasistatic linear stroke from energy a to b:
// W = -int_a^b f de = T [ln(1 + e^{-(b-mu)/T}) - ln(1 + e^{-(a-mu)/T})].
inline double quasistatic_linear_work(double a, double b, double temperature, double mu = 0.0) {
    return temperature * (std::log1p(std::exp(-(b - mu) / temperature)) -
                          std::log1p(std::exp(-(a - mu) / temperature)));
}

// Build the canonical two-stroke Otto cycle with explicit quench segments.
inline fermicycle::Cycle make_otto_cycle(double t_hot, double t_cold, double e_hot, double e_cold,
                                         double tau_hot, double tau_cold, double gamma = 1.0,
                                         double mu = 0.0) {
    using namespace fermicycle;
    std::vector<Bath> baths{Bath("hot", t_hot, mu, gamma), Bath("cold", t_cold, mu, gamma)};
    std::vector<Stroke> strokes;
    strokes.push_back({Protocol::linear(e_cold, e_hot, 0.0), std::nullopt});
    strokes.push_back({Protocol::constant(e_hot, tau_hot), std::string("hot")});
    strokes.push_back({Protocol::linear(e_hot, e_cold, 0.0), std::nullopt});
    strokes.push_back({Protocol::constant(e_cold, tau_cold), std::string("cold")});
    return Cycle(std::move(strokes), std::move(baths));
}

// Driven cycle touching a single bath: quench out, relax, quench back, relax.
inline fermicycle::Cycle make_single_bath_cycle(double temperature, double e_low, double e_high,
                                                double tau, double gamma = 1.0, double mu = 0.0) {
    using namespace fermicycle;
    std::vector<Bath> baths{Bath("only", temperature, mu, gamma)};
    std::vector<Stroke> strokes;
    strokes.push_back({Protocol::linear(e_low, e_high, 0.0), std::nullopt});
    strokes.push_back({Protocol::constant(e_high, tau), std::string("only")});
    strokes.push_back({Protocol::linear(e_high, e_low, 0.0), std::nullopt});
    strokes.push_back({Protocol::constant(e_low, tau), std::string("only")});
    return Cycle(std::move(strokes), std::move(baths));
}

// Random quench + thermalize cycle over 2 or 3 baths. Parameter ranges keep
// every cycle genuinely irreversible: level-to-temperature ratios stay in
// [0.3, 3] where the equilibrium occupation is responsive, and consecutive
// strokes differ in e/T by at least 0.1.
inline fermicycle::Cycle random_cycle(Rng& rng, int bath_count, bool randomize_mu = false) {
    using namespace fermicycle;

    std::vector<double> ratios;  // (e - mu)/T per thermalization stroke
    ratios.push_back(rng.uniform(0.3, 3.0));
    for (int b = 1; b < bath_count; ++b) {
        const bool closes_loop = b == bath_count - 1;
        double r = 0.0;
        do {
            r = rng.uniform(0.3, 3.0);
        } while (std::abs(r - ratios.back()) < 0.1 ||
                 (closes_loop && std::abs(r - ratios.front()) < 0.1));
        ratios.push_back(r);
    }

    std::vector<Bath> baths;
    std::vector<double> energies;
    for (int b = 0; b < bath_count; ++b) {
        const double temperature = rng.uniform(0.5, 4.0);
        const double mu = randomize_mu ? rng.uniform(-0.5, 0.5) : 0.0;
        baths.emplace_back("bath" + std::to_string(b), temperature, mu, rng.uniform(0.5, 2.0));
        energies.push_back(mu + ratios[static_cast<std::size_t>(b)] * temperature);
    }

    std::vector<Stroke> strokes;
    for (int b = 0; b < bath_count; ++b) {
        const double previous = energies[static_cast<std::size_t>((b + bath_count - 1) % bath_count)];
        const double level = energies[static_cast<std::size_t>(b)];
        const double tau = rng.uniform(0.2, 10.0) / baths[static_cast<std::size_t>(b)].coupling();
        strokes.push_back({Protocol::linear(previous, level, 0.0), std::nullopt});
        strokes.push_back({Protocol::constant(level, tau), baths[static_cast<std::size_t>(b)].label()});
    }
    return Cycle(std::move(strokes), std::move(baths));
}

}  // namespace testsupport
