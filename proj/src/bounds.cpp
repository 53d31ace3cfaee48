#include "fermicycle/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fermicycle/tolerances.hpp"

namespace fermicycle {

HeatProfile::HeatProfile(std::vector<HeatEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("heat profile needs at least one entry");
    for (const HeatEntry& e : entries_) {
        if (!(std::isfinite(e.temperature) && e.temperature > 0.0))
            throw std::invalid_argument("heat profile temperature must be finite and > 0");
        if (!std::isfinite(e.heat)) throw std::invalid_argument("heat must be finite");
    }
}

HeatProfile HeatProfile::from_report(const CycleReport& report) {
    double scale = 0.0;
    for (const BathHeat& bh : report.bath_heats) scale += std::abs(bh.heat);

    std::vector<HeatEntry> entries;
    for (const BathHeat& bh : report.bath_heats)
        if (std::abs(bh.heat) >= Tolerances::negligible_heat * scale && bh.heat != 0.0)
            entries.push_back({bh.temperature, bh.heat});
    if (entries.empty())
        throw std::invalid_argument("report exchanges no heat; no profile to derive");
    return HeatProfile(std::move(entries));
}

double HeatProfile::t_min() const {
    double t = entries_.front().temperature;
    for (const HeatEntry& e : entries_) t = std::min(t, e.temperature);
    return t;
}

double HeatProfile::t_max() const {
    double t = entries_.front().temperature;
    for (const HeatEntry& e : entries_) t = std::max(t, e.temperature);
    return t;
}

double HeatProfile::heat_absorbed() const {
    double q = 0.0;
    for (const HeatEntry& e : entries_)
        if (e.heat > 0.0) q += e.heat;
    return q;
}

double HeatProfile::entropy_intake() const {
    double s = 0.0;
    for (const HeatEntry& e : entries_)
        if (e.heat > 0.0) s += e.heat / e.temperature;
    return s;
}

double carnot_bound(double t_hot, double t_cold) {
    if (!(t_cold > 0.0) || !(t_hot >= t_cold))
        throw std::invalid_argument("carnot bound requires T_hot >= T_cold > 0");
    return 1.0 - t_cold / t_hot;
}

double clausius_multibath_bound(const HeatProfile& profile) {
    const double q_in = profile.heat_absorbed();
    if (q_in <= 0.0) throw std::invalid_argument("no absorbing entry in heat profile");
    return 1.0 - profile.t_min() * profile.entropy_intake() / q_in;
}

BoundValue generalized_carnot_bound(const HeatProfile& profile) {
    if (profile.heat_absorbed() <= 0.0)
        throw std::invalid_argument("no absorbing entry in heat profile");
    // Extension point: return the closed-form maximal efficiency of a
    // reversible multi-bath cycle with this heat profile. The property
    // suite in tests/ (two-bath reduction, agreement with the Clausius
    // value on reversible completions, never above Carnot) activates as
    // soon as this returns a value.
    return NotTranscribed{};
}

BoundValue info_theoretic_bound(const CycleTrace& trace, double periodicity_tolerance) {
    if (trace.samples.size() < 2)
        throw std::invalid_argument("trace needs at least two samples");
    const double wrap =
        std::abs(trace.samples.front().occupation - trace.samples.back().occupation);
    if (wrap > periodicity_tolerance)
        throw std::invalid_argument("trace is not periodic: occupation wraps by " +
                                    std::to_string(wrap));
    // Extension point: evaluate the correlation-based bound on the sampled
    // period. Everything a functional could need is in hand: the state
    // (dot_state(sample.occupation)), the spectrum (dot_spectrum(sample.energy)),
    // the attached bath (trace.stroke_baths[sample.stroke]) at every sample,
    // and the correlation functionals of thermo.hpp
    // (state_hamiltonian_covariance, energy_variance, relative_entropy).
    return NotTranscribed{};
}

namespace {

void check_order(std::vector<OrderingViolation>& out, const std::string& name, double lhs,
                 double rhs) {
    if (lhs > rhs + Tolerances::bound_order) out.push_back({name, lhs - rhs});
}

BoundReport certify_impl(const CycleReport& report, const CycleTrace* trace) {
    BoundReport bounds;
    bounds.eta_measured = efficiency(report);

    double t_min = report.bath_heats.front().temperature;
    double t_max = t_min;
    for (const BathHeat& bh : report.bath_heats) {
        t_min = std::min(t_min, bh.temperature);
        t_max = std::max(t_max, bh.temperature);
    }
    bounds.eta_carnot = carnot_bound(t_max, t_min);

    if (heat_absorbed(report) > 0.0) {
        const HeatProfile profile = HeatProfile::from_report(report);
        bounds.eta_clausius = clausius_multibath_bound(profile);
        bounds.eta_generalized = generalized_carnot_bound(profile);
    }
    if (trace) bounds.eta_info = info_theoretic_bound(*trace);

    auto& v = bounds.ordering_violations;
    if (bounds.eta_clausius)
        check_order(v, "eta_clausius>eta_carnot", *bounds.eta_clausius, bounds.eta_carnot);
    if (const auto gen = to_optional(bounds.eta_generalized))
        check_order(v, "eta_generalized>eta_carnot", *gen, bounds.eta_carnot);
    if (const auto info = to_optional(bounds.eta_info))
        check_order(v, "eta_info>eta_carnot", *info, bounds.eta_carnot);

    if (bounds.eta_measured) {
        const double eta = *bounds.eta_measured;
        check_order(v, "eta_measured>eta_carnot", eta, bounds.eta_carnot);
        if (bounds.eta_clausius)
            check_order(v, "eta_measured>eta_clausius", eta, *bounds.eta_clausius);
        if (const auto gen = to_optional(bounds.eta_generalized))
            check_order(v, "eta_measured>eta_generalized", eta, *gen);
        if (const auto info = to_optional(bounds.eta_info))
            check_order(v, "eta_measured>eta_info", eta, *info);
    }
    return bounds;
}

}  // namespace

BoundReport certify(const CycleReport& report) { return certify_impl(report, nullptr); }

BoundReport certify(const CycleReport& report, const CycleTrace& trace) {
    return certify_impl(report, &trace);
}

}  // namespace fermicycle
