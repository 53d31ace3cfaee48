#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fermicycle/engine.hpp"

namespace fermicycle {

// Marker for a bound whose closed-form expression has not been entered at
// its extension point yet. Distinct from an undefined efficiency: the
// evaluator exists and validates its inputs, it just has no formula to
// apply. Reports and CSV serialize it as an empty field.
struct NotTranscribed {};

using BoundValue = std::variant<NotTranscribed, double>;

inline bool is_available(const BoundValue& v) { return std::holds_alternative<double>(v); }

inline std::optional<double> to_optional(const BoundValue& v) {
    if (const double* d = std::get_if<double>(&v)) return *d;
    return std::nullopt;
}

struct HeatEntry {
    double temperature;
    double heat;  // absorbed by the engine when positive
};

// Per-bath heats over one period, the input shared by every multi-bath
// bound. Entries with negligible heat relative to the cycle's heat scale
// are dropped when deriving from a report.
class HeatProfile {
public:
    explicit HeatProfile(std::vector<HeatEntry> entries);

    static HeatProfile from_report(const CycleReport& report);

    const std::vector<HeatEntry>& entries() const noexcept { return entries_; }
    double t_min() const;
    double t_max() const;
    double heat_absorbed() const;   // sum of positive entries
    double entropy_intake() const;  // sum of Q/T over positive entries

private:
    std::vector<HeatEntry> entries_;
};

// 1 - T_cold / T_hot. Requires T_hot >= T_cold > 0.
double carnot_bound(double t_hot, double t_cold);

// Clausius-inequality consequence for many baths:
// eta <= 1 - T_min * S_in / Q_in with Q_in the absorbed heat and S_in the
// entropy intake. Collapses to the two-bath Carnot value when all heat
// enters at T_max. Throws when no entry absorbs heat.
double clausius_multibath_bound(const HeatProfile& profile);

// Exact maximal efficiency of a reversible cycle exchanging the given
// per-bath heats. The closed form is an extension point; until it is
// entered the evaluator validates its input and reports NotTranscribed.
BoundValue generalized_carnot_bound(const HeatProfile& profile);

// Correlation-based efficiency bound evaluated on a full limit-cycle trace
// (state, level energy and attached bath at every sample). The closed form
// is an extension point; the trace is validated (periodicity) either way.
BoundValue info_theoretic_bound(const CycleTrace& trace,
                                double periodicity_tolerance = 1e-9);

struct OrderingViolation {
    std::string name;  // e.g. "eta_measured>eta_carnot"
    double magnitude;  // amount by which the inequality failed
};

struct BoundReport {
    std::optional<double> eta_measured;
    double eta_carnot = 0.0;
    std::optional<double> eta_clausius;  // absent when the cycle absorbs no heat
    BoundValue eta_generalized = NotTranscribed{};
    BoundValue eta_info = NotTranscribed{};
    std::vector<OrderingViolation> ordering_violations;
};

// Evaluate every bound available for the report (and trace, when provided)
// and record each inequality breach instead of dropping it.
BoundReport certify(const CycleReport& report);
BoundReport certify(const CycleReport& report, const CycleTrace& trace);

}  // namespace fermicycle
