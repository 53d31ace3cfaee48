#pragma once

namespace fermicycle {

// Central tolerance record. Everything downstream (cycle ledgers, bound
// comparisons, CSV re-verification) reads these constants so that the
// accuracy budget lives in one place.
struct Tolerances {
    // |sum p_i - 1| allowed on population vectors.
    static constexpr double normalization = 1e-12;

    // First-law closure per stroke and per cycle, relative to max(1, scale).
    static constexpr double first_law = 1e-8;

    // Entropy production may dip this far below zero from ledger roundoff.
    static constexpr double entropy_floor = 1e-10;

    // Absolute slack when comparing an efficiency against a bound.
    // Looser than ledger accumulation error, tighter than physics.
    static constexpr double bound_order = 1e-9;

    // Per-bath heats below this fraction of the cycle's heat scale are
    // dropped when deriving a heat profile.
    static constexpr double negligible_heat = 1e-12;

    // Allowed level-energy mismatch at stroke junctions.
    static constexpr double junction_continuity = 1e-9;

    // Default |p(0) - p(period)| accepted when certifying a trace as periodic.
    static constexpr double trace_periodicity = 1e-9;
};

}  // namespace fermicycle
