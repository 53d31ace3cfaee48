#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fermicycle/engine.hpp"
#include "fermicycle/protocol.hpp"

namespace fermicycle::harness {

struct BathSpec {
    std::string label;
    double temperature = 0.0;
    double chemical_potential = 0.0;
    double coupling = 0.0;
};

struct ProtocolSpec {
    Protocol::Kind kind = Protocol::Kind::Constant;
    double energy = 0.0;  // constant
    double from = 0.0;    // linear
    double to = 0.0;      // linear
    std::vector<ProtocolKnot> knots;

    double start_energy() const;
    double end_energy() const;
    Protocol build(double duration) const;
};

struct StrokeSpec {
    double duration = 0.0;
    std::optional<std::string> bath;
    ProtocolSpec protocol;
};

struct SweepSpec {
    enum class Scale { Lin, Log };
    std::string path;
    Scale scale = Scale::Lin;
    double from = 0.0;
    double to = 0.0;
    long count = 0;
};

// Validated mirror of the JSON config. Kept as editable specs (rather than
// a built Cycle) so sweeps can mutate one parameter and rebuild.
struct RunConfig {
    std::vector<BathSpec> baths;
    std::vector<StrokeSpec> strokes;
    LimitCycleConfig limit_cycle;
    bool quasistatic = false;
    std::optional<SweepSpec> sweep;

    Cycle build_cycle() const;
};

// Load and validate a JSON config file. Unknown keys anywhere are hard
// errors; every message names the offending field.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& origin);

// Grid points of the sweep, in emission order.
std::vector<double> sweep_grid(const SweepSpec& sweep);

// Set the swept parameter to `value`. Editing a protocol endpoint re-pins
// adjacent decoupled linear connector strokes so the level stays continuous
// around the loop. Throws ConfigError for unsupported paths (the message
// lists the supported forms).
void apply_sweep_value(RunConfig& config, const std::string& path, double value);

// Path validation without mutation (used at load time).
void validate_sweep_path(const RunConfig& config, const std::string& path);

}  // namespace fermicycle::harness
