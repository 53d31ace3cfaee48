#include "fermicycle/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fermicycle/errors.hpp"
#include "fermicycle/tolerances.hpp"

namespace fermicycle::harness {

using nlohmann::json;

namespace {

void expect_object(const json& node, const std::string& where) {
    if (!node.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown_keys(const json& node, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : node.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

const json& require_key(const json& node, const std::string& where, const char* key) {
    auto it = node.find(key);
    if (it == node.end()) throw ConfigError(where + ": missing key '" + std::string(key) + "'");
    return *it;
}

double as_number(const json& node, const std::string& where) {
    if (!node.is_number()) throw ConfigError(where + ": expected a number");
    return node.get<double>();
}

long as_integer(const json& node, const std::string& where) {
    if (!node.is_number_integer()) throw ConfigError(where + ": expected an integer");
    return node.get<long>();
}

std::string as_string(const json& node, const std::string& where) {
    if (!node.is_string()) throw ConfigError(where + ": expected a string");
    return node.get<std::string>();
}

BathSpec parse_bath(const json& node, const std::string& where) {
    expect_object(node, where);
    reject_unknown_keys(node, where, {"label", "T", "mu", "Gamma"});
    BathSpec bath;
    bath.label = as_string(require_key(node, where, "label"), where + ".label");
    if (bath.label.empty()) throw ConfigError(where + ".label: must not be empty");
    // labels become CSV column names (Q[<label>]) and sweep-path segments
    if (bath.label.find_first_of(",[]\"\n") != std::string::npos)
        throw ConfigError(where + ".label: must not contain ',', '[', ']', '\"' or newlines");
    bath.temperature = as_number(require_key(node, where, "T"), where + ".T");
    if (!(bath.temperature > 0.0)) throw ConfigError(where + ".T: must be > 0");
    bath.chemical_potential = as_number(require_key(node, where, "mu"), where + ".mu");
    bath.coupling = as_number(require_key(node, where, "Gamma"), where + ".Gamma");
    if (!(bath.coupling > 0.0)) throw ConfigError(where + ".Gamma: must be > 0");
    return bath;
}

ProtocolSpec parse_protocol(const json& node, const std::string& where, double duration) {
    expect_object(node, where);
    ProtocolSpec protocol;
    const std::string kind = as_string(require_key(node, where, "kind"), where + ".kind");
    if (kind == "constant") {
        reject_unknown_keys(node, where, {"kind", "energy"});
        protocol.kind = Protocol::Kind::Constant;
        protocol.energy = as_number(require_key(node, where, "energy"), where + ".energy");
    } else if (kind == "linear") {
        reject_unknown_keys(node, where, {"kind", "from", "to"});
        protocol.kind = Protocol::Kind::Linear;
        protocol.from = as_number(require_key(node, where, "from"), where + ".from");
        protocol.to = as_number(require_key(node, where, "to"), where + ".to");
    } else if (kind == "sampled") {
        reject_unknown_keys(node, where, {"kind", "knots"});
        protocol.kind = Protocol::Kind::Sampled;
        const json& knots = require_key(node, where, "knots");
        if (!knots.is_array() || knots.size() < 2)
            throw ConfigError(where + ".knots: expected an array of at least two [t, energy] pairs");
        for (std::size_t i = 0; i < knots.size(); ++i) {
            const json& k = knots[i];
            const std::string kwhere = where + ".knots[" + std::to_string(i) + "]";
            if (!k.is_array() || k.size() != 2)
                throw ConfigError(kwhere + ": expected a [t, energy] pair");
            protocol.knots.push_back(
                {as_number(k[0], kwhere + "[0]"), as_number(k[1], kwhere + "[1]")});
        }
        const double span = protocol.knots.back().time;
        if (std::abs(span - duration) > 1e-12 * std::max(1.0, duration))
            throw ConfigError(where + ".knots: last knot time " + std::to_string(span) +
                              " must equal the stroke duration " + std::to_string(duration));
    } else {
        throw ConfigError(where + ".kind: unknown kind '" + kind +
                          "' (expected constant, linear or sampled)");
    }
    return protocol;
}

StrokeSpec parse_stroke(const json& node, const std::string& where) {
    expect_object(node, where);
    reject_unknown_keys(node, where, {"duration", "bath", "protocol"});
    StrokeSpec stroke;
    stroke.duration = as_number(require_key(node, where, "duration"), where + ".duration");
    if (!(stroke.duration >= 0.0) || !std::isfinite(stroke.duration))
        throw ConfigError(where + ".duration: must be a finite number >= 0");
    if (auto it = node.find("bath"); it != node.end() && !it->is_null())
        stroke.bath = as_string(*it, where + ".bath");
    stroke.protocol =
        parse_protocol(require_key(node, where, "protocol"), where + ".protocol", stroke.duration);
    return stroke;
}

SweepSpec parse_sweep(const json& node, const std::string& where) {
    expect_object(node, where);
    reject_unknown_keys(node, where, {"path", "scale", "from", "to", "count"});
    SweepSpec sweep;
    sweep.path = as_string(require_key(node, where, "path"), where + ".path");
    const std::string scale = as_string(require_key(node, where, "scale"), where + ".scale");
    if (scale == "lin")
        sweep.scale = SweepSpec::Scale::Lin;
    else if (scale == "log")
        sweep.scale = SweepSpec::Scale::Log;
    else
        throw ConfigError(where + ".scale: expected 'lin' or 'log', got '" + scale + "'");
    sweep.from = as_number(require_key(node, where, "from"), where + ".from");
    sweep.to = as_number(require_key(node, where, "to"), where + ".to");
    sweep.count = as_integer(require_key(node, where, "count"), where + ".count");
    if (sweep.count < 2) throw ConfigError(where + ".count: grid needs at least 2 points");
    if (!(sweep.from < sweep.to))
        throw ConfigError(where + ": endpoints must satisfy from < to");
    if (sweep.scale == SweepSpec::Scale::Log && !(sweep.from > 0.0))
        throw ConfigError(where + ": log grids need from > 0");
    return sweep;
}

}  // namespace

double ProtocolSpec::start_energy() const {
    switch (kind) {
        case Protocol::Kind::Constant: return energy;
        case Protocol::Kind::Linear: return from;
        case Protocol::Kind::Sampled: return knots.front().energy;
    }
    return energy;
}

double ProtocolSpec::end_energy() const {
    switch (kind) {
        case Protocol::Kind::Constant: return energy;
        case Protocol::Kind::Linear: return to;
        case Protocol::Kind::Sampled: return knots.back().energy;
    }
    return energy;
}

Protocol ProtocolSpec::build(double duration) const {
    switch (kind) {
        case Protocol::Kind::Constant: return Protocol::constant(energy, duration);
        case Protocol::Kind::Linear: return Protocol::linear(from, to, duration);
        case Protocol::Kind::Sampled: return Protocol::sampled(knots);
    }
    return Protocol::constant(energy, duration);
}

Cycle RunConfig::build_cycle() const {
    std::vector<Bath> cycle_baths;
    for (const BathSpec& b : baths)
        cycle_baths.emplace_back(b.label, b.temperature, b.chemical_potential, b.coupling);

    std::vector<Stroke> cycle_strokes;
    for (std::size_t i = 0; i < strokes.size(); ++i) {
        try {
            cycle_strokes.push_back({strokes[i].protocol.build(strokes[i].duration),
                                     strokes[i].bath});
        } catch (const std::invalid_argument& e) {
            throw ConfigError("strokes[" + std::to_string(i) + "]: " + e.what());
        }
    }
    return Cycle(std::move(cycle_strokes), std::move(cycle_baths));
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

RunConfig parse_config(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    expect_object(root, origin);
    reject_unknown_keys(root, origin, {"baths", "strokes", "limit_cycle", "quasistatic", "sweep"});

    RunConfig config;

    const json& baths = require_key(root, origin, "baths");
    if (!baths.is_array() || baths.empty())
        throw ConfigError(origin + ".baths: expected a non-empty array");
    for (std::size_t i = 0; i < baths.size(); ++i)
        config.baths.push_back(parse_bath(baths[i], origin + ".baths[" + std::to_string(i) + "]"));

    const json& strokes = require_key(root, origin, "strokes");
    if (!strokes.is_array() || strokes.empty())
        throw ConfigError(origin + ".strokes: expected a non-empty array");
    for (std::size_t i = 0; i < strokes.size(); ++i)
        config.strokes.push_back(
            parse_stroke(strokes[i], origin + ".strokes[" + std::to_string(i) + "]"));

    if (auto it = root.find("limit_cycle"); it != root.end()) {
        const std::string where = origin + ".limit_cycle";
        expect_object(*it, where);
        reject_unknown_keys(*it, where, {"tol", "max_periods", "accel"});
        if (auto t = it->find("tol"); t != it->end()) {
            config.limit_cycle.tolerance = as_number(*t, where + ".tol");
            if (!(config.limit_cycle.tolerance > 0.0))
                throw ConfigError(where + ".tol: must be > 0");
        }
        if (auto m = it->find("max_periods"); m != it->end()) {
            config.limit_cycle.max_periods = as_integer(*m, where + ".max_periods");
            if (config.limit_cycle.max_periods < 1)
                throw ConfigError(where + ".max_periods: must be >= 1");
        }
        if (auto a = it->find("accel"); a != it->end()) {
            const std::string accel = as_string(*a, where + ".accel");
            if (accel == "affine")
                config.limit_cycle.method = LimitCycleConfig::Method::AffineSolve;
            else if (accel == "iterate")
                config.limit_cycle.method = LimitCycleConfig::Method::Iterate;
            else
                throw ConfigError(where + ".accel: expected 'affine' or 'iterate'");
        }
    }

    if (auto it = root.find("quasistatic"); it != root.end()) {
        if (!it->is_boolean()) throw ConfigError(origin + ".quasistatic: expected a boolean");
        config.quasistatic = it->get<bool>();
    }

    if (auto it = root.find("sweep"); it != root.end())
        config.sweep = parse_sweep(*it, origin + ".sweep");

    // Surface cycle-level problems (unresolved labels, broken junctions) at
    // load time rather than first run.
    config.build_cycle();
    if (config.sweep) validate_sweep_path(config, config.sweep->path);
    return config;
}

std::vector<double> sweep_grid(const SweepSpec& sweep) {
    std::vector<double> grid(static_cast<std::size_t>(sweep.count));
    const double n = static_cast<double>(sweep.count - 1);
    for (long i = 0; i < sweep.count; ++i) {
        const double w = static_cast<double>(i) / n;
        grid[static_cast<std::size_t>(i)] =
            sweep.scale == SweepSpec::Scale::Lin
                ? sweep.from + (sweep.to - sweep.from) * w
                : std::exp(std::log(sweep.from) + (std::log(sweep.to) - std::log(sweep.from)) * w);
    }
    // Pin the endpoints exactly regardless of rounding.
    grid.front() = sweep.from;
    grid.back() = sweep.to;
    return grid;
}

namespace {

const std::string kSupportedPaths =
    "supported sweep paths: strokes[<index>].duration, strokes[<index>].protocol.energy "
    "(constant), strokes[<index>].protocol.from / .to (linear), baths[<label>].T, "
    "baths[<label>].mu, baths[<label>].Gamma";

struct ParsedPath {
    enum class Target {
        StrokeDuration,
        ProtocolEnergy,
        ProtocolFrom,
        ProtocolTo,
        BathTemperature,
        BathMu,
        BathGamma,
    };
    Target target;
    std::size_t stroke = 0;
    std::string bath;
};

ParsedPath parse_path(const RunConfig& config, const std::string& path) {
    auto fail = [&](const std::string& why) -> ParsedPath {
        throw ConfigError("sweep path '" + path + "': " + why + "; " + kSupportedPaths);
    };

    auto bracket = [&](const std::string& prefix) -> std::optional<std::pair<std::string, std::string>> {
        if (path.rfind(prefix + "[", 0) != 0) return std::nullopt;
        const std::size_t close = path.find(']');
        if (close == std::string::npos) return std::nullopt;
        return std::make_pair(path.substr(prefix.size() + 1, close - prefix.size() - 1),
                              path.substr(close + 1));
    };

    if (auto hit = bracket("strokes")) {
        const auto& [index_text, rest] = *hit;
        std::size_t index = 0;
        try {
            std::size_t consumed = 0;
            index = std::stoul(index_text, &consumed);
            if (consumed != index_text.size()) throw std::invalid_argument("trailing");
        } catch (...) {
            fail("stroke index '" + index_text + "' is not a number");
        }
        if (index >= config.strokes.size())
            fail("stroke index " + index_text + " out of range (have " +
                 std::to_string(config.strokes.size()) + " strokes)");
        const StrokeSpec& stroke = config.strokes[index];
        if (rest == ".duration") {
            if (stroke.protocol.kind == Protocol::Kind::Sampled)
                fail("duration of a sampled protocol is fixed by its knots");
            return {ParsedPath::Target::StrokeDuration, index, {}};
        }
        if (rest == ".protocol.energy") {
            if (stroke.protocol.kind != Protocol::Kind::Constant)
                fail("protocol.energy applies to constant protocols only");
            return {ParsedPath::Target::ProtocolEnergy, index, {}};
        }
        if (rest == ".protocol.from") {
            if (stroke.protocol.kind != Protocol::Kind::Linear)
                fail("protocol.from applies to linear protocols only");
            return {ParsedPath::Target::ProtocolFrom, index, {}};
        }
        if (rest == ".protocol.to") {
            if (stroke.protocol.kind != Protocol::Kind::Linear)
                fail("protocol.to applies to linear protocols only");
            return {ParsedPath::Target::ProtocolTo, index, {}};
        }
        fail("unknown stroke field '" + rest + "'");
    }

    if (auto hit = bracket("baths")) {
        const auto& [label, rest] = *hit;
        bool found = false;
        for (const BathSpec& b : config.baths)
            if (b.label == label) found = true;
        if (!found) fail("no bath labelled '" + label + "'");
        if (rest == ".T") return {ParsedPath::Target::BathTemperature, 0, label};
        if (rest == ".mu") return {ParsedPath::Target::BathMu, 0, label};
        if (rest == ".Gamma") return {ParsedPath::Target::BathGamma, 0, label};
        fail("unknown bath field '" + rest + "'");
    }

    return fail("unrecognized form");
}

// After an endpoint edit, re-pin decoupled linear connector strokes so the
// level energy stays continuous around the loop.
void reconnect_connectors(RunConfig& config) {
    const std::size_t n = config.strokes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        StrokeSpec& a = config.strokes[i];
        StrokeSpec& b = config.strokes[j];
        const double end = a.protocol.end_energy();
        const double start = b.protocol.start_energy();
        if (std::abs(end - start) <= Tolerances::junction_continuity * std::max(1.0, std::abs(end)))
            continue;
        if (!b.bath && b.protocol.kind == Protocol::Kind::Linear)
            b.protocol.from = end;
        else if (!a.bath && a.protocol.kind == Protocol::Kind::Linear)
            a.protocol.to = start;
        // Anything else is a genuine junction break; build_cycle reports it.
    }
}

}  // namespace

void validate_sweep_path(const RunConfig& config, const std::string& path) {
    (void)parse_path(config, path);
}

void apply_sweep_value(RunConfig& config, const std::string& path, double value) {
    const ParsedPath parsed = parse_path(config, path);
    switch (parsed.target) {
        case ParsedPath::Target::StrokeDuration:
            config.strokes[parsed.stroke].duration = value;
            return;
        case ParsedPath::Target::ProtocolEnergy:
            config.strokes[parsed.stroke].protocol.energy = value;
            break;
        case ParsedPath::Target::ProtocolFrom:
            config.strokes[parsed.stroke].protocol.from = value;
            break;
        case ParsedPath::Target::ProtocolTo:
            config.strokes[parsed.stroke].protocol.to = value;
            break;
        case ParsedPath::Target::BathTemperature:
            for (BathSpec& b : config.baths)
                if (b.label == parsed.bath) b.temperature = value;
            return;
        case ParsedPath::Target::BathMu:
            for (BathSpec& b : config.baths)
                if (b.label == parsed.bath) b.chemical_potential = value;
            return;
        case ParsedPath::Target::BathGamma:
            for (BathSpec& b : config.baths)
                if (b.label == parsed.bath) b.coupling = value;
            return;
    }
    reconnect_connectors(config);
}

}  // namespace fermicycle::harness
