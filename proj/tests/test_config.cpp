#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "fermicycle/config.hpp"
#include "fermicycle/errors.hpp"

using namespace fermicycle;
using namespace fermicycle::harness;
using doctest::Approx;

namespace {

const char* kOttoJson = R"({
  "baths": [
    {"label": "hot",  "T": 2.0, "mu": 0.0, "Gamma": 1.0},
    {"label": "cold", "T": 1.0, "mu": 0.0, "Gamma": 1.0}
  ],
  "strokes": [
    {"duration": 0.0, "bath": null,   "protocol": {"kind": "linear", "from": 2.0, "to": 3.0}},
    {"duration": 1.0, "bath": "hot",  "protocol": {"kind": "constant", "energy": 3.0}},
    {"duration": 0.0, "bath": null,   "protocol": {"kind": "linear", "from": 3.0, "to": 2.0}},
    {"duration": 1.0, "bath": "cold", "protocol": {"kind": "constant", "energy": 2.0}}
  ],
  "limit_cycle": {"tol": 1e-12, "max_periods": 100000}
})";

std::string expect_config_error(const std::string& json) {
    try {
        parse_config(json, "test");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal config loads") {
    const char* minimal = R"({
      "baths": [{"label": "b", "T": 1.0, "mu": 0.0, "Gamma": 1.0}],
      "strokes": [{"duration": 1.0, "bath": "b", "protocol": {"kind": "constant", "energy": 1.0}}]
    })";
    const RunConfig config = parse_config(minimal, "test");
    CHECK(config.baths.size() == 1);
    CHECK(config.strokes.size() == 1);
    CHECK(config.limit_cycle.tolerance == Approx(1e-12));
    CHECK(!config.sweep.has_value());
    CHECK_NOTHROW(config.build_cycle());
}

TEST_CASE("the Otto config builds its cycle") {
    const RunConfig config = parse_config(kOttoJson, "test");
    const Cycle cycle = config.build_cycle();
    CHECK(cycle.strokes().size() == 4);
    CHECK(cycle.period() == Approx(2.0));
}

TEST_CASE("malformed JSON is a config error") {
    CHECK(!expect_config_error("{ not json").empty());
}

TEST_CASE("unknown keys are hard errors naming the key") {
    const std::string message = expect_config_error(R"({
      "baths": [{"label": "b", "T": 1.0, "mu": 0.0, "Gamma": 1.0, "Temp": 3.0}],
      "strokes": [{"duration": 1.0, "bath": "b", "protocol": {"kind": "constant", "energy": 1.0}}]
    })");
    CHECK(message.find("Temp") != std::string::npos);

    const std::string top = expect_config_error(R"({
      "baths": [{"label": "b", "T": 1.0, "mu": 0.0, "Gamma": 1.0}],
      "strokes": [{"duration": 1.0, "bath": "b", "protocol": {"kind": "constant", "energy": 1.0}}],
      "sweeps": {}
    })");
    CHECK(top.find("sweeps") != std::string::npos);
}

TEST_CASE("bath labels that would corrupt CSV headers are rejected") {
    const std::string message = expect_config_error(R"({
      "baths": [{"label": "a,b", "T": 1.0, "mu": 0.0, "Gamma": 1.0}],
      "strokes": [{"duration": 1.0, "bath": "a,b", "protocol": {"kind": "constant", "energy": 1.0}}]
    })");
    CHECK(message.find("label") != std::string::npos);
}

TEST_CASE("a stroke referencing a missing bath names it") {
    const std::string message = expect_config_error(R"({
      "baths": [{"label": "cold", "T": 1.0, "mu": 0.0, "Gamma": 1.0}],
      "strokes": [{"duration": 1.0, "bath": "hot", "protocol": {"kind": "constant", "energy": 1.0}}]
    })");
    CHECK(message.find("hot") != std::string::npos);
}

TEST_CASE("invalid numbers are rejected with the field path") {
    const std::string negative_tau = expect_config_error(R"({
      "baths": [{"label": "b", "T": 1.0, "mu": 0.0, "Gamma": 1.0}],
      "strokes": [{"duration": -1.0, "bath": "b", "protocol": {"kind": "constant", "energy": 1.0}}]
    })");
    CHECK(negative_tau.find("duration") != std::string::npos);

    const std::string bad_temp = expect_config_error(R"({
      "baths": [{"label": "b", "T": 0.0, "mu": 0.0, "Gamma": 1.0}],
      "strokes": [{"duration": 1.0, "bath": "b", "protocol": {"kind": "constant", "energy": 1.0}}]
    })");
    CHECK(bad_temp.find(".T") != std::string::npos);

    // bath-coupled stroke with zero duration is caught at cycle assembly
    const std::string zero_tau = expect_config_error(R"({
      "baths": [{"label": "b", "T": 1.0, "mu": 0.0, "Gamma": 1.0}],
      "strokes": [{"duration": 0.0, "bath": "b", "protocol": {"kind": "constant", "energy": 1.0}}]
    })");
    CHECK(!zero_tau.empty());
}

TEST_CASE("sampled knots must span the stroke duration") {
    const std::string message = expect_config_error(R"({
      "baths": [{"label": "b", "T": 1.0, "mu": 0.0, "Gamma": 1.0}],
      "strokes": [{"duration": 2.0, "bath": "b",
                   "protocol": {"kind": "sampled", "knots": [[0.0, 1.0], [1.5, 2.0]]}}]
    })");
    CHECK(message.find("knots") != std::string::npos);
}

TEST_CASE("junction discontinuities are rejected at load time") {
    const std::string message = expect_config_error(R"({
      "baths": [{"label": "b", "T": 1.0, "mu": 0.0, "Gamma": 1.0}],
      "strokes": [
        {"duration": 1.0, "bath": "b", "protocol": {"kind": "constant", "energy": 1.0}},
        {"duration": 1.0, "bath": "b", "protocol": {"kind": "constant", "energy": 2.0}}
      ]
    })");
    CHECK(message.find("strokes") != std::string::npos);
}

TEST_CASE("sweep grids") {
    SweepSpec lin{"p", SweepSpec::Scale::Lin, 1.0, 3.0, 5};
    const std::vector<double> lin_grid = sweep_grid(lin);
    REQUIRE(lin_grid.size() == 5);
    CHECK(lin_grid.front() == 1.0);
    CHECK(lin_grid[2] == Approx(2.0));
    CHECK(lin_grid.back() == 3.0);

    SweepSpec log{"p", SweepSpec::Scale::Log, 0.1, 100.0, 4};
    const std::vector<double> log_grid = sweep_grid(log);
    REQUIRE(log_grid.size() == 4);
    CHECK(log_grid.front() == 0.1);
    CHECK(log_grid[1] == Approx(1.0).epsilon(1e-12));
    CHECK(log_grid[2] == Approx(10.0).epsilon(1e-12));
    CHECK(log_grid.back() == 100.0);
}

TEST_CASE("sweep block validation") {
    auto with_sweep = [](const std::string& sweep) {
        return std::string(R"({
          "baths": [{"label": "b", "T": 1.0, "mu": 0.0, "Gamma": 1.0}],
          "strokes": [{"duration": 1.0, "bath": "b", "protocol": {"kind": "constant", "energy": 1.0}}],
          "sweep": )") + sweep + "}";
    };

    CHECK_NOTHROW(parse_config(
        with_sweep(R"({"path": "strokes[0].duration", "scale": "log", "from": 0.1, "to": 10.0, "count": 3})"),
        "test"));

    CHECK(!expect_config_error(
               with_sweep(R"({"path": "strokes[0].duration", "scale": "log", "from": 0.1, "to": 10.0, "count": 1})"))
               .empty());
    CHECK(!expect_config_error(
               with_sweep(R"({"path": "strokes[0].duration", "scale": "lin", "from": 5.0, "to": 1.0, "count": 3})"))
               .empty());
    CHECK(!expect_config_error(
               with_sweep(R"({"path": "strokes[0].duration", "scale": "log", "from": -1.0, "to": 1.0, "count": 3})"))
               .empty());

    // unsupported path: the message lists the supported forms
    const std::string message = expect_config_error(
        with_sweep(R"({"path": "baths[b].label", "scale": "lin", "from": 1.0, "to": 2.0, "count": 2})"));
    CHECK(message.find("supported sweep paths") != std::string::npos);
}

TEST_CASE("sweep paths resolve and apply") {
    RunConfig config = parse_config(kOttoJson, "test");

    apply_sweep_value(config, "strokes[1].duration", 4.5);
    CHECK(config.strokes[1].duration == 4.5);

    apply_sweep_value(config, "baths[cold].T", 0.75);
    CHECK(config.baths[1].temperature == 0.75);

    apply_sweep_value(config, "baths[hot].Gamma", 2.5);
    CHECK(config.baths[0].coupling == 2.5);

    apply_sweep_value(config, "baths[hot].mu", -0.25);
    CHECK(config.baths[0].chemical_potential == -0.25);

    CHECK_THROWS_AS(apply_sweep_value(config, "strokes[9].duration", 1.0), ConfigError);
    CHECK_THROWS_AS(apply_sweep_value(config, "baths[warm].T", 1.0), ConfigError);
    CHECK_THROWS_AS(apply_sweep_value(config, "strokes[1].protocol.from", 1.0), ConfigError);
}

TEST_CASE("endpoint sweeps re-pin the quench connectors") {
    RunConfig config = parse_config(kOttoJson, "test");
    apply_sweep_value(config, "strokes[1].protocol.energy", 4.0);

    // both adjacent quenches now meet the hot stroke at 4.0
    CHECK(config.strokes[0].protocol.to == Approx(4.0));
    CHECK(config.strokes[2].protocol.from == Approx(4.0));
    CHECK_NOTHROW(config.build_cycle());
}
