#include "fermicycle/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "fermicycle/errors.hpp"
#include "fermicycle/tolerances.hpp"

namespace fermicycle::harness {

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // fold negative zero
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

namespace {

std::string format_optional(const std::optional<double>& value) {
    return value ? format_number(*value) : std::string();
}

std::string format_bound(const BoundValue& value) { return format_optional(to_optional(value)); }

}  // namespace

SweepRow evaluate_point(const RunConfig& config, std::optional<double> swept_value) {
    const Cycle cycle = config.build_cycle();

    SweepRow row;
    row.swept_value = swept_value;
    if (config.quasistatic) {
        row.report = run_quasistatic_cycle(cycle, config.limit_cycle.integrator);
        const CycleTrace trace =
            trace_limit_cycle(cycle, row.report, config.limit_cycle.integrator, true);
        row.bounds = certify(row.report, trace);
    } else {
        row.report = run_to_limit_cycle(cycle, 0.5, config.limit_cycle);
        const CycleTrace trace =
            trace_limit_cycle(cycle, row.report, config.limit_cycle.integrator, false);
        row.bounds = certify(row.report, trace);
    }
    return row;
}

std::vector<std::string> ledger_violations(const CycleReport& report) {
    std::vector<std::string> violations;

    double heat_sum = 0.0;
    double heat_scale = 0.0;
    for (const BathHeat& bh : report.bath_heats) {
        heat_sum += bh.heat;
        heat_scale += std::abs(bh.heat);
    }
    const double closure = report.net_work + report.chemical_work - heat_sum;
    if (std::abs(closure) > Tolerances::first_law * std::max(1.0, heat_scale))
        violations.push_back("first law: |W_net + W_chem - sum Q_b| = " + format_number(closure));

    const double sigma = entropy_production(report);
    if (sigma < -Tolerances::entropy_floor)
        violations.push_back("second law: Sigma_irr = " + format_number(sigma));

    return violations;
}

std::string csv_header(const RunConfig& config, bool with_sweep_column) {
    std::string header;
    if (with_sweep_column) header += "sweep_value,";
    header += "W_net";
    for (const BathSpec& b : config.baths) header += ",Q[" + b.label + "]";
    header += ",eta,Sigma_irr,eta_carnot,eta_clausius,eta_generalized,eta_info,converged_after\n";
    return header;
}

std::string csv_row(const SweepRow& row, bool with_sweep_column) {
    std::string line;
    if (with_sweep_column) line += format_optional(row.swept_value) + ",";
    line += format_number(row.report.net_work);
    for (const BathHeat& bh : row.report.bath_heats) line += "," + format_number(bh.heat);
    line += "," + format_optional(row.report.efficiency);
    line += "," + format_number(row.report.entropy_production);
    line += "," + format_number(row.bounds.eta_carnot);
    line += "," + format_optional(row.bounds.eta_clausius);
    line += "," + format_bound(row.bounds.eta_generalized);
    line += "," + format_bound(row.bounds.eta_info);
    line += "," + std::to_string(row.report.converged_after);
    line += "\n";
    return line;
}

namespace {

void print_report(const SweepRow& row, std::ostream& out) {
    const CycleReport& r = row.report;
    out << "period tau            = " << format_number(r.period) << "\n";
    out << "limit state p         = " << format_number(r.limit_state) << " (converged after "
        << r.converged_after << " periods, residual " << format_number(r.residual) << ")\n";
    out << "W_net                 = " << format_number(r.net_work) << "\n";
    out << "W_chem                = " << format_number(r.chemical_work) << "\n";
    for (const BathHeat& bh : r.bath_heats) {
        std::string key = "Q[" + bh.label + "] (T = " + format_number(bh.temperature) + ")";
        key.resize(std::max<std::size_t>(key.size(), 21), ' ');
        out << key << " = " << format_number(bh.heat) << "\n";
    }
    out << "dS over period        = " << format_number(r.entropy_change) << "\n";
    out << "Sigma_irr             = " << format_number(r.entropy_production) << "\n";
    out << "eta                   = " << (r.efficiency ? format_number(*r.efficiency) : "undefined")
        << "\n";

    const BoundReport& b = row.bounds;
    out << "eta_carnot            = " << format_number(b.eta_carnot) << "\n";
    out << "eta_clausius          = "
        << (b.eta_clausius ? format_number(*b.eta_clausius) : "undefined") << "\n";
    out << "eta_generalized       = "
        << (is_available(b.eta_generalized) ? format_bound(b.eta_generalized) : "not transcribed")
        << "\n";
    out << "eta_info              = "
        << (is_available(b.eta_info) ? format_bound(b.eta_info) : "not transcribed") << "\n";

    if (b.ordering_violations.empty()) {
        out << "bound ordering        : ok\n";
    } else {
        for (const OrderingViolation& v : b.ordering_violations)
            out << "bound ordering BREACH : " << v.name << " by " << format_number(v.magnitude)
                << "\n";
    }
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << contents;
    if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace

int run_single(const RunConfig& config, std::ostream& out,
               const std::optional<std::string>& csv_path) {
    const SweepRow row = evaluate_point(config, std::nullopt);
    print_report(row, out);

    const std::vector<std::string> laws = ledger_violations(row.report);
    for (const std::string& l : laws) out << "ledger BREACH         : " << l << "\n";

    if (row.report.net_work <= 0.0) out << "note: no net work extracted over this cycle\n";

    if (csv_path) write_file(*csv_path, csv_header(config, false) + csv_row(row, false));

    if (!row.bounds.ordering_violations.empty() || !laws.empty()) return kCertificationFailure;
    return kOk;
}

int run_sweep(const RunConfig& config, const std::string& csv_path, int workers,
              std::ostream& out) {
    if (!config.sweep) throw ConfigError("config has no sweep block");
    if (workers < 1) throw ConfigError("workers must be >= 1");

    const std::vector<double> grid = sweep_grid(*config.sweep);

    // Pre-flight: every grid point must yield a buildable cycle so a sweep
    // cannot die halfway through the file.
    for (double value : grid) {
        RunConfig point = config;
        apply_sweep_value(point, config.sweep->path, value);
        point.build_cycle();
    }

    std::vector<SweepRow> rows(grid.size());
    std::vector<std::exception_ptr> failures(grid.size());
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            try {
                RunConfig point = config;
                apply_sweep_value(point, config.sweep->path, grid[i]);
                rows[i] = evaluate_point(point, grid[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    const std::size_t thread_count =
        std::min<std::size_t>(static_cast<std::size_t>(workers), grid.size());
    if (thread_count <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    // First failure in grid order wins, keeping diagnostics deterministic.
    for (const std::exception_ptr& failure : failures)
        if (failure) std::rethrow_exception(failure);

    std::string csv = csv_header(config, true);
    long breaches = 0;
    for (const SweepRow& row : rows) {
        csv += csv_row(row, true);
        breaches += static_cast<long>(row.bounds.ordering_violations.size());
        breaches += static_cast<long>(ledger_violations(row.report).size());
    }
    write_file(csv_path, csv);

    out << "sweep " << config.sweep->path << ": " << grid.size() << " points -> " << csv_path
        << "\n";
    if (breaches > 0) {
        out << "certification breaches: " << breaches << "\n";
        return kCertificationFailure;
    }
    return kOk;
}

int verify_config(const RunConfig& config, std::ostream& out) {
    bool all_ok = true;
    auto check = [&](const std::string& name, bool ok, const std::string& detail = {}) {
        out << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) out << " (" << detail << ")";
        out << "\n";
        all_ok = all_ok && ok;
    };

    const Cycle cycle = config.build_cycle();

    if (config.quasistatic) {
        const SweepRow row = evaluate_point(config, std::nullopt);
        const auto laws = ledger_violations(row.report);
        check("ledger laws", laws.empty(), laws.empty() ? "" : laws.front());
        check("bound ordering", row.bounds.ordering_violations.empty());
        return all_ok ? kOk : kCertificationFailure;
    }

    // Start-state independence of the periodic steady state.
    const CycleReport from_empty = run_to_limit_cycle(cycle, 0.0, config.limit_cycle);
    const CycleReport from_full = run_to_limit_cycle(cycle, 1.0, config.limit_cycle);
    double worst = std::abs(from_empty.net_work - from_full.net_work);
    worst = std::max(worst, std::abs(from_empty.limit_state - from_full.limit_state));
    for (std::size_t b = 0; b < from_empty.bath_heats.size(); ++b)
        worst = std::max(worst,
                         std::abs(from_empty.bath_heats[b].heat - from_full.bath_heats[b].heat));
    check("limit cycle independent of start state", worst <= 1e-9,
          "max deviation " + format_number(worst));

    // Report periodicity: measuring again from the limit state moves nothing.
    LimitCycleConfig again = config.limit_cycle;
    again.method = LimitCycleConfig::Method::Iterate;
    const CycleReport repeat = run_to_limit_cycle(cycle, from_empty.limit_state, again);
    double drift = std::abs(repeat.net_work - from_empty.net_work);
    for (std::size_t b = 0; b < repeat.bath_heats.size(); ++b)
        drift = std::max(drift,
                         std::abs(repeat.bath_heats[b].heat - from_empty.bath_heats[b].heat));
    check("report periodicity", drift <= 1e-10, "max drift " + format_number(drift));

    const auto laws = ledger_violations(from_empty);
    check("ledger laws", laws.empty(), laws.empty() ? "" : laws.front());

    const CycleTrace trace = trace_limit_cycle(cycle, from_empty, config.limit_cycle.integrator);
    const BoundReport bounds = certify(from_empty, trace);
    check("bound ordering", bounds.ordering_violations.empty(),
          bounds.ordering_violations.empty() ? "" : bounds.ordering_violations.front().name);

    return all_ok ? kOk : kCertificationFailure;
}

}  // namespace fermicycle::harness
