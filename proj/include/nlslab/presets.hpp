#pragma once

// Named experiments. Every simulation preset streams DiagnosticsRecord rows
// into records.csv and writes scatter_report.json, exponents.json and
// manifest.json next to it; `exponents` writes exponents.json and the manifest.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlslab/config.hpp"
#include "nlslab/spectral_field.hpp"

namespace nlslab {

struct PresetCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct RunResult {
    int exit_code = 0;  // 0 iff every acceptance check passed
    std::vector<PresetCheck> checks;
    nlohmann::json flags = nlohmann::json::object();
    std::size_t rows = 0;
    double wall_seconds = 0.0;
    std::filesystem::path output_dir;
};

/// Runs a validated config. Integrator aborts rethrow BlowUp with the index
/// of the last good record appended to the message (records stay in
/// records.csv.partial).
RunResult run_preset(const RunConfig& config, std::ostream* log = nullptr);

/// Initial datum described by config.datum on the config grid.
SpectralField initial_datum(const RunConfig& config);

/// Step indices of the geometric snapshot times start * growth^i <= t_end,
/// rounded to the nearest sample (multiple of sample_every), deduplicated.
std::vector<long long> snapshot_steps(const RunConfig& config);

struct DJdtOrder {
    std::vector<double> dts;        // 4 dt, 2 dt, dt
    std::vector<double> residuals;  // |dJ/dt - lhs| at t_c
    std::vector<double> lhs;
    double order_coarse = 0.0;      // log2(e(4dt) / e(2dt))
    double order_fine = 0.0;        // log2(e(2dt) / e(dt))
};

/// Richardson study of |dJ/dt - lhs(t_c)| for the config's datum and physics,
/// with the central-difference half-width equal to the step; the splitting
/// and difference errors both scale as dt^2.
DJdtOrder djdt_richardson(const RunConfig& config, double t_c);

enum class ExponentMode { subcritical, critical, perturbed, theta, aux };

ExponentMode parse_exponent_mode(std::string_view name);

struct ExponentQuery {
    int d = 1;
    Rational alpha = 5;
    std::optional<Rational> r;
    std::optional<Rational> epsilon;  // perturbed; default: feasible_epsilon
    std::optional<Rational> theta;    // theta/aux; default: max_feasible_theta
    Rational theta_resolution{1, 100};
    ExponentMode mode = ExponentMode::critical;
};

/// {"mode", "d", "alpha", "value", "report": {"feasible", "constraints": [...]}}.
nlohmann::json exponent_query(const ExponentQuery& query);

/// The full exponent bundle written to exponents.json.
nlohmann::json exponent_bundle(const RunConfig& config);

}  // namespace nlslab
