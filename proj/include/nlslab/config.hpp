#pragma once

// Run configuration: INI text with sections [run], [grid], [physics],
// [control], [datum], [exponents], [morawetz], [diagnostics]. Keys missing
// from the text take the preset's defaults.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlslab/rational.hpp"

namespace nlslab {

enum class Preset { decay, soliton_control, morawetz, scattering, exponents };

std::string_view to_string(Preset preset);
Preset parse_preset(std::string_view name);

enum class DatumKind { gaussian, soliton, plane_wave, file };

std::string_view to_string(DatumKind kind);

struct DatumSpec {
    DatumKind kind = DatumKind::gaussian;
    double amplitude = 1.0;
    double width = 0.45;
    double y_modulation = 0.0;
    double B = 1.0;
    int k1 = 1;
    int k2 = 0;
    int n = 0;
    double A = 1.0;
    std::string path;

    bool operator==(const DatumSpec&) const = default;
};

struct RunConfig {
    Preset preset = Preset::decay;
    std::string output_dir = "nlslab_out";

    int d = 1;
    double L = 200.0;
    int nx = 4096;
    int ny = 32;

    Rational alpha = 5;  // exact; the integrator receives to_double(alpha)
    int lambda = 1;

    double dt = 1e-3;
    double t_end = 10.0;
    int sample_every = 100;

    DatumSpec datum;

    std::optional<Rational> r;
    Rational epsilon{1, 10};
    Rational theta_resolution{1, 100};
    Rational delta{1, 20};

    double r_side = 1.0;
    double tol = 1e-8;

    std::vector<double> q_list{4.0, 6.0, 1e300 * 1e300};
    double transient = 1.0;          // decay monotone-tail window start
    double cauchy_transient = 5.0;   // Cauchy tail window start
    double snapshot_start = 1.0;
    double snapshot_growth = 1.3;
    double guard_threshold = 1e-3;

    bool operator==(const RunConfig&) const = default;
};

/// Defaults for a preset before any user keys are applied.
RunConfig preset_defaults(Preset preset);

/// Parses and validates; errors name the offending field and the violated
/// constraint. Throws InvalidInput.
RunConfig parse_config(std::string_view text);

/// Re-validates an in-memory config.
void validate(const RunConfig& config);

/// INI text that parses back to an equal RunConfig.
std::string emit_config(const RunConfig& config);

/// 17 significant digits, round-trip exact ("inf"/"nan" for non-finite).
std::string format_double(double value);

}  // namespace nlslab
