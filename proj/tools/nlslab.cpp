// nlslab: run presets, query exponent systems, re-verify records offline.
//
//   nlslab run --config run.ini
//   nlslab exponents --d 1 --alpha 5 --r 8 --mode critical
//   nlslab verify out/records.csv
//
// Exit status: 0 success, 1 failed acceptance/verification, 2 invalid input,
// 3 integrator abort or I/O failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "nlslab/config.hpp"
#include "nlslab/error.hpp"
#include "nlslab/presets.hpp"
#include "nlslab/records.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw nlslab::IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<nlslab::Rational> optional_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return nlslab::parse_rational(text);
}

int cmd_run(const std::string& config_path, const std::string& output_dir, bool quiet) {
    auto config = nlslab::parse_config(slurp(config_path));
    if (!output_dir.empty()) config.output_dir = output_dir;
    const auto result = nlslab::run_preset(config, quiet ? nullptr : &std::cerr);
    std::cout << "preset " << nlslab::to_string(config.preset) << ": " << result.rows << " records, "
              << (result.exit_code == 0 ? "all checks passed" : "a check FAILED") << " -> "
              << result.output_dir.string() << '\n';
    return result.exit_code;
}

int cmd_exponents(int d, const std::string& alpha, const std::string& r, const std::string& epsilon,
                  const std::string& theta, const std::string& resolution, const std::string& mode) {
    nlslab::ExponentQuery q;
    q.d = d;
    q.alpha = nlslab::parse_rational(alpha);
    q.r = optional_rational(r);
    q.epsilon = optional_rational(epsilon);
    q.theta = optional_rational(theta);
    if (!resolution.empty()) q.theta_resolution = nlslab::parse_rational(resolution);
    q.mode = nlslab::parse_exponent_mode(mode);
    const auto out = nlslab::exponent_query(q);
    std::cout << out.dump(2) << '\n';
    return out["report"]["feasible"].get<bool>() ? 0 : 1;
}

int cmd_verify(const std::string& path, double tol) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw nlslab::IoError("cannot open " + path);
    const auto table = nlslab::parse_records(in);
    const auto report = nlslab::verify_records(table, tol);
    std::cout << path << ": " << report.rows << " rows, " << report.checked << " with Morawetz columns, "
              << report.failures.size() << " violations";
    if (report.boundary_guard_fired) std::cout << " (boundary guard fired)";
    std::cout << '\n';
    for (const auto& f : report.failures)
        std::cout << "  row " << f.row << " t=" << nlslab::format_double(f.t)
                  << (f.morawetz_ok ? "" : " morawetz margin " + nlslab::format_double(f.morawetz_margin))
                  << (f.positivity_ok ? "" : " positivity margin " + nlslab::format_double(f.positivity_margin))
                  << '\n';
    return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral NLS laboratory on R^d x T"};
    app.set_version_flag("--version", std::string(NLSLAB_VERSION));
    app.require_subcommand(1);

    std::string config_path, output_dir;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "Run a preset from an INI config");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--output-dir", output_dir, "Override run.output_dir");
    run->add_flag("--quiet", quiet, "No progress output");

    int d = 1;
    std::string alpha, r, epsilon, theta, resolution, mode = "critical";
    auto* exps = app.add_subcommand("exponents", "Construct and verify an exponent system; prints JSON");
    exps->add_option("--d", d, "Euclidean dimension")->required()->check(CLI::PositiveNumber);
    exps->add_option("--alpha", alpha, "Nonlinearity power as p/q")->required();
    exps->add_option("--r", r, "Override r (default: interval midpoint)");
    exps->add_option("--epsilon", epsilon, "Perturbation (default: largest feasible 2^-k)");
    exps->add_option("--theta", theta, "Interpolation parameter (default: largest feasible)");
    exps->add_option("--theta-resolution", resolution, "Grid step for the theta search (default 1/100)");
    exps->add_option("--mode", mode, "subcritical|critical|perturbed|theta|aux")
        ->check(CLI::IsMember({"subcritical", "critical", "perturbed", "theta", "aux"}));

    std::string records_path;
    double tol = 1e-8;
    auto* verify = app.add_subcommand("verify", "Re-check the inequality columns of records.csv");
    verify->add_option("records", records_path, "records.csv")->required();
    verify->add_option("--tol", tol, "Relative Morawetz tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, output_dir, quiet);
        if (*exps) return cmd_exponents(d, alpha, r, epsilon, theta, resolution, mode);
        if (*verify) return cmd_verify(records_path, tol);
    } catch (const nlslab::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlslab::BlowUp& e) {
        std::cerr << "integration aborted at step " << e.step() << ": " << e.what() << '\n';
        return 3;
    } catch (const nlslab::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
