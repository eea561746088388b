#include "nlslab/presets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include "nlslab/densities.hpp"
#include "nlslab/error.hpp"
#include "nlslab/exponent_lab.hpp"
#include "nlslab/fft.hpp"
#include "nlslab/morawetz.hpp"
#include "nlslab/nls_integrator.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/records.hpp"
#include "nlslab/scattering.hpp"
#include "nlslab/snapshot_io.hpp"

#ifndef NLSLAB_VERSION
#define NLSLAB_VERSION "unknown"
#endif

namespace nlslab {

namespace ex = exponents;
using nlohmann::json;

namespace {

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("cannot write " + path.string());
}

std::string fmt(double v) { return format_double(v); }

/// The Strichartz objects that feed the space-time accumulators.
struct ExponentSet {
    ex::ProblemParams params;
    ex::StrichartzTuple base;
    ex::ThetaTuple theta;
    ex::AuxPair aux;
};

std::optional<ExponentSet> scattering_exponents(const RunConfig& c) {
    const auto params = ex::ProblemParams::make(c.d, c.alpha);
    if (params.regime != ex::Regime::scattering) return std::nullopt;
    auto base = ex::critical_tuple(params, c.r);
    if (!base.report.feasible()) return std::nullopt;
    const Rational theta = ex::max_feasible_theta(base.value, params, c.theta_resolution);
    return ExponentSet{params, base.value, ex::theta_tuple(base.value, params, theta).value,
                       ex::auxiliary_pair(params, base.value, ex::Strictness::equality).value};
}

PresetCheck check(std::string name, bool passed, std::string detail) {
    return {std::move(name), passed, std::move(detail)};
}

}  // namespace

DJdtOrder djdt_richardson(const RunConfig& c, double t_c) {
    const SpectralField u0 = initial_datum(c);
    const PhysicsParams physics = PhysicsParams::make(to_double(c.alpha), c.lambda);
    const MorawetzKernels kernels(u0.grid());
    DJdtOrder out;
    for (double factor : {4.0, 2.0, 1.0}) {
        const double h = c.dt * factor;
        const long long center = std::llround(t_c / h);
        BoundaryGuard guard;
        guard.enabled = false;
        // Reach t_c - h without sampling, then take the last two steps sample by sample.
        const SpectralField before = evolve(u0, physics, StepControl::make(h, double(center - 1) * h, 1 << 30), {}, guard);
        std::vector<SpectralField> keep;
        const Sink sink = [&](const Sample& s) { keep.push_back(s.field); };
        evolve(before, physics, StepControl::make(h, 2 * h, 1), {sink}, guard);
        const auto chk = finite_difference_dJdt_check(keep.at(0), keep.at(1), keep.at(2), physics, kernels, h);
        out.dts.push_back(h);
        out.residuals.push_back(chk.residual);
        out.lhs.push_back(chk.lhs);
    }
    out.order_coarse = std::log2(out.residuals[0] / out.residuals[1]);
    out.order_fine = std::log2(out.residuals[1] / out.residuals[2]);
    return out;
}

ExponentMode parse_exponent_mode(std::string_view name) {
    if (name == "subcritical") return ExponentMode::subcritical;
    if (name == "critical") return ExponentMode::critical;
    if (name == "perturbed") return ExponentMode::perturbed;
    if (name == "theta") return ExponentMode::theta;
    if (name == "aux") return ExponentMode::aux;
    throw InvalidInput("unknown mode '" + std::string(name) + "' (subcritical, critical, perturbed, theta, aux)");
}

json exponent_query(const ExponentQuery& q) {
    const auto params = ex::ProblemParams::make(q.d, q.alpha);
    json out{{"d", q.d}, {"alpha", to_string(q.alpha)}, {"regime", std::string(ex::to_string(params.regime))}};
    const auto finish = [&](const char* mode, json value, const ex::ConstraintReport& report) {
        out["mode"] = mode;
        out["value"] = std::move(value);
        out["report"] = ex::to_json(report);
        return out;
    };
    if (q.mode == ExponentMode::subcritical) {
        auto c = ex::subcritical_pair(params);
        return finish("subcritical", ex::to_json(c.value), c.report);
    }
    auto base = ex::critical_tuple(params, q.r);
    switch (q.mode) {
        case ExponentMode::critical:
            return finish("critical", ex::to_json(base.value), base.report);
        case ExponentMode::perturbed: {
            const Rational eps = q.epsilon ? *q.epsilon : ex::feasible_epsilon(base.value, params);
            auto c = ex::perturbed_tuple(base.value, params, eps);
            auto v = ex::to_json(c.value);
            v["epsilon"] = to_string(eps);
            return finish("perturbed", v, c.report);
        }
        case ExponentMode::theta: {
            const Rational theta = q.theta ? *q.theta : ex::max_feasible_theta(base.value, params, q.theta_resolution);
            auto c = ex::theta_tuple(base.value, params, theta);
            return finish("theta", ex::to_json(c.value), c.report);
        }
        case ExponentMode::aux: {
            if (q.theta) {
                auto t = ex::theta_tuple(base.value, params, *q.theta).value;
                auto c = ex::auxiliary_pair(params, t, ex::Strictness::equality);
                return finish("aux", ex::to_json(c.value), c.report);
            }
            auto c = ex::auxiliary_pair(params, base.value, ex::Strictness::equality);
            return finish("aux", ex::to_json(c.value), c.report);
        }
        case ExponentMode::subcritical:
            break;
    }
    throw InvalidInput("unreachable exponent mode");
}

json exponent_bundle(const RunConfig& c) {
    const auto params = ex::ProblemParams::make(c.d, c.alpha);
    json out{{"d", c.d},
             {"alpha", to_string(c.alpha)},
             {"alpha_float", to_double(c.alpha)},
             {"regime", std::string(ex::to_string(params.regime))},
             {"critical_regularity", to_string(ex::critical_regularity(params))}};
    bool all = true;
    const auto add = [&](const char* key, json value, const ex::ConstraintReport& report) {
        all = all && report.feasible();
        out[key] = {{"value", std::move(value)}, {"report", ex::to_json(report)}};
    };
    if (params.regime == ex::Regime::subcritical) {
        auto p = ex::subcritical_pair(params);
        add("subcritical_pair", ex::to_json(p.value), p.report);
        out["all_pass"] = all;
        return out;
    }
    const auto interval = ex::feasible_r_interval(params);
    out["r_interval"] = ex::to_json(interval);
    auto base = ex::critical_tuple(params, c.r);
    add("critical_tuple", ex::to_json(base.value), base.report);
    if (base.report.feasible()) {
        auto pert = ex::perturbed_tuple(base.value, params, c.epsilon);
        auto pv = ex::to_json(pert.value);
        pv["epsilon"] = to_string(c.epsilon);
        add("perturbed_tuple", pv, pert.report);
        auto aux = ex::auxiliary_pair(params, base.value, ex::Strictness::equality);
        auto av = ex::to_json(aux.value);
        av["dual_identity"] = {{"inv_l_prime", to_string(1 - aux.value.inv_l)},
                               {"inv_l_plus_alpha_inv_q", to_string(aux.value.inv_l + params.alpha * base.value.inv_q)}};
        add("aux_pair", av, aux.report);
        if (params.regime == ex::Regime::scattering) {
            const Rational theta = ex::max_feasible_theta(base.value, params, c.theta_resolution);
            auto th = ex::theta_tuple(base.value, params, theta);
            add("theta_tuple", ex::to_json(th.value), th.report);
            auto aux_t = ex::auxiliary_pair(params, th.value, ex::Strictness::equality);
            add("theta_aux_pair", ex::to_json(aux_t.value), aux_t.report);
        }
    }
    out["all_pass"] = all;
    return out;
}

SpectralField initial_datum(const RunConfig& c) {
    const Grid grid = Grid::make(c.d, c.L, c.nx, c.ny);
    const auto& d = c.datum;
    switch (d.kind) {
        case DatumKind::gaussian: return gaussian(grid, d.amplitude, d.width, d.y_modulation);
        case DatumKind::soliton: return soliton_profile(grid, d.B);
        case DatumKind::plane_wave: return plane_wave(grid, {d.k1, d.k2}, d.n, cplx(d.A, 0.0));
        case DatumKind::file: {
            auto f = load_snapshot(d.path);
            if (!(f.grid() == grid))
                throw InvalidInput("config field 'datum.path': snapshot grid does not match [grid]");
            return f.with_time(0.0);
        }
    }
    throw InvalidInput("unknown datum kind");
}

std::vector<long long> snapshot_steps(const RunConfig& c) {
    const long long total = StepControl::make(c.dt, c.t_end, c.sample_every).steps();
    const double sample_dt = c.dt * c.sample_every;
    std::set<long long> steps;
    for (double t = c.snapshot_start; t <= c.t_end * (1 + 1e-12); t *= c.snapshot_growth) {
        const long long step = std::llround(t / sample_dt) * c.sample_every;
        if (step > 0 && step <= total) steps.insert(step);
    }
    return {steps.begin(), steps.end()};
}

RunResult run_preset(const RunConfig& c, std::ostream* log) {
    validate(c);
    const auto started = std::chrono::steady_clock::now();
    RunResult result;
    result.output_dir = c.output_dir;
    std::filesystem::create_directories(c.output_dir);
    const std::filesystem::path dir = c.output_dir;

    json manifest{{"version", NLSLAB_VERSION},
                  {"preset", std::string(to_string(c.preset))},
                  {"config", emit_config(c)},
                  {"alpha", {{"exact", to_string(c.alpha)}, {"float", to_double(c.alpha)}}},
                  {"threads", fft::threads()}};

    const auto finish = [&]() {
        result.exit_code = 0;
        json checks = json::array();
        for (const auto& ch : result.checks) {
            checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
            if (!ch.passed) result.exit_code = 1;
        }
        result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        manifest["checks"] = checks;
        manifest["flags"] = result.flags;
        manifest["rows"] = result.rows;
        manifest["exit_code"] = result.exit_code;
        manifest["wall_seconds"] = result.wall_seconds;
        write_json(dir / "manifest.json", manifest);
        if (log)
            for (const auto& ch : result.checks)
                *log << (ch.passed ? "ok    " : "FAIL  ") << ch.name << ": " << ch.detail << '\n';
        return result;
    };

    const json bundle = exponent_bundle(c);
    write_json(dir / "exponents.json", bundle);
    if (c.preset == Preset::exponents) {
        const bool pass = bundle.value("all_pass", false);
        result.checks.push_back(check("exponent_reports", pass, pass ? "every constructed tuple verifies exactly"
                                                                     : "a constructed tuple fails verification"));
        return finish();
    }

    const PhysicsParams physics = PhysicsParams::make(to_double(c.alpha), c.lambda);
    const StepControl control = StepControl::make(c.dt, c.t_end, c.sample_every);
    const SpectralField u0 = initial_datum(c);
    const Grid& grid = u0.grid();
    const MorawetzKernels kernels(grid);
    const auto exps = scattering_exponents(c);
    std::optional<SpacetimeAccumulators> acc;
    if (exps) acc.emplace(exps->params, exps->base, exps->theta, exps->aux, c.delta);
    CubeSupAccumulator cube(c.r_side, physics.alpha);
    manifest["resolvability_ratio"] = resolvability_ratio(grid, c.dt);

    RecordSchema schema{c.q_list, {}};
    if (acc)
        for (const auto& ch : acc->channels()) schema.accumulator_names.push_back(ch.name);
    RecordFile records(dir / "records.csv", schema);

    const auto snap_steps = snapshot_steps(c);
    std::vector<SpectralField> snapshots;
    std::vector<double> times;
    std::vector<std::vector<double>> lq(c.q_list.size());
    std::vector<double> cube_series;
    std::size_t morawetz_failures = 0, positivity_failures = 0;
    double worst_morawetz = INFINITY, worst_positivity = INFINITY;
    bool guard_fired = false;

    const Sink record_sink = [&](const Sample& s) {
        const SpectralField& u = s.field;
        DiagnosticsRecord r;
        r.t = s.t;
        r.mass = mass(u);
        r.energy = energy(u, physics);
        r.h1_norm = sobolev_h1(u);
        const auto phys = u.to_physical();
        for (std::size_t k = 0; k < c.q_list.size(); ++k) {
            r.lq_norms.push_back(lebesgue_norm(grid, phys, c.q_list[k]));
            lq[k].push_back(r.lq_norms.back());
        }
        const DensitySet ds = densities(u, physics.alpha);
        const MorawetzTerms terms = morawetz_terms(ds, physics, kernels);
        r.J = morawetz_J(ds, kernels);
        r.morawetz_lhs = terms.lhs;
        r.morawetz_rhs = terms.rhs;
        r.positivity_S = terms.S();
        r.cube_sup = cube_sup_mass(grid, ds.rho, c.r_side);
        cube.push(s.t, r.cube_sup);
        r.cube_sup_integral = cube.value();
        if (acc) {
            acc->push(s.t, u);
            const auto& chans = acc->channels();
            r.mixed_norm_theta = std::pow(chans.front().last_integrand, 1.0 / chans.front().exponent);
            for (const auto& ch : chans) r.accumulators.push_back(ch.value);
        }
        r.boundary_guard_flag = s.boundary_warning;
        guard_fired = guard_fired || s.boundary_warning;

        const double m_scale = std::max({std::abs(terms.lhs), std::abs(terms.rhs), r.mass * r.mass});
        const double s_scale = std::pow(r.mass + r.h1_norm, 4.0);
        worst_morawetz = std::min(worst_morawetz, (terms.lhs - terms.rhs) / m_scale);
        worst_positivity = std::min(worst_positivity, terms.S() / s_scale);
        if (!morawetz_inequality_holds(terms, r.mass, c.tol)) ++morawetz_failures;
        if (r.positivity_S < -1e-10 * s_scale) ++positivity_failures;

        times.push_back(s.t);
        cube_series.push_back(r.cube_sup);
        records.write(r);
        if (std::binary_search(snap_steps.begin(), snap_steps.end(), s.step)) snapshots.push_back(u);
        if (log && s.step % (100LL * c.sample_every) == 0)
            *log << "t = " << fmt(s.t) << "  mass = " << fmt(r.mass) << "  L^" << fmt(c.q_list.front()) << " = "
                 << fmt(r.lq_norms.front()) << '\n';
    };

    BoundaryGuard guard;
    guard.r_side = c.r_side;
    guard.threshold = c.guard_threshold;
    try {
        evolve(u0, physics, control, {record_sink}, guard);
    } catch (const BlowUp& e) {
        manifest["error"] = e.what();
        manifest["last_good_record"] = records.rows() ? json(records.rows() - 1) : json(nullptr);
        result.rows = records.rows();
        result.checks.push_back(check("integration", false, e.what()));
        finish();
        throw BlowUp(std::string(e.what()) + " (last good record index " +
                         (records.rows() ? std::to_string(records.rows() - 1) : std::string("none")) + ")",
                     e.step());
    }
    records.commit();
    result.rows = records.rows();

    // Scattering report.
    ScatterReport report;
    for (std::size_t k = 0; k < c.q_list.size(); ++k)
        report.decay.push_back(decay_series(c.d, c.q_list[k], times, lq[k], c.transient));
    const DecaySeries cube_decay = decay_series(c.d, 2.0, times, cube_series, c.transient);
    if (snapshots.size() >= 3) {
        report.cauchy = cauchy_table(snapshots);
        report.flags = cauchy_flags(report.cauchy, c.cauchy_transient);
        const SpectralField w_last = pullback(snapshots.back());
        report.f_plus_h1 = sobolev_h1(w_last);
        report.f_plus_time = snapshots.back().time();
    }
    if (acc) {
        report.accumulators = acc->channels();
        report.accumulator_times = acc->times();
    }
    json scatter = to_json(report);
    scatter["cube_sup_decay"] = to_json(cube_decay);
    write_json(dir / "scatter_report.json", scatter);

    const auto decay_of = [&](double q) -> const DecaySeries* {
        for (const auto& s : report.decay)
            if (s.q == q) return &s;
        return nullptr;
    };
    const std::string n_samples = std::to_string(times.size());

    result.flags["boundary_guard_fired"] = guard_fired;
    if (c.preset == Preset::scattering || c.preset == Preset::soliton_control) {
        result.flags["cauchy_tail_decreasing"] = report.flags.tail_decreasing;
        result.flags["cauchy_contraction"] = report.flags.contraction;
        result.flags["no_scattering"] = report.flags.no_scattering;
    }
    result.flags["worst_morawetz_margin"] = worst_morawetz;
    result.flags["worst_positivity_margin"] = worst_positivity;
    result.flags["cube_sup_decay_factor"] = cube_decay.decay_factor;
    if (const auto* l4 = decay_of(4.0)) result.flags["l4_decay_factor"] = l4->decay_factor;

    const auto morawetz_checks = [&] {
        result.checks.push_back(check("morawetz_inequality", morawetz_failures == 0,
                                      std::to_string(morawetz_failures) + " of " + n_samples +
                                          " samples violate lhs - rhs >= -tol*scale; worst margin " + fmt(worst_morawetz)));
        result.checks.push_back(check("positivity_S", positivity_failures == 0,
                                      std::to_string(positivity_failures) + " of " + n_samples +
                                          " samples violate S >= -1e-10*scale; worst margin " + fmt(worst_positivity)));
    };

    switch (c.preset) {
        case Preset::decay: {
            morawetz_checks();
            const DecaySeries* l4 = decay_of(4.0);
            if (!l4) {
                result.checks.push_back(check("l4_decay", false, "q = 4 missing from diagnostics.q_list"));
            } else {
                result.checks.push_back(check("l4_decay", l4->decay_factor >= 3.0 && l4->monotone_tail,
                                              "factor " + fmt(l4->decay_factor) + " (need >= 3), monotone tail " +
                                                  (l4->monotone_tail ? "yes" : "no")));
            }
            result.checks.push_back(check("cube_sup_decay", cube_decay.decay_factor >= 3.0 && cube_decay.monotone_tail,
                                          "factor " + fmt(cube_decay.decay_factor) + " (need >= 3), monotone tail " +
                                              (cube_decay.monotone_tail ? "yes" : "no")));
            result.checks.push_back(check("boundary_guard", !guard_fired,
                                          guard_fired ? "edge mass exceeded the threshold" : "never fired"));
            break;
        }
        case Preset::morawetz: {
            morawetz_checks();
            const double t_c = std::min(0.5, c.t_end / 2);
            const DJdtOrder o = djdt_richardson(c, t_c);
            const bool in_range = o.order_fine >= 1.8 && o.order_fine <= 2.2 && o.order_coarse >= 1.8 &&
                                  o.order_coarse <= 2.2;
            result.flags["djdt_residuals"] = o.residuals;
            result.flags["djdt_dts"] = o.dts;
            result.flags["djdt_relative_residual"] = o.residuals.back() / std::abs(o.lhs.back());
            result.checks.push_back(check("djdt_richardson_order", in_range,
                                          "orders " + fmt(o.order_coarse) + ", " + fmt(o.order_fine) +
                                              " at t = " + fmt(t_c) + " (need [1.8, 2.2])"));
            break;
        }
        case Preset::soliton_control: {
            bool constant = true;
            std::string detail;
            for (const auto& s : report.decay) {
                constant = constant && s.max_relative_deviation < 1e-3;
                detail += "L^" + fmt(s.q) + " dev " + fmt(s.max_relative_deviation) + "; ";
            }
            result.flags["no_decay"] = constant;
            result.checks.push_back(check("lq_norms_constant", constant, detail + "need < 1e-3"));
            result.checks.push_back(check("no_scattering", report.flags.no_scattering,
                                          "tail decreasing " + std::string(report.flags.tail_decreasing ? "yes" : "no") +
                                              ", sup-tail ratio " + fmt(report.flags.sup_tail_ratio) + " (need >= " +
                                              fmt(report.flags.threshold) + ")"));
            break;
        }
        case Preset::scattering: {
            result.checks.push_back(check("cauchy_tail_decreasing", report.flags.tail_decreasing,
                                          "consecutive pull-back differences for t >= " + fmt(c.cauchy_transient)));
            result.checks.push_back(check("cauchy_contraction", report.flags.tail_decreasing && report.flags.contraction < 0.2,
                                          "terminal / first post-transient = " + fmt(report.flags.contraction) +
                                              " (need < 0.2)"));
            if (!acc) {
                result.checks.push_back(check("accumulators_saturate", false, "no feasible exponent tuple"));
            } else {
                std::string detail;
                for (const auto& ch : acc->channels())
                    detail += ch.name + " " + fmt(ch.peak_increment > 0 ? ch.last_increment / ch.peak_increment : 0.0) + "; ";
                result.checks.push_back(check("accumulators_saturate", acc->all_saturated(1e-4),
                                              detail + "final/peak increment need < 1e-4"));
            }
            break;
        }
        case Preset::exponents:
            break;
    }
    return finish();
}

}  // namespace nlslab
