#include "nlslab/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nlslab/error.hpp"

namespace nlslab {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"run", {"preset", "output_dir"}},
        {"grid", {"d", "L", "nx", "ny"}},
        {"physics", {"alpha", "lambda"}},
        {"control", {"dt", "t_end", "sample_every"}},
        {"datum", {"kind", "amplitude", "width", "y_modulation", "B", "k1", "k2", "n", "A", "path"}},
        {"exponents", {"r", "epsilon", "theta_resolution", "delta"}},
        {"morawetz", {"r_side", "tol"}},
        {"diagnostics",
         {"q_list", "transient", "cauchy_transient", "snapshot_start", "snapshot_growth", "guard_threshold"}},
    };
    return keys;
}

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw InvalidInput("config field '" + field + "': " + why);
}

double parse_double(const std::string& field, const std::string& text) {
    std::string t = text;
    if (t == "inf" || t == "infinity") return INFINITY;
    double v = 0.0;
    const auto* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end) fail(field, "expected a number, got '" + text + "'");
    return v;
}

int parse_int(const std::string& field, const std::string& text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) fail(field, "expected an integer, got '" + text + "'");
    return v;
}

Rational parse_rational_field(const std::string& field, const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const InvalidInput&) {
        fail(field, "expected a rational 'p/q', got '" + text + "'");
    }
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

std::string_view to_string(Preset preset) {
    switch (preset) {
        case Preset::decay: return "decay";
        case Preset::soliton_control: return "soliton-control";
        case Preset::morawetz: return "morawetz";
        case Preset::scattering: return "scattering";
        case Preset::exponents: return "exponents";
    }
    return "?";
}

Preset parse_preset(std::string_view name) {
    for (auto p : {Preset::decay, Preset::soliton_control, Preset::morawetz, Preset::scattering, Preset::exponents})
        if (to_string(p) == name) return p;
    fail("run.preset", "unknown preset '" + std::string(name) +
                           "' (decay, soliton-control, morawetz, scattering, exponents)");
}

std::string_view to_string(DatumKind kind) {
    switch (kind) {
        case DatumKind::gaussian: return "gaussian";
        case DatumKind::soliton: return "soliton";
        case DatumKind::plane_wave: return "plane_wave";
        case DatumKind::file: return "file";
    }
    return "?";
}

RunConfig preset_defaults(Preset preset) {
    RunConfig c;
    c.preset = preset;
    switch (preset) {
        case Preset::decay:
        case Preset::morawetz:
            break;
        case Preset::exponents:
            c.r = Rational(8);  // the worked tuple for (d, alpha) = (1, 5)
            break;
        case Preset::soliton_control:
            c.L = 80.0;
            c.nx = 1024;
            c.ny = 4;
            c.alpha = 2;
            c.lambda = -1;
            c.t_end = 20.0;
            c.datum.kind = DatumKind::soliton;
            break;
        case Preset::scattering:
            c.L = 800.0;
            c.nx = 8192;
            c.ny = 16;
            c.t_end = 40.0;
            c.datum.width = 0.6;
            c.datum.y_modulation = 0.25;
            break;
    }
    return c;
}

void validate(const RunConfig& c) {
    if (c.d < 1) fail("grid.d", "must be >= 1");
    if (c.preset != Preset::exponents) {
        if (c.d != 1 && c.d != 2) fail("grid.d", "simulations support d = 1 or 2");
        if (!(c.L > 0.0)) fail("grid.L", "must be positive");
        for (auto [name, n] : {std::pair{"grid.nx", c.nx}, std::pair{"grid.ny", c.ny}})
            if (n < 4 || (n & (n - 1)) != 0) fail(name, "must be a power of two >= 4");
        if (!(c.dt > 0.0)) fail("control.dt", "must be positive");
        if (!(c.t_end > 0.0)) fail("control.t_end", "must be positive");
        if (c.sample_every < 1) fail("control.sample_every", "must be >= 1");
        if (!(c.r_side > 0.0)) fail("morawetz.r_side", "must be positive");
        if (c.r_side < c.L / c.nx * (1 - 1e-9)) fail("morawetz.r_side", "cube side must span at least one grid cell");
        if (!(c.tol > 0.0)) fail("morawetz.tol", "must be positive");
        for (double q : c.q_list)
            if (!(q >= 1.0)) fail("diagnostics.q_list", "every q must satisfy q >= 1");
        if (!(c.snapshot_growth > 1.0)) fail("diagnostics.snapshot_growth", "must exceed 1");
        if (!(c.snapshot_start > 0.0)) fail("diagnostics.snapshot_start", "must be positive");
    }
    if (!(c.alpha > 0)) fail("physics.alpha", "must satisfy alpha > 0");
    if (c.lambda != 1 && c.lambda != -1) fail("physics.lambda", "must be +1 (defocusing) or -1 (focusing)");

    const Rational four_over_d(4, c.d);
    const auto upper = [&]() -> std::optional<Rational> {
        if (c.d == 1) return std::nullopt;
        return Rational(4, c.d - 1);
    }();
    const std::string upper_text = upper ? "4/(d-1) = " + to_string(*upper) : "infinity";
    const std::string a = to_string(c.alpha);

    if (c.lambda == -1 && !(c.alpha < four_over_d))
        fail("physics.alpha", "focusing runs require alpha < 4/d = " + to_string(four_over_d) + " (L^2-subcritical), got " + a);

    switch (c.preset) {
        case Preset::scattering:
        case Preset::exponents:
            if (!(c.alpha > four_over_d) || (upper && !(c.alpha < *upper)))
                fail("physics.alpha", "alpha = " + a + " violates the scattering range 4/d < alpha < 4/(d-1) (" +
                                          to_string(four_over_d) + " < alpha < " + upper_text + ")");
            if (c.preset == Preset::scattering && c.lambda != 1) fail("physics.lambda", "scattering preset is defocusing (+1)");
            break;
        case Preset::decay:
        case Preset::morawetz:
            if (upper && !(c.alpha < *upper))
                fail("physics.alpha", "alpha = " + a + " violates the energy-subcritical range 0 < alpha < 4/(d-1) = " + to_string(*upper));
            if (c.lambda != 1) fail("physics.lambda", "decay and Morawetz presets are defocusing (+1)");
            break;
        case Preset::soliton_control:
            if (c.d != 1) fail("grid.d", "soliton-control requires d = 1");
            if (c.alpha != 2) fail("physics.alpha", "soliton-control requires alpha = 2");
            if (c.lambda != -1) fail("physics.lambda", "soliton-control requires lambda = -1");
            if (c.datum.kind != DatumKind::soliton) fail("datum.kind", "soliton-control requires the soliton datum");
            break;
    }
    if (c.datum.kind == DatumKind::soliton) {
        if (!(c.datum.B > 0.0)) fail("datum.B", "must be positive");
        if (c.d != 1) fail("datum.kind", "the soliton profile is defined for d = 1");
    }
    if (c.datum.kind == DatumKind::gaussian && !(c.datum.width > 0.0)) fail("datum.width", "must be positive");
    if (c.datum.kind == DatumKind::file && c.datum.path.empty()) fail("datum.path", "required for file data");
    if (!(c.epsilon >= 0)) fail("exponents.epsilon", "must be >= 0");
    if (!(c.theta_resolution > 0 && c.theta_resolution < 1)) fail("exponents.theta_resolution", "must lie in (0, 1)");
    if (!(c.delta > 0)) fail("exponents.delta", "must be positive");
}

RunConfig parse_config(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InvalidInput(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    for (const auto& [section, body] : tree) {
        auto it = known_keys().find(section);
        if (it == known_keys().end()) {
            if (body.empty()) fail(section, "keys must live in a section such as [grid]");
            fail(section, "unknown section");
        }
        for (const auto& [key, value] : body)
            if (!it->second.count(key)) fail(section + "." + key, "unknown key");
    }

    const auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(path)) return *v;
        return std::nullopt;
    };

    Preset preset = Preset::decay;
    if (auto p = get("run.preset")) preset = parse_preset(*p);
    RunConfig c = preset_defaults(preset);

    if (auto v = get("run.output_dir")) c.output_dir = *v;
    if (auto v = get("grid.d")) c.d = parse_int("grid.d", *v);
    if (auto v = get("grid.L")) c.L = parse_double("grid.L", *v);
    if (auto v = get("grid.nx")) c.nx = parse_int("grid.nx", *v);
    if (auto v = get("grid.ny")) c.ny = parse_int("grid.ny", *v);
    if (auto v = get("physics.alpha")) c.alpha = parse_rational_field("physics.alpha", *v);
    if (auto v = get("physics.lambda")) c.lambda = parse_int("physics.lambda", *v);
    if (auto v = get("control.dt")) c.dt = parse_double("control.dt", *v);
    if (auto v = get("control.t_end")) c.t_end = parse_double("control.t_end", *v);
    if (auto v = get("control.sample_every")) c.sample_every = parse_int("control.sample_every", *v);

    if (auto v = get("datum.kind")) {
        bool found = false;
        for (auto k : {DatumKind::gaussian, DatumKind::soliton, DatumKind::plane_wave, DatumKind::file})
            if (to_string(k) == *v) {
                c.datum.kind = k;
                found = true;
            }
        if (!found) fail("datum.kind", "unknown datum '" + *v + "' (gaussian, soliton, plane_wave, file)");
    }
    if (auto v = get("datum.amplitude")) c.datum.amplitude = parse_double("datum.amplitude", *v);
    if (auto v = get("datum.width")) c.datum.width = parse_double("datum.width", *v);
    if (auto v = get("datum.y_modulation")) c.datum.y_modulation = parse_double("datum.y_modulation", *v);
    if (auto v = get("datum.B")) c.datum.B = parse_double("datum.B", *v);
    if (auto v = get("datum.k1")) c.datum.k1 = parse_int("datum.k1", *v);
    if (auto v = get("datum.k2")) c.datum.k2 = parse_int("datum.k2", *v);
    if (auto v = get("datum.n")) c.datum.n = parse_int("datum.n", *v);
    if (auto v = get("datum.A")) c.datum.A = parse_double("datum.A", *v);
    if (auto v = get("datum.path")) c.datum.path = *v;

    if (auto v = get("exponents.r")) {
        c.r = v->empty() ? std::nullopt : std::optional(parse_rational_field("exponents.r", *v));
    } else if (preset == Preset::exponents && (c.d != 1 || c.alpha != 5)) {
        c.r.reset();  // the default r belongs to (1, 5); elsewhere use the interval midpoint
    }
    if (auto v = get("exponents.epsilon")) c.epsilon = parse_rational_field("exponents.epsilon", *v);
    if (auto v = get("exponents.theta_resolution"))
        c.theta_resolution = parse_rational_field("exponents.theta_resolution", *v);
    if (auto v = get("exponents.delta")) c.delta = parse_rational_field("exponents.delta", *v);

    if (auto v = get("morawetz.r_side")) c.r_side = parse_double("morawetz.r_side", *v);
    if (auto v = get("morawetz.tol")) c.tol = parse_double("morawetz.tol", *v);

    if (auto v = get("diagnostics.q_list")) {
        c.q_list.clear();
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item.erase(0, item.find_first_not_of(" \t"));
            item.erase(item.find_last_not_of(" \t") + 1);
            c.q_list.push_back(parse_double("diagnostics.q_list", item));
        }
        if (c.q_list.empty()) fail("diagnostics.q_list", "must list at least one exponent");
    }
    if (auto v = get("diagnostics.transient")) c.transient = parse_double("diagnostics.transient", *v);
    if (auto v = get("diagnostics.cauchy_transient"))
        c.cauchy_transient = parse_double("diagnostics.cauchy_transient", *v);
    if (auto v = get("diagnostics.snapshot_start")) c.snapshot_start = parse_double("diagnostics.snapshot_start", *v);
    if (auto v = get("diagnostics.snapshot_growth")) c.snapshot_growth = parse_double("diagnostics.snapshot_growth", *v);
    if (auto v = get("diagnostics.guard_threshold")) c.guard_threshold = parse_double("diagnostics.guard_threshold", *v);

    validate(c);
    return c;
}

std::string emit_config(const RunConfig& c) {
    pt::ptree t;
    t.put("run.preset", std::string(to_string(c.preset)));
    t.put("run.output_dir", c.output_dir);
    t.put("grid.d", c.d);
    t.put("grid.L", format_double(c.L));
    t.put("grid.nx", c.nx);
    t.put("grid.ny", c.ny);
    t.put("physics.alpha", to_string(c.alpha));
    t.put("physics.lambda", c.lambda);
    t.put("control.dt", format_double(c.dt));
    t.put("control.t_end", format_double(c.t_end));
    t.put("control.sample_every", c.sample_every);
    t.put("datum.kind", std::string(to_string(c.datum.kind)));
    t.put("datum.amplitude", format_double(c.datum.amplitude));
    t.put("datum.width", format_double(c.datum.width));
    t.put("datum.y_modulation", format_double(c.datum.y_modulation));
    t.put("datum.B", format_double(c.datum.B));
    t.put("datum.k1", c.datum.k1);
    t.put("datum.k2", c.datum.k2);
    t.put("datum.n", c.datum.n);
    t.put("datum.A", format_double(c.datum.A));
    t.put("datum.path", c.datum.path);
    t.put("exponents.r", c.r ? to_string(*c.r) : std::string());
    t.put("exponents.epsilon", to_string(c.epsilon));
    t.put("exponents.theta_resolution", to_string(c.theta_resolution));
    t.put("exponents.delta", to_string(c.delta));
    t.put("morawetz.r_side", format_double(c.r_side));
    t.put("morawetz.tol", format_double(c.tol));
    t.put("diagnostics.q_list", join_doubles(c.q_list));
    t.put("diagnostics.transient", format_double(c.transient));
    t.put("diagnostics.cauchy_transient", format_double(c.cauchy_transient));
    t.put("diagnostics.snapshot_start", format_double(c.snapshot_start));
    t.put("diagnostics.snapshot_growth", format_double(c.snapshot_growth));
    t.put("diagnostics.guard_threshold", format_double(c.guard_threshold));
    std::ostringstream out;
    pt::write_ini(out, t);
    return out.str();
}

}  // namespace nlslab
