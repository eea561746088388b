#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nlslab/config.hpp"
#include "nlslab/error.hpp"
#include "nlslab/presets.hpp"
#include "nlslab/records.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const InvalidInput& e) {
        return e.what();
    }
    return {};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nlslab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_decay(const fs::path& out) {
    RunConfig c = preset_defaults(Preset::decay);
    c.output_dir = out.string();
    c.L = 40;
    c.nx = 256;
    c.ny = 4;
    c.dt = 1e-2;
    c.t_end = 0.2;
    c.sample_every = 3;
    c.r_side = 1.0;
    return c;
}

}  // namespace

TEST_CASE("parse_config defaults and ranges") {
    SUBCASE("minimal decay config takes preset defaults") {
        const auto c = parse_config("[run]\npreset = decay\n");
        CHECK(c.dt == 1e-3);
        CHECK(c.L == 200);
        CHECK(c.nx == 4096);
        CHECK(c.ny == 32);
        CHECK(c.alpha == 5);
        CHECK(c.lambda == 1);
    }
    SUBCASE("empty text is the decay preset") { CHECK(parse_config("") == preset_defaults(Preset::decay)); }
    SUBCASE("scattering accepts alpha = 5 for d = 1") {
        const auto c = parse_config("[run]\npreset = scattering\n[physics]\nalpha = 5\n");
        CHECK(c.alpha == 5);
        CHECK(c.L == 800);
    }
    SUBCASE("scattering rejects alpha below 4/d") {
        for (const char* a : {"1/2", "3", "4"}) {
            const auto msg = error_of(std::string("[run]\npreset = scattering\n[physics]\nalpha = ") + a + "\n");
            CHECK(msg.find("physics.alpha") != std::string::npos);
            CHECK(msg.find("4/d < alpha < 4/(d-1)") != std::string::npos);
        }
    }
    SUBCASE("energy-critical power rejected for d = 2") {
        const auto msg = error_of("[grid]\nd = 2\nL = 40\nnx = 64\n[physics]\nalpha = 4\n");
        CHECK(msg.find("alpha < 4/(d-1)") != std::string::npos);
    }
    SUBCASE("soliton-control pins d, alpha and lambda") {
        const auto c = parse_config("[run]\npreset = soliton-control\n");
        CHECK(c.d == 1);
        CHECK(c.alpha == 2);
        CHECK(c.lambda == -1);
        CHECK(error_of("[run]\npreset = soliton-control\n[physics]\nalpha = 3\n").find("physics.alpha") !=
              std::string::npos);
        CHECK(error_of("[run]\npreset = soliton-control\n[physics]\nlambda = 1\n").find("physics.lambda") !=
              std::string::npos);
    }
    SUBCASE("bad fields are named") {
        CHECK(error_of("[grid]\nnx = 100\n").find("grid.nx") != std::string::npos);
        CHECK(error_of("[grid]\nnz = 100\n").find("grid.nz") != std::string::npos);
        CHECK(error_of("[gird]\nnx = 128\n").find("unknown section") != std::string::npos);
        CHECK(error_of("[control]\ndt = fast\n").find("control.dt") != std::string::npos);
        CHECK(error_of("[physics]\nalpha = 5/0\n").find("physics.alpha") != std::string::npos);
        CHECK(error_of("[run]\npreset = blowup\n").find("run.preset") != std::string::npos);
        CHECK_THROWS_AS(parse_config("[grid\nd = 1\n"), InvalidInput);
    }
    SUBCASE("exponents preset defaults to the worked r only for (1, 5)") {
        CHECK(parse_config("[run]\npreset = exponents\n").r == Rational(8));
        CHECK_FALSE(parse_config("[run]\npreset = exponents\n[physics]\nalpha = 9/2\n").r.has_value());
    }
}

TEST_CASE("config round trip") {
    for (auto p : {Preset::decay, Preset::soliton_control, Preset::morawetz, Preset::scattering, Preset::exponents}) {
        const RunConfig c = preset_defaults(p);
        CHECK(parse_config(emit_config(c)) == c);
    }
    RunConfig c = preset_defaults(Preset::scattering);
    c.alpha = Rational(11, 2);
    c.r = Rational(15, 2);
    c.dt = 0.1 + 0.2;  // not a short decimal
    c.q_list = {4.5, 10.0 / 3.0, INFINITY};
    c.datum.y_modulation = 1.0 / 3.0;
    c.output_dir = "some dir/with space";
    c.epsilon = Rational(1, 7);
    const RunConfig back = parse_config(emit_config(c));
    CHECK(back == c);
    CHECK(same_bits(back.dt, c.dt));
}

TEST_CASE("records emission") {
    RecordSchema schema{{4.0, INFINITY}, {"theta_mixed", "aux_u"}};
    SUBCASE("column order") {
        const auto cols = schema.columns();
        const std::vector<std::string> expected{
            "t",        "mass",         "energy",       "h1_norm",      "lq_4",     "lq_inf",
            "J",        "morawetz_lhs", "morawetz_rhs", "positivity_S", "cube_sup", "cube_sup_integral",
            "mixed_norm_theta", "acc_theta_mixed", "acc_aux_u", "boundary_guard_flag"};
        CHECK(cols == expected);
    }
    SUBCASE("empty stream is header only") {
        const auto text = emit_records(schema, {});
        CHECK(std::count(text.begin(), text.end(), '\n') == 1);
        std::istringstream in(text);
        const auto table = parse_records(in);
        CHECK(table.schema == schema);
        CHECK(table.records.empty());
    }
    SUBCASE("one record round-trips exactly") {
        DiagnosticsRecord r;
        r.t = 0.1 * 3;
        r.mass = std::sqrt(2.0);
        r.energy = -1.0 / 3.0;
        r.h1_norm = 1e-300;
        r.lq_norms = {std::nextafter(1.0, 2.0), 5e-324};
        r.J = -0.0;
        r.morawetz_lhs = 12345.678901234567;
        r.morawetz_rhs = 1.0 / 7.0;
        r.positivity_S = 2.0 / 3.0;
        r.cube_sup = 1e10 / 3.0;
        r.mixed_norm_theta = std::exp(1.0);
        r.accumulators = {std::acos(-1.0), 0.0};
        r.boundary_guard_flag = true;
        const auto text = emit_records(schema, {r});
        CHECK(std::count(text.begin(), text.end(), '\n') == 2);
        std::istringstream in(text);
        const auto table = parse_records(in);
        REQUIRE(table.records.size() == 1);
        const auto& b = table.records[0];
        CHECK(same_bits(b.t, r.t));
        CHECK(same_bits(b.mass, r.mass));
        CHECK(same_bits(b.energy, r.energy));
        CHECK(same_bits(b.h1_norm, r.h1_norm));
        CHECK(same_bits(b.lq_norms[0], r.lq_norms[0]));
        CHECK(same_bits(b.lq_norms[1], r.lq_norms[1]));
        CHECK(same_bits(b.J, r.J));
        CHECK(same_bits(b.morawetz_lhs, r.morawetz_lhs));
        CHECK(same_bits(b.morawetz_rhs, r.morawetz_rhs));
        CHECK(same_bits(b.positivity_S, r.positivity_S));
        CHECK(same_bits(b.cube_sup, r.cube_sup));
        CHECK(std::isnan(b.cube_sup_integral));
        CHECK(same_bits(b.mixed_norm_theta, r.mixed_norm_theta));
        CHECK(same_bits(b.accumulators[0], r.accumulators[0]));
        CHECK(b.boundary_guard_flag);
        CHECK(emit_records(table.schema, table.records) == text);
    }
    SUBCASE("schema mismatch rejected") {
        std::ostringstream out;
        RecordWriter w(out, schema);
        CHECK_THROWS_AS(w.write(DiagnosticsRecord{}), InvalidInput);
    }
    SUBCASE("uncommitted file stays marked partial") {
        const auto dir = scratch("partial");
        fs::create_directories(dir);
        {
            RecordFile f(dir / "records.csv", schema);
            CHECK(fs::exists(f.partial_path()));
        }
        CHECK(fs::exists(dir / "records.csv.partial"));
        CHECK_FALSE(fs::exists(dir / "records.csv"));
        CHECK_THROWS_AS(RecordFile(dir / "missing" / "records.csv", schema), IoError);
        fs::remove_all(dir);
    }
    SUBCASE("verify flags violated inequalities") {
        DiagnosticsRecord good;
        good.mass = 1;
        good.h1_norm = 1;
        good.lq_norms = {1, 1};
        good.accumulators = {0, 0};
        good.morawetz_lhs = 2;
        good.morawetz_rhs = 1;
        good.positivity_S = 0.5;
        DiagnosticsRecord bad = good;
        bad.morawetz_lhs = 1;
        bad.morawetz_rhs = 1.001;
        DiagnosticsRecord neg = good;
        neg.positivity_S = -1e-6;
        const auto report = verify_records(RecordTable{schema, {good, bad, neg}});
        CHECK(report.checked == 3);
        REQUIRE(report.failures.size() == 2);
        CHECK(report.failures[0].row == 2);
        CHECK_FALSE(report.failures[0].morawetz_ok);
        CHECK(report.failures[1].row == 3);
        CHECK_FALSE(report.failures[1].positivity_ok);
    }
}

TEST_CASE("snapshot steps are geometric on the sample grid") {
    RunConfig c = preset_defaults(Preset::scattering);
    const auto steps = snapshot_steps(c);
    std::vector<long long> expected;
    for (double t : {1.0, 1.3, 1.7, 2.2, 2.9, 3.7, 4.8, 6.3, 8.2, 10.6, 13.8, 17.9, 23.3, 30.3, 39.4})
        expected.push_back(std::llround(t * 1000));
    CHECK(steps == expected);
}

TEST_CASE("exponent queries") {
    ExponentQuery q;
    q.r = Rational(8);
    const auto crit = exponent_query(q);
    CHECK(crit["value"]["q"] == "80/11");
    CHECK(crit["report"]["feasible"] == true);
    for (const auto& row : crit["report"]["constraints"]) {
        CHECK(row.contains("constraint"));
        CHECK(row.contains("lhs"));
        CHECK(row.contains("cmp"));
        CHECK(row.contains("rhs"));
        CHECK(row.contains("ok"));
    }
    q.mode = ExponentMode::aux;
    const auto aux = exponent_query(q);
    CHECK(aux["value"]["l"] == "32/5");
    CHECK(aux["value"]["p"] == "16/3");
    q.mode = ExponentMode::theta;
    CHECK(exponent_query(q)["value"]["theta"] == "99/100");
    q.mode = ExponentMode::subcritical;
    CHECK_THROWS_AS(exponent_query(q), InvalidInput);
    q.alpha = 2;
    CHECK(exponent_query(q)["report"]["feasible"] == true);
    q.mode = ExponentMode::critical;
    q.alpha = 5;
    q.r = Rational(6);
    CHECK(exponent_query(q)["report"]["feasible"] == false);
    CHECK_THROWS_AS(parse_exponent_mode("supercritical"), InvalidInput);
}

TEST_CASE("run_preset artifacts") {
    SUBCASE("exponents preset writes the worked tuple") {
        const auto dir = scratch("exponents");
        RunConfig c = parse_config("[run]\npreset = exponents\n");
        c.output_dir = dir.string();
        const auto result = run_preset(c);
        CHECK(result.exit_code == 0);
        const auto j = nlohmann::json::parse(read_file(dir / "exponents.json"));
        CHECK(j["all_pass"] == true);
        const auto& t = j["critical_tuple"]["value"];
        CHECK(t["q"] == "80/11");
        CHECK(t["q_tilde"] == "40/7");
        CHECK(t["r_tilde"] == "4");
        CHECK(t["s"] == "1/10");
        CHECK(j["aux_pair"]["value"]["dual_identity"]["inv_l_prime"] == "27/32");
        CHECK(fs::exists(dir / "manifest.json"));
        fs::remove_all(dir);
    }
    SUBCASE("short decay run: rows, manifest, determinism, exit status") {
        const auto dir_a = scratch("decay_a");
        const auto dir_b = scratch("decay_b");
        RunConfig c = small_decay(dir_a);
        const auto a = run_preset(c);
        c.output_dir = dir_b.string();
        const auto b = run_preset(c);

        // steps = 20, samples at 0, 3, ..., 18
        CHECK(a.rows == 1 + static_cast<std::size_t>(std::floor(c.t_end / (c.dt * c.sample_every))));
        for (const char* f : {"records.csv", "scatter_report.json", "exponents.json", "manifest.json"})
            CHECK(fs::exists(dir_a / f));
        CHECK_FALSE(fs::exists(dir_a / "records.csv.partial"));
        CHECK(read_file(dir_a / "records.csv") == read_file(dir_b / "records.csv"));

        const auto m = nlohmann::json::parse(read_file(dir_a / "manifest.json"));
        CHECK(m["alpha"]["exact"] == "5");
        CHECK(m["alpha"]["float"] == 5.0);
        CHECK(m.contains("version"));
        CHECK(m.contains("wall_seconds"));
        CHECK(parse_config(m["config"].get<std::string>()) == small_decay(dir_a));

        // t = 0.2 is far too early for a factor-3 decay: exit status reports it.
        bool decay_failed = false, others_ok = true;
        for (const auto& ch : a.checks) {
            if (ch.name == "l4_decay" || ch.name == "cube_sup_decay") decay_failed = !ch.passed;
            else others_ok = others_ok && ch.passed;
        }
        CHECK(decay_failed);
        CHECK(others_ok);
        CHECK(a.exit_code == 1);

        std::ifstream in(dir_a / "records.csv");
        const auto table = parse_records(in);
        CHECK(table.records.size() == a.rows);
        CHECK(verify_records(table).ok());
        fs::remove_all(dir_a);
        fs::remove_all(dir_b);
    }
    SUBCASE("file datum must match the grid") {
        RunConfig c = small_decay(scratch("file"));
        c.datum.kind = DatumKind::file;
        c.datum.path = (scratch("file") / "nope.bin").string();
        CHECK_THROWS(initial_datum(c));
    }
}
