#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "field_families.hpp"
#include "nlslab/error.hpp"
#include "nlslab/nls_integrator.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/scattering.hpp"

using namespace nlslab;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double max_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
    return m;
}

struct WorkedExponents {
    exponents::ProblemParams params = exponents::ProblemParams::make(1, Rational(5));
    exponents::StrichartzTuple base = exponents::critical_tuple(params, Rational(8)).value;
    exponents::ThetaTuple theta = exponents::theta_tuple(base, params, Rational(99, 100)).value;
    exponents::AuxPair aux = exponents::auxiliary_pair(params, base, exponents::Strictness::equality).value;
};

}  // namespace

TEST_CASE("pullback") {
    const auto g = Grid::make(1, 20.0, 64, 8);
    std::mt19937_64 rng(4);
    const auto f = families::band_limited(g, rng, 8, 3);
    SUBCASE("free trajectory pulls back to the datum") {
        for (double t : {0.0, 0.5, 3.0, 11.0}) CHECK(max_diff(pullback(free_evolve(f, t)), f) < 1e-12);
        CHECK(pullback(free_evolve(f, 2.0)).time() == 0.0);
    }
    SUBCASE("H1 isometry along a nonlinear run") {
        evolve(f, PhysicsParams::make(3.0, 1.0), StepControl::make(1e-3, 0.5, 100),
               {[](const Sample& s) { CHECK(rel(sobolev_h1(pullback(s.field)), sobolev_h1(s.field)) < 1e-12); }});
    }
}

TEST_CASE("Cauchy table") {
    const auto g = Grid::make(1, 20.0, 64, 8);
    std::mt19937_64 rng(5);
    const auto f = families::band_limited(g, rng, 8, 3);
    SUBCASE("free trajectory") {
        std::vector<SpectralField> snaps;
        for (double t : {1.0, 1.3, 1.69, 2.197}) snaps.push_back(free_evolve(f, t));
        const auto t = cauchy_table(snaps);
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(t.at(i, i) == 0.0);
            for (std::size_t j = 0; j < t.size(); ++j) {
                CHECK(t.at(i, j) == t.at(j, i));
                CHECK(t.at(i, j) < 1e-12);
            }
        }
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(cauchy_table({f, free_evolve(f, 1.0)}), InvalidInput);
        CHECK_THROWS_AS(cauchy_table({free_evolve(f, 1.0), f, free_evolve(f, 2.0)}), InvalidInput);
    }
    SUBCASE("focusing soliton does not scatter") {
        const auto gs = Grid::make(1, 80.0, 1024, 4);
        std::vector<double> times;
        for (double t = 1.0; t <= 20.0; t *= 1.3) times.push_back(std::round(t * 100) / 100);
        std::vector<SpectralField> snaps;
        std::vector<double> l4;
        evolve(soliton_profile(gs, 1.0), PhysicsParams::make(2.0, -1.0), StepControl::make(1e-3, 20.0, 10),
               {[&](const Sample& s) {
                   l4.push_back(lebesgue_norm(s.field, 4.0));
                   for (double t : times)
                       if (std::abs(s.t - t) < 1e-9) snaps.push_back(s.field);
               }});
        REQUIRE(snaps.size() == times.size());
        const auto table = cauchy_table(snaps);
        const auto flags = cauchy_flags(table, 5.0);
        CHECK_FALSE(flags.tail_decreasing);
        CHECK(flags.no_scattering);
        for (double v : l4) CHECK(rel(v, l4.front()) < 1e-3);
    }
}

TEST_CASE("decay series") {
    SUBCASE("free Gaussian follows the linear dispersive rate") {
        const auto g = Grid::make(1, 400.0, 8192, 4);
        const double w = 1.0;
        const auto f = gaussian(g, 1.0, w, 0.0);
        std::vector<SpectralField> snaps;
        for (double t : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) snaps.push_back(free_evolve(f, t));
        const auto series = decay_series(snaps, {4.0, 6.0, infinity});
        for (const auto& s : series) {
            for (std::size_t i = 0; i < s.times.size(); ++i) {
                const double t = s.times[i];
                const double sigma = std::sqrt(1 + 4 * t * t / std::pow(w, 4));
                const double expect = s.values[0] * std::pow(sigma, -0.5 + (std::isinf(s.q) ? 0.0 : 1.0 / s.q));
                CHECK(rel(s.values[i], expect) < 1e-8);
            }
            CHECK(s.monotone_tail);
            CHECK_FALSE(s.outside_decay_range);
        }
    }
    SUBCASE("range flag") {
        CHECK(in_decay_range(1, 100.0));
        CHECK(in_decay_range(2, 5.9));
        CHECK_FALSE(in_decay_range(2, 6.0));
        CHECK_FALSE(in_decay_range(1, 2.0));
        const auto s = decay_series(2, 8.0, {0.0, 1.0}, {1.0, 1.0});
        CHECK(s.outside_decay_range);
    }
    SUBCASE("constant series") {
        const auto s = decay_series(1, 4.0, {0, 1, 2, 3}, {2.0, 2.0, 2.0, 2.0});
        CHECK(s.decay_factor == 1.0);
        CHECK(s.max_relative_deviation == 0.0);
        CHECK(s.monotone_tail);
    }
}

TEST_CASE("space-time accumulators") {
    const WorkedExponents ex;
    SUBCASE("zero stream") {
        SpacetimeAccumulators acc(ex.params, ex.base, ex.theta, ex.aux, Rational(1, 20));
        const auto g = Grid::make(1, 10.0, 32, 8);
        for (int i = 0; i < 4; ++i) acc.push(0.1 * i, SpectralField::zeros(g));
        for (const auto& c : acc.channels()) CHECK(c.value == 0.0);
    }
    SUBCASE("single increment of a plane wave") {
        SpacetimeAccumulators acc(ex.params, ex.base, ex.theta, ex.aux, Rational(1, 20));
        const auto g = Grid::make(1, 10.0, 32, 8);
        const double A = 0.6, dt = 0.25;
        const auto f = plane_wave(g, {1, 0}, 2, A);
        acc.push(0.0, f);
        acc.push(dt, f);
        // h(x) = sqrt(2 pi) A <2>^{gamma}; L^r_x over length 10.
        const double gamma = 0.55;
        const double h = std::sqrt(2 * pi) * A * std::pow(5.0, gamma / 2);
        const double mixed = h * std::pow(10.0, 1.0 / acc.r_theta());
        CHECK(rel(acc.channels()[0].value, dt * std::pow(mixed, acc.q_theta())) < 1e-12);
        CHECK(acc.r_theta() == doctest::Approx(8.0));
        CHECK(acc.l() == doctest::Approx(6.4));
        CHECK(acc.p() == doctest::Approx(16.0 / 3.0));
        const double u_lp = std::sqrt(2 * pi) * A * std::pow(10.0, 1.0 / acc.p());
        CHECK(rel(acc.channels()[1].value, dt * std::pow(u_lp, acc.l())) < 1e-12);
        CHECK(rel(acc.channels()[2].value, dt * std::pow(2.0 * u_lp, acc.l())) < 1e-12);
        CHECK(rel(acc.channels()[3].value, dt * std::pow(2 * pi / 10.0 * u_lp, acc.l())) < 1e-12);
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(SpacetimeAccumulators(ex.params, ex.base, ex.theta, ex.aux, Rational(1, 2)), InvalidInput);
        CHECK_THROWS_AS(SpacetimeAccumulators(ex.params, ex.base, ex.theta, ex.aux, Rational(0)), InvalidInput);
        const auto bad = exponents::theta_tuple(ex.base, ex.params, Rational(1, 1000)).value;
        CHECK_THROWS_AS(SpacetimeAccumulators(ex.params, ex.base, bad, ex.aux, Rational(1, 20)), InvalidInput);
    }
}

TEST_CASE("report json") {
    const auto g = Grid::make(1, 20.0, 64, 8);
    std::mt19937_64 rng(6);
    const auto f = families::band_limited(g, rng, 8, 3);
    ScatterReport r;
    r.cauchy = cauchy_table({free_evolve(f, 1), free_evolve(f, 2), free_evolve(f, 3)});
    r.flags = cauchy_flags(r.cauchy, 1.0);
    const auto j = to_json(r);
    CHECK(j["cauchy_matrix"].size() == 9);
    CHECK(j["times"].size() == 3);
    CHECK(j.contains("flags"));
}
