#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nlslab/error.hpp"
#include "nlslab/nls_integrator.hpp"
#include "nlslab/norms.hpp"

using namespace nlslab;
using std::numbers::pi;

namespace {

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const PhysicsParams defocusing_quintic = PhysicsParams::make(5.0, 1.0);

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PhysicsParams::make(0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(PhysicsParams::make(2.0, 0.5), InvalidInput);
    CHECK_THROWS_AS(StepControl::make(0.0, 1.0, 1), InvalidInput);
    CHECK_THROWS_AS(StepControl::make(1e-3, 1.0, 0), InvalidInput);
    CHECK(StepControl::make(1e-3, 10.0, 1).steps() == 10000);
}

TEST_CASE("Strang step") {
    SUBCASE("zero field stays zero") {
        const auto g = Grid::make(1, 10.0, 32, 4);
        const auto out = strang_step(SpectralField::zeros(g), defocusing_quintic, 0.01);
        for (const auto& c : out.coeffs()) CHECK(c == cplx(0));
        CHECK(out.time() == doctest::Approx(0.01));
    }
    SUBCASE("plane wave is exact") {
        for (int d : {1, 2}) {
            const auto g = Grid::make(d, 8.0, 16, 8);
            const double A = 0.9, dt = 0.013;
            const auto f = plane_wave(g, {2, d == 2 ? -1 : 0}, 3, A);
            const double xi2 = std::pow(2 * pi * 2 / 8.0, 2) + (d == 2 ? std::pow(2 * pi / 8.0, 2) : 0.0);
            const auto out = strang_step(f, defocusing_quintic, dt).to_physical();
            auto expect = f.to_physical();
            for (auto& v : expect) v *= std::polar(1.0, dt * (xi2 + 9 + std::pow(A, 5.0)));
            CHECK(max_diff(out, expect) < 1e-12);
        }
    }
    SUBCASE("soliton: one small step matches the phase rotation") {
        const auto g = Grid::make(1, 80.0, 2048, 4);
        const auto f = soliton_profile(g, 1.0);
        const double dt = 1e-4;
        const auto out = strang_step(f, PhysicsParams::make(2.0, -1.0), dt).to_physical();
        auto expect = f.to_physical();
        for (auto& v : expect) v *= std::polar(1.0, -dt);
        CHECK(max_diff(out, expect) < 1e-8);
    }
    SUBCASE("non-finite data aborts") {
        const auto g = Grid::make(1, 10.0, 16, 4);
        std::vector<cplx> c(g.size());
        c[3] = cplx(NAN, 0.0);
        CHECK_THROWS_AS(strang_step(SpectralField(g, c), defocusing_quintic, 0.1), BlowUp);
        CHECK_THROWS_AS(evolve(SpectralField(g, c), defocusing_quintic, StepControl::make(0.1, 1.0, 1), {}),
                        BlowUp);
    }
}

TEST_CASE("soliton control") {
    const auto g = Grid::make(1, 80.0, 2048, 4);
    const auto f = soliton_profile(g, 1.0);
    const auto focusing = PhysicsParams::make(2.0, -1.0);
    SUBCASE("mass = 4 B 2 pi") {
        CHECK(rel(mass(f), 8 * pi) < 1e-12);
        CHECK(rel(mass(soliton_profile(g, 1.5)), 4 * 1.5 * 2 * pi) < 1e-12);
    }
    SUBCASE("shape preserved to t = 1") {
        const auto out = evolve(f, focusing, StepControl::make(1e-3, 1.0, 1000), {}).to_physical();
        const auto u0 = f.to_physical();
        double shape = 0.0, full = 0.0;
        for (std::size_t i = 0; i < u0.size(); ++i) {
            shape = std::max(shape, std::abs(std::abs(out[i]) - std::abs(u0[i])));
            full = std::max(full, std::abs(out[i] - u0[i] * std::polar(1.0, -1.0)));
        }
        CHECK(shape < 1e-6);
        // The splitting error shows up as an O(dt^2 t) phase drift.
        CHECK(full < 1e-5);
    }
    SUBCASE("Lq norms constant") {
        std::vector<double> l4, linf;
        evolve(f, focusing, StepControl::make(1e-3, 2.0, 200),
               {[&](const Sample& s) {
                   l4.push_back(lebesgue_norm(s.field, 4.0));
                   linf.push_back(lebesgue_norm(s.field, infinity));
               }});
        for (double v : l4) CHECK(rel(v, l4.front()) < 1e-6);
        for (double v : linf) CHECK(rel(v, linf.front()) < 1e-6);
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS(soliton_profile(g, 0.0), InvalidInput);
        CHECK_THROWS_AS(soliton_profile(Grid::make(2, 8.0, 8, 4), 1.0), InvalidInput);
    }
}

TEST_CASE("evolve") {
    const auto g = Grid::make(1, 40.0, 256, 8);
    const auto f = gaussian(g, 1.0, 1.0, 0.5);
    SUBCASE("linear hook equals free evolution") {
        const auto out = evolve(f, PhysicsParams::make(5.0, 0.0), StepControl::make(1e-2, 3.0, 50), {});
        CHECK(max_diff(out.coeffs(), free_evolve(f, 3.0).coeffs()) < 1e-12);
        CHECK(out.time() == doctest::Approx(3.0));
    }
    SUBCASE("sinks see step 0 and every sample_every steps") {
        std::vector<double> times;
        evolve(f, defocusing_quintic, StepControl::make(1e-2, 1.0, 10),
               {[&](const Sample& s) { times.push_back(s.t); }});
        REQUIRE(times.size() == 11);
        CHECK(times.front() == 0.0);
        CHECK(times.back() == doctest::Approx(1.0));
    }
    SUBCASE("merged half-steps agree with repeated strang_step") {
        auto ref = f;
        for (int i = 0; i < 20; ++i) ref = strang_step(ref, defocusing_quintic, 1e-2);
        const auto out = evolve(f, defocusing_quintic, StepControl::make(1e-2, 0.2, 7), {});
        CHECK(max_diff(out.coeffs(), ref.coeffs()) < 1e-12);
    }
    SUBCASE("mass drift over 1e4 steps") {
        const double m0 = mass(f);
        const auto out = evolve(f, defocusing_quintic, StepControl::make(1e-3, 10.0, 10000), {});
        CHECK(rel(mass(out), m0) < 1e-10);
    }
    SUBCASE("energy drift is second order") {
        const double h = 1e-3;
        double drift[3];
        for (int i = 0; i < 3; ++i) {
            const double dt = h * (4 >> i);
            const auto out = evolve(f, defocusing_quintic, StepControl::make(dt, 1.0, 1 << 20), {});
            drift[i] = std::abs(energy(out, defocusing_quintic) - energy(f, defocusing_quintic));
        }
        const double p1 = std::log2(drift[0] / drift[1]);
        const double p2 = std::log2(drift[1] / drift[2]);
        MESSAGE("energy orders " << p1 << " " << p2);
        CHECK(p1 >= 1.8);
        CHECK(p1 <= 2.2);
        CHECK(p2 >= 1.8);
        CHECK(p2 <= 2.2);
    }
    SUBCASE("time reversibility") {
        auto u = f;
        for (int i = 0; i < 200; ++i) u = strang_step(u, defocusing_quintic, 5e-3);
        for (int i = 0; i < 200; ++i) u = strang_step(u, defocusing_quintic, -5e-3);
        const auto diff = combine(u, 1.0, f, -1.0);
        CHECK(l2_norm_spectral(diff) / l2_norm_spectral(f) < 1e-9);
    }
}

TEST_CASE("conserved quantities of a plane wave") {
    const auto g = Grid::make(1, 10.0, 16, 4);
    const double A = 0.7, xi = 2 * pi / 10.0, vol = 2 * pi * 10.0;
    const auto f = plane_wave(g, {1, 0}, 1, A);
    CHECK(rel(mass(f), A * A * vol) < 1e-12);
    const double expect = 0.5 * A * A * (xi * xi + 1) * vol + std::pow(A, 7.0) / 7.0 * vol;
    CHECK(rel(energy(f, defocusing_quintic), expect) < 1e-12);
    CHECK(mass(SpectralField::zeros(g)) == 0.0);
    CHECK(energy(SpectralField::zeros(g), defocusing_quintic) == 0.0);
}

TEST_CASE("resolvability ratio") {
    const auto g = Grid::make(1, 200.0, 4096, 32);
    const double r = resolvability_ratio(g, 1e-3);
    CHECK(r > 0.5);
    CHECK(r < 1.0);
}
