#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "field_families.hpp"
#include "morawetz_oracle.hpp"
#include "nlslab/morawetz.hpp"
#include "nlslab/norms.hpp"

using namespace nlslab;

namespace {

double rel(double a, double b, double floor = 0.0) {
    return std::abs(a - b) / std::max({std::abs(b), floor, 1e-300});
}

const PhysicsParams quintic = PhysicsParams::make(5.0, 1.0);

SpectralField two_bumps(const Grid& g, double v) {
    return SpectralField::from_profile(g, [v](std::span<const double> x, double y) {
        const double a = x[0] - 3.0, b = x[0] + 3.0;
        return std::exp(-a * a) * std::polar(1.0, -v * x[0]) * (1.0 + 0.3 * std::cos(y)) +
               std::exp(-b * b) * std::polar(1.0, v * x[0]);
    });
}

}  // namespace

TEST_CASE("kernels") {
    const auto g = Grid::make(2, 10.0, 16, 4);
    const MorawetzKernels k(g);
    for (int m1 = -16; m1 < 16; ++m1) {
        for (int m2 = -16; m2 < 16; ++m2) {
            const double h11 = k.sample(MorawetzKernels::hess_11, m1, m2);
            const double h12 = k.sample(MorawetzKernels::hess_12, m1, m2);
            const double h22 = k.sample(MorawetzKernels::hess_22, m1, m2);
            CHECK(h11 >= 0.0);
            CHECK(h11 * h22 - h12 * h12 >= -1e-15);
            CHECK(k.sample(MorawetzKernels::laplacian, m1, m2) > 0.0);
            if (m1 > -16 && m2 > -16)
                CHECK(k.sample(MorawetzKernels::grad_1, m1, m2) == -k.sample(MorawetzKernels::grad_1, -m1, -m2));
        }
    }
}

TEST_CASE("J") {
    const auto g = Grid::make(1, 20.0, 256, 16);
    const MorawetzKernels k(g);
    SUBCASE("real field gives 0") {
        std::mt19937_64 rng(1);
        const auto f = families::real_band_limited(g, rng, 20, 4);
        CHECK(std::abs(morawetz_J(f, k)) < 1e-12 * mass(f) * mass(f));
    }
    SUBCASE("soliton gives 0") {
        CHECK(std::abs(morawetz_J(soliton_profile(g, 1.0), k)) < 1e-12);
    }
    SUBCASE("two bumps with opposite velocities match the double sum") {
        const auto f = two_bumps(g, 1.5);
        const auto ds = densities(f, 5.0);
        const double j = morawetz_J(ds, k);
        const auto direct = oracle::direct_sums(g, ds);
        CHECK(std::abs(j) > 1.0);
        CHECK(rel(j, direct.J) < 1e-10);
        // Oddness of grad phi: the two terms coincide.
        double one = 0.0;
        const auto conv = k.convolve(MorawetzKernels::grad_1, ds.rho);
        for (std::size_t i = 0; i < conv.size(); ++i) one += ds.P[0][i] * conv[i];
        CHECK(rel(j, -4.0 * one * g.cell_x()) < 1e-10);
    }
}

TEST_CASE("terms against the double-sum oracle") {
    SUBCASE("zero field") {
        const auto g = Grid::make(1, 10.0, 64, 4);
        const auto t = morawetz_terms(SpectralField::zeros(g), quintic, MorawetzKernels(g));
        CHECK(t.lhs == 0.0);
        CHECK(t.rhs == 0.0);
    }
    SUBCASE("random localized fields, d = 1") {
        const auto g = Grid::make(1, 20.0, 256, 16);
        const MorawetzKernels k(g);
        std::mt19937_64 rng(42);
        for (int i = 0; i < 5; ++i) {
            const auto ds = densities(families::localized(g, rng, 1.0 + 0.3 * i, 3), 5.0);
            const auto t = morawetz_terms(ds, quintic, k);
            const auto o = oracle::direct_sums(g, ds);
            const double o_lhs = o.S() + (10.0 / 7.0) * (o.interaction + o.interaction_partner);
            const double o_rhs = (20.0 / 7.0) * o.interaction;
            CHECK(rel(t.lhs, o_lhs) < 1e-9);
            CHECK(rel(t.rhs, o_rhs) < 1e-9);
            CHECK(rel(t.S(), o.S()) < 1e-9);
            CHECK(rel(morawetz_J(ds, k), o.J, 1e-3 * std::abs(o.S())) < 1e-9);
            // Relabeling symmetry x1 <-> x2.
            CHECK(rel(t.kinetic, t.kinetic_partner) < 1e-12);
            CHECK(rel(t.interaction, t.interaction_partner) < 1e-12);
            CHECK(t.lhs - t.rhs >= -1e-8 * std::max(std::abs(t.lhs), std::abs(t.rhs)));
        }
    }
    SUBCASE("random localized fields, d = 2") {
        const auto g = Grid::make(2, 12.0, 16, 8);
        const MorawetzKernels k(g);
        std::mt19937_64 rng(43);
        for (int i = 0; i < 3; ++i) {
            const auto ds = densities(families::localized(g, rng, 1.5, 2), 3.0);
            const auto t = morawetz_terms(ds, PhysicsParams::make(3.0, 1.0), k);
            const auto o = oracle::direct_sums(g, ds);
            CHECK(rel(t.S(), o.S()) < 1e-9);
            CHECK(rel(t.rhs, 2.4 * o.interaction) < 1e-9);
            CHECK(rel(t.momentum, o.momentum) < 1e-9);
        }
    }
}

TEST_CASE("positivity certificate") {
    SUBCASE("zero field") {
        const auto g = Grid::make(1, 10.0, 64, 4);
        CHECK(positivity_certificate(SpectralField::zeros(g), MorawetzKernels(g)) == 0.0);
    }
    SUBCASE("real field: no momentum term, S >= 0") {
        const auto g = Grid::make(1, 20.0, 128, 8);
        const MorawetzKernels k(g);
        std::mt19937_64 rng(2);
        const auto t = morawetz_terms(families::real_band_limited(g, rng, 10, 3), quintic, k);
        CHECK(std::abs(t.momentum) < 1e-12 * t.S());
        CHECK(t.kinetic >= 0.0);
        CHECK(t.gradient >= 0.0);
    }
    SUBCASE("200 random band-limited fields") {
        const auto g = Grid::make(1, 20.0, 128, 8);
        const MorawetzKernels k(g);
        std::mt19937_64 rng(3);
        for (int i = 0; i < 200; ++i) {
            const auto f = families::band_limited(g, rng, 12, 3);
            const double S = positivity_certificate(f, k);
            const double scale = std::pow(mass(f) + sobolev_h1(f), 4.0);
            CHECK(S >= -1e-10 * scale);
            if (i % 40 == 0) CHECK(rel(S, oracle::direct_sums(g, densities(f, 1.0)).S()) < 1e-9);
        }
    }
}

TEST_CASE("local mass flux") {
    SUBCASE("plane wave: both sides vanish") {
        const auto g = Grid::make(1, 20.0, 64, 4);
        const auto f = plane_wave(g, {2, 0}, 1, 1.0);
        std::vector<double> psi(g.nx);
        for (int i = 0; i < g.nx; ++i) psi[i] = std::exp(-g.x(i) * g.x(i));
        const auto a = free_evolve(f, -1e-3), b = free_evolve(f, 1e-3);
        const auto c = local_mass_flux_residual(a, f, b, psi, 1e-3);
        CHECK(std::abs(c.time_derivative) < 1e-10);
        CHECK(std::abs(c.flux) < 1e-10);
    }
    SUBCASE("defocusing Gaussian, bump of width 5") {
        const auto g = Grid::make(1, 100.0, 2048, 8);
        const auto u0 = gaussian(g, 1.0, 0.45, 0.0);
        std::vector<SpectralField> snaps;
        evolve(u0, quintic, StepControl::make(1e-3, 0.502, 1),
               {[&](const Sample& s) {
                   if (s.step >= 500) snaps.push_back(s.field);
               }});
        REQUIRE(snaps.size() == 3);
        std::vector<double> psi(g.nx);
        for (int i = 0; i < g.nx; ++i) {
            const double z = (g.x(i) - 1.0) / 5.0;
            psi[i] = std::exp(-z * z);
        }
        const auto c = local_mass_flux_residual(snaps[0], snaps[1], snaps[2], psi, 1e-3);
        CHECK(std::abs(c.flux) > 1e-3);
        CHECK(c.residual < 1e-5);
    }
    SUBCASE("real datum at t = 0 has zero flux") {
        const auto g = Grid::make(1, 20.0, 128, 4);
        const auto f = gaussian(g, 1.0, 1.0, 0.2);
        std::vector<double> psi(g.nx, 1.0);
        CHECK(std::abs(local_mass_flux_residual(f, f, f, psi, 1e-3).flux) == 0.0);
    }
}

TEST_CASE("dJ/dt") {
    SUBCASE("real even datum under free flow at t = 0") {
        const auto g = Grid::make(1, 40.0, 512, 4);
        const MorawetzKernels k(g);
        const auto f = gaussian(g, 1.0, 1.0, 0.0);
        const PhysicsParams linear{5.0, 0.0};
        const auto c = finite_difference_dJdt_check(free_evolve(f, -1e-3), f, free_evolve(f, 1e-3), linear, k, 1e-3);
        CHECK(std::abs(morawetz_J(f, k)) < 1e-14);
        // lhs(0) = S > 0 for a localized datum; J(t) is odd in t.
        CHECK(c.residual / std::abs(c.lhs) < 1e-5);
    }
    SUBCASE("plane wave under the linear hook: J constant, lhs 0") {
        const auto g = Grid::make(1, 20.0, 64, 4);
        const MorawetzKernels k(g);
        const auto f = plane_wave(g, {3, 0}, 1, 0.8);
        const PhysicsParams linear{5.0, 0.0};
        const auto c = finite_difference_dJdt_check(free_evolve(f, -0.1), f, free_evolve(f, 0.1), linear, k, 0.1);
        CHECK(std::abs(c.dJdt) < 1e-10);
        CHECK(std::abs(c.lhs) < 1e-10);
    }
    SUBCASE("defocusing Gaussian: Richardson order") {
        const auto g = Grid::make(1, 100.0, 2048, 8);
        const MorawetzKernels k(g);
        const auto u0 = gaussian(g, 1.0, 0.45, 0.0);
        const double t_mid = 0.5;
        double res[3], lhs = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double dt = 4e-3 / (1 << i);
            const long long mid = std::llround(t_mid / dt);
            std::vector<SpectralField> s;
            evolve(u0, quintic, StepControl::make(dt, (mid + 1) * dt, 1),
                   {[&](const Sample& x) {
                       if (x.step >= mid - 1) s.push_back(x.field);
                   }});
            REQUIRE(s.size() == 3);
            const auto c = finite_difference_dJdt_check(s[0], s[1], s[2], quintic, k, dt);
            res[i] = c.residual;
            lhs = c.lhs;
        }
        MESSAGE("residuals " << res[0] << " " << res[1] << " " << res[2] << " lhs " << lhs);
        CHECK(res[2] / std::abs(lhs) < 1e-4);
        const double p = std::log2(res[1] / res[2]);
        CHECK(p >= 1.8);
        CHECK(p <= 2.2);
    }
}

TEST_CASE("cube-sup accumulator") {
    SUBCASE("zero stream") {
        CubeSupAccumulator acc(1.0, 5.0);
        for (int i = 0; i < 5; ++i) acc.push(0.1 * i, 0.0);
        CHECK(acc.value() == 0.0);
    }
    SUBCASE("constant integrand grows linearly") {
        CubeSupAccumulator acc(1.0, 2.0);
        for (int i = 0; i <= 10; ++i) acc.push(0.5 * i, 2.0);
        CHECK(rel(acc.value(), 8.0 * 5.0) < 1e-14);
        CHECK(rel(acc.last_increment(), acc.peak_increment()) < 1e-14);
    }
    SUBCASE("non-increasing time rejected") {
        CubeSupAccumulator acc(1.0, 2.0);
        acc.push(1.0, 1.0);
        CHECK_THROWS(acc.push(1.0, 1.0));
    }
}
