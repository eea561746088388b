#include "nlslab/nls_integrator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlslab/error.hpp"
#include "nlslab/fft.hpp"
#include "nlslab/norms.hpp"

namespace nlslab {

namespace {

// |u|^alpha from |u|^2, with integer fast paths.
struct PowerMap {
    double half_alpha;
    int integer = -1;

    explicit PowerMap(double a) : half_alpha(0.5 * a) {
        if (a == std::round(a) && a >= 1 && a <= 8) integer = static_cast<int>(a);
    }

    double operator()(double m2) const {
        if (integer > 0) {
            double r = (integer & 1) ? std::sqrt(m2) : 1.0;
            for (int i = 0; i < integer / 2; ++i) r *= m2;
            return r;
        }
        return std::pow(std::max(m2, 1e-300), half_alpha);
    }
};

// Applies u <- u exp(i lambda tau |u|^alpha); returns false on non-finite data.
bool nonlinear_rotation(std::vector<cplx>& u, const PhysicsParams& p, const PowerMap& pw,
                        double tau) {
    bool finite = true;
    if (p.lambda == 0.0 || tau == 0.0) {
        for (const auto& v : u) finite &= std::isfinite(v.real()) && std::isfinite(v.imag());
        return finite;
    }
    const double c = p.lambda * tau;
    for (auto& v : u) {
        const double re = v.real(), im = v.imag();
        const double m2 = re * re + im * im;
        finite &= std::isfinite(m2);
        const double phase = c * pw(m2);
#if defined(__GLIBC__)
        double sn, cs;
        ::sincos(phase, &sn, &cs);
#else
        const double sn = std::sin(phase), cs = std::cos(phase);
#endif
        v = cplx(re * cs - im * sn, re * sn + im * cs);
    }
    return finite;
}

// Precomputed linear multiplier for a fixed dt.
std::vector<cplx> linear_multiplier(const Grid& g, double dt) {
    std::vector<cplx> m(g.size());
    for_each_mode(g, [&](std::size_t idx, int i1, int i2, int j) {
        const double n = g.n(j);
        const double phase = dt * (xi_squared(g, i1, i2) + n * n);
        m[idx] = cplx(std::cos(phase), std::sin(phase));
    });
    return m;
}

double guard_fraction(const Grid& g, const std::vector<cplx>& u, const BoundaryGuard& guard) {
    std::vector<double> rho(g.x_points(), 0.0);
    for (std::size_t x = 0; x < rho.size(); ++x) {
        double acc = 0.0;
        for (int j = 0; j < g.ny; ++j) acc += std::norm(u[x * g.ny + j]);
        rho[x] = acc * g.dy();
    }
    return edge_mass_fraction(g, rho, guard.r_side, guard.margin_fraction * g.L);
}

}  // namespace

PhysicsParams PhysicsParams::make(double alpha, double lambda) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be positive");
    if (lambda != 1.0 && lambda != -1.0 && lambda != 0.0)
        throw InvalidInput("lambda must be +1 (defocusing) or -1 (focusing)");
    return PhysicsParams{alpha, lambda};
}

StepControl StepControl::make(double dt, double t_end, int sample_every) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidInput("t_end must be nonnegative");
    if (sample_every < 1) throw InvalidInput("sample_every must be >= 1");
    return StepControl{dt, t_end, sample_every};
}

long long StepControl::steps() const { return std::llround(t_end / dt); }

double resolvability_ratio(const Grid& g, double dt) {
    const double xmax = std::numbers::pi * g.nx / g.L;
    const double nmax = g.ny / 2.0;
    return std::abs(dt) * (g.d * xmax * xmax + nmax * nmax) / (2.0 * std::numbers::pi);
}

SpectralField strang_step(const SpectralField& field, const PhysicsParams& physics, double dt) {
    const Grid& g = field.grid();
    const PowerMap pw(physics.alpha);
    std::vector<cplx> u = field.coeffs();
    backward_in_place(g, u);
    bool ok = nonlinear_rotation(u, physics, pw, 0.5 * dt);
    forward_in_place(g, u);
    apply_free_flow(g, u, dt);
    backward_in_place(g, u);
    ok &= nonlinear_rotation(u, physics, pw, 0.5 * dt);
    if (!ok) throw BlowUp("non-finite values in Strang step", 1);
    forward_in_place(g, u);
    return SpectralField(g, std::move(u), field.time() + dt);
}

SpectralField evolve(const SpectralField& initial, const PhysicsParams& physics,
                     const StepControl& control, const std::vector<Sink>& sinks,
                     const BoundaryGuard& guard) {
    const Grid& g = initial.grid();
    const PowerMap pw(physics.alpha);
    const double dt = control.dt;
    const long long steps = control.steps();
    const auto lin = linear_multiplier(g, dt);
    const double t0 = initial.time();
    bool warned = false;

    auto emit = [&](long long step, const std::vector<cplx>& coeffs, const std::vector<cplx>& phys) {
        if (guard.enabled && !warned && guard_fraction(g, phys, guard) > guard.threshold) warned = true;
        if (sinks.empty()) return;
        const SpectralField snap(g, coeffs, t0 + step * dt);
        const Sample sample{step, snap.time(), snap, warned};
        for (const auto& sink : sinks) sink(sample);
    };
    auto fail = [&](long long step) {
        throw BlowUp("non-finite values at step " + std::to_string(step), step);
    };

    std::vector<cplx> c = initial.coeffs();
    std::vector<cplx> u = initial.to_physical();
    emit(0, c, u);
    if (!nonlinear_rotation(u, physics, pw, 0.5 * dt)) fail(0);

    // Between nonlinear substeps the 1/N normalisation and the (-1)^k origin
    // phases of forward/backward_in_place cancel into the multiplier itself.
    std::vector<cplx> lin_raw(lin.size());
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < lin.size(); ++i) lin_raw[i] = lin[i] * inv_n;
    std::vector<int> dims(g.d, g.nx);
    dims.push_back(g.ny);

    for (long long s = 1; s <= steps; ++s) {
        fft::transform(dims, fft::Direction::forward, u.data(), u.data());
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double a = u[i].real(), b = u[i].imag();
            const double cr = lin_raw[i].real(), ci = lin_raw[i].imag();
            u[i] = cplx(a * cr - b * ci, a * ci + b * cr);
        }
        fft::transform(dims, fft::Direction::backward, u.data(), u.data());
        const bool sample = s % control.sample_every == 0;
        if (sample || s == steps) {
            if (!nonlinear_rotation(u, physics, pw, 0.5 * dt)) fail(s);
            c = u;
            forward_in_place(g, c);
            if (sample) emit(s, c, u);
            if (s < steps && !nonlinear_rotation(u, physics, pw, 0.5 * dt)) fail(s);
        } else if (!nonlinear_rotation(u, physics, pw, dt)) {
            fail(s);
        }
    }
    if (steps == 0) c = initial.coeffs();
    return SpectralField(g, std::move(c), t0 + steps * dt);
}

double mass(const SpectralField& field) {
    const double l2 = l2_norm_spectral(field);
    return l2 * l2;
}

double energy(const SpectralField& field, const PhysicsParams& physics) {
    const Grid& g = field.grid();
    const auto& c = field.coeffs();
    double kinetic = 0.0;
    for_each_mode(g, [&](std::size_t idx, int i1, int i2, int j) {
        const double n = g.n(j);
        kinetic += (xi_squared(g, i1, i2) + n * n) * std::norm(c[idx]);
    });
    kinetic *= 0.5 * g.volume();
    if (physics.lambda == 0.0) return kinetic;
    const double p = physics.alpha + 2.0;
    const double lp = lebesgue_norm(field, p);
    return kinetic + physics.lambda / p * std::pow(lp, p);
}

SpectralField soliton_profile(const Grid& grid, double B) {
    if (grid.d != 1) throw InvalidInput("soliton profile requires d = 1");
    if (!(B > 0.0)) throw InvalidInput("soliton scale B must be positive");
    return SpectralField::from_profile(grid, [B](std::span<const double> x, double) {
        return cplx(std::sqrt(2.0) * B / std::cosh(B * x[0]));
    });
}

SpectralField plane_wave(const Grid& grid, std::array<int, 2> k, int n, cplx amplitude) {
    const double s = 2.0 * std::numbers::pi / grid.L;
    return SpectralField::from_profile(grid, [&](std::span<const double> x, double y) {
        double phase = n * y;
        for (int a = 0; a < grid.d; ++a) phase += s * k[a] * x[a];
        return amplitude * std::polar(1.0, phase);
    });
}

SpectralField gaussian(const Grid& grid, double amplitude, double width, double y_modulation) {
    if (!(width > 0.0)) throw InvalidInput("Gaussian width must be positive");
    return SpectralField::from_profile(grid, [&](std::span<const double> x, double y) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return cplx(amplitude * std::exp(-r2 / (2.0 * width * width)) * (1.0 + y_modulation * std::cos(y)));
    });
}

}  // namespace nlslab
