#include "nlslab/morawetz.hpp"

#include <cmath>
#include <algorithm>

#include "nlslab/error.hpp"
#include "nlslab/fft.hpp"
#include "nlslab/norms.hpp"

namespace nlslab {

namespace {

double pairing(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace

MorawetzKernels::MorawetzKernels(const Grid& grid) : grid_(grid), padded_(2 * grid.nx) {
    const int d = grid.d;
    const int M = padded_;
    dims_ = d == 1 ? std::vector<int>{M} : std::vector<int>{M, M};
    const std::size_t total = d == 1 ? std::size_t(M) : std::size_t(M) * M;
    samples_.assign(count, std::vector<double>(total, 0.0));

    const double dx = grid.dx();
    auto disp = [&](int idx) { return (idx < grid.nx ? idx : idx - M) * dx; };
    for (std::size_t p = 0; p < total; ++p) {
        const int a = d == 1 ? int(p) : int(p / M);
        const int b = d == 1 ? 0 : int(p % M);
        const double x1 = disp(a);
        const double x2 = d == 2 ? disp(b) : 0.0;
        const double r2 = x1 * x1 + x2 * x2;
        const double br = std::sqrt(1.0 + r2);
        const double br3 = br * br * br;
        samples_[grad_1][p] = x1 / br;
        samples_[grad_2][p] = x2 / br;
        samples_[hess_11][p] = (br * br - x1 * x1) / br3;
        samples_[hess_12][p] = -x1 * x2 / br3;
        samples_[hess_22][p] = (br * br - x2 * x2) / br3;
        samples_[laplacian][p] = (d + (d - 1) * r2) / br3;
    }
    spectra_.resize(count);
    for (int k = 0; k < count; ++k) {
        if (d == 1 && (k == grad_2 || k == hess_12 || k == hess_22)) continue;
        std::vector<cplx> s(samples_[k].begin(), samples_[k].end());
        fft::transform(dims_, fft::Direction::forward, s.data(), s.data());
        spectra_[k] = std::move(s);
    }
}

double MorawetzKernels::sample(Kernel k, int m1, int m2) const {
    const int M = padded_;
    auto wrap = [M](int m) { return m < 0 ? m + M : m; };
    const std::size_t p = grid_.d == 1 ? std::size_t(wrap(m1)) : std::size_t(wrap(m1)) * M + wrap(m2);
    return samples_[k][p];
}

MorawetzKernels::Kernel MorawetzKernels::hess(int a, int b) const {
    if (a == 0 && b == 0) return hess_11;
    if (a == 1 && b == 1) return hess_22;
    return hess_12;
}

std::vector<cplx> MorawetzKernels::spectrum(std::span<const double> f) const {
    const int n = grid_.nx;
    const int M = padded_;
    if (f.size() != grid_.x_points()) throw InvalidInput("density does not match the x-grid");
    std::vector<cplx> out(grid_.d == 1 ? std::size_t(M) : std::size_t(M) * M);
    if (grid_.d == 1) {
        for (int i = 0; i < n; ++i) out[i] = f[i];
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) out[std::size_t(a) * M + b] = f[std::size_t(a) * n + b];
    }
    fft::transform(dims_, fft::Direction::forward, out.data(), out.data());
    return out;
}

std::vector<double> MorawetzKernels::convolve(Kernel k, const std::vector<cplx>& f_hat) const {
    if (spectra_[k].empty()) throw InvalidInput("kernel component not defined for d = 1");
    const auto& kh = spectra_[k];
    std::vector<cplx> prod(f_hat.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = kh[i] * f_hat[i];
    fft::transform(dims_, fft::Direction::backward, prod.data(), prod.data());
    const double scale = grid_.cell_x() / double(prod.size());
    const int n = grid_.nx;
    const int M = padded_;
    std::vector<double> out(grid_.x_points());
    if (grid_.d == 1) {
        for (int i = 0; i < n; ++i) out[i] = prod[i].real() * scale;
    } else {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) out[std::size_t(a) * n + b] = prod[std::size_t(a) * M + b].real() * scale;
    }
    return out;
}

std::vector<double> MorawetzKernels::convolve(Kernel k, std::span<const double> f) const {
    return convolve(k, spectrum(f));
}

double morawetz_J(const DensitySet& ds, const MorawetzKernels& kernels) {
    const Grid& g = kernels.grid();
    const auto rho_hat = kernels.spectrum(ds.rho);
    double first = 0.0, second = 0.0;
    for (int a = 0; a < g.d; ++a) {
        const auto kernel = a == 0 ? MorawetzKernels::grad_1 : MorawetzKernels::grad_2;
        first += pairing(ds.P[a], kernels.convolve(kernel, rho_hat));
        second += pairing(ds.rho, kernels.convolve(kernel, ds.P[a]));
    }
    return (-2.0 * first + 2.0 * second) * g.cell_x();
}

double morawetz_J(const SpectralField& field, const MorawetzKernels& kernels) {
    return morawetz_J(densities(field, 1.0), kernels);
}

MorawetzTerms morawetz_terms(const DensitySet& ds, const PhysicsParams& physics,
                             const MorawetzKernels& kernels) {
    const Grid& g = kernels.grid();
    const int d = g.d;
    const double cell = g.cell_x();
    MorawetzTerms t;

    const auto rho_hat = kernels.spectrum(ds.rho);
    std::vector<std::vector<cplx>> p_hat, gr_hat;
    for (int a = 0; a < d; ++a) {
        p_hat.push_back(kernels.spectrum(ds.P[a]));
        gr_hat.push_back(kernels.spectrum(ds.grad_rho[a]));
    }
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const auto h = kernels.hess(a, b);
            const auto& Kab = ds.K[DensitySet::k_index(d, a, b)];
            t.kinetic += pairing(Kab, kernels.convolve(h, rho_hat));
            t.kinetic_partner += pairing(ds.rho, kernels.convolve(h, Kab));
            t.momentum += pairing(ds.P[a], kernels.convolve(h, p_hat[b]));
            t.gradient += pairing(ds.grad_rho[a], kernels.convolve(h, gr_hat[b]));
        }
    }
    t.kinetic *= 4.0 * cell;
    t.kinetic_partner *= 4.0 * cell;
    t.momentum *= -8.0 * cell;
    t.gradient *= 2.0 * cell;

    t.interaction = pairing(ds.nu, kernels.convolve(MorawetzKernels::laplacian, rho_hat)) * cell;
    t.interaction_partner = pairing(ds.rho, kernels.convolve(MorawetzKernels::laplacian, ds.nu)) * cell;

    const double a = physics.alpha;
    t.lhs = t.S() + physics.lambda * (2.0 * a / (a + 2.0)) * (t.interaction + t.interaction_partner);
    t.rhs = physics.lambda * (4.0 * a / (a + 2.0)) * t.interaction;
    return t;
}

MorawetzTerms morawetz_terms(const SpectralField& field, const PhysicsParams& physics,
                             const MorawetzKernels& kernels) {
    return morawetz_terms(densities(field, physics.alpha), physics, kernels);
}

double positivity_certificate(const SpectralField& field, const MorawetzKernels& kernels) {
    return morawetz_terms(densities(field, 1.0), PhysicsParams{1.0, 0.0}, kernels).S();
}

bool morawetz_inequality_holds(const MorawetzTerms& terms, double mass, double tol) {
    const double scale = std::max({std::abs(terms.lhs), std::abs(terms.rhs), mass * mass});
    return terms.lhs - terms.rhs >= -tol * scale;
}

FluxCheck local_mass_flux_residual(const SpectralField& u_minus, const SpectralField& u_mid,
                                   const SpectralField& u_plus, std::span<const double> psi,
                                   double delta) {
    const Grid& g = u_mid.grid();
    if (psi.size() != g.x_points()) throw InvalidInput("psi does not match the x-grid");
    if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
    auto weighted_mass = [&](const SpectralField& f) {
        return pairing(psi, mass_density(f)) * g.cell_x();
    };
    FluxCheck out;
    out.time_derivative = (weighted_mass(u_plus) - weighted_mass(u_minus)) / (2.0 * delta);

    // grad psi spectrally on the x-grid (psi lifted to a y-independent field).
    std::vector<cplx> lifted(g.size());
    for (std::size_t x = 0; x < g.x_points(); ++x)
        for (int j = 0; j < g.ny; ++j) lifted[x * g.ny + j] = psi[x];
    const auto psi_field = SpectralField::from_physical(g, lifted);
    const auto ds = densities(u_mid, 1.0);
    double acc = 0.0;
    for (int a = 0; a < g.d; ++a) {
        const auto dpsi = derivative_x(psi_field, a).to_physical();
        for (std::size_t x = 0; x < g.x_points(); ++x) acc += dpsi[x * g.ny].real() * ds.P[a][x];
    }
    out.flux = -2.0 * acc * g.cell_x();
    out.residual = std::abs(out.time_derivative - out.flux);
    return out;
}

DJdtCheck finite_difference_dJdt_check(const SpectralField& u_minus, const SpectralField& u_mid,
                                       const SpectralField& u_plus, const PhysicsParams& physics,
                                       const MorawetzKernels& kernels, double delta) {
    if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
    DJdtCheck out;
    out.dJdt = (morawetz_J(u_plus, kernels) - morawetz_J(u_minus, kernels)) / (2.0 * delta);
    out.lhs = morawetz_terms(u_mid, physics, kernels).lhs;
    out.residual = std::abs(out.dJdt - out.lhs);
    return out;
}

CubeSupAccumulator::CubeSupAccumulator(double r_side, double alpha)
    : r_side_(r_side), power_(0.5 * (alpha + 4.0)) {
    if (!(r_side > 0.0)) throw InvalidInput("cube side must be positive");
    if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
}

void CubeSupAccumulator::push(double t, double cube_sup) {
    const double f = std::pow(cube_sup, power_);
    if (started_) {
        if (!(t > last_t_)) throw InvalidInput("accumulator samples must have increasing times");
        last_increment_ = 0.5 * (f + last_f_) * (t - last_t_);
        total_ += last_increment_;
        peak_increment_ = std::max(peak_increment_, last_increment_);
    }
    started_ = true;
    last_t_ = t;
    last_f_ = f;
}

void CubeSupAccumulator::push(double t, const SpectralField& field) {
    push(t, cube_sup_mass(field, r_side_));
}

}  // namespace nlslab
