#pragma once

// Interaction Morawetz diagnostics with weight phi(x) = <x> = sqrt(1 + |x|^2).
// Every quantity is a pairing of y-integrated densities through a linear
// (zero-padded) convolution over the x-grid:
//     (K * f)(x_i) = sum_j K(x_i - x_j) f(x_j) cell.

#include <memory>
#include <span>
#include <vector>

#include "nlslab/densities.hpp"
#include "nlslab/nls_integrator.hpp"

namespace nlslab {

/// Samples of grad phi, D^2 phi and Delta phi at the true displacements
/// m dx, m in [-Nx, Nx) per axis, with their padded transforms cached.
class MorawetzKernels {
public:
    enum Kernel : int { grad_1, grad_2, hess_11, hess_12, hess_22, laplacian, count };

    explicit MorawetzKernels(const Grid& grid);

    const Grid& grid() const { return grid_; }

    /// Raw kernel sample at displacement index m (per axis, in [-Nx, Nx)).
    double sample(Kernel k, int m1, int m2 = 0) const;

    /// Forward transform of a density zero-padded to 2Nx per axis.
    std::vector<cplx> spectrum(std::span<const double> f) const;
    /// (K * f) on the native x-grid from a spectrum produced by `spectrum`.
    std::vector<double> convolve(Kernel k, const std::vector<cplx>& f_hat) const;
    std::vector<double> convolve(Kernel k, std::span<const double> f) const;

    /// Hessian component (a, b) as a Kernel id.
    Kernel hess(int a, int b) const;

private:
    Grid grid_;
    int padded_ = 0;
    std::vector<int> dims_;
    std::vector<std::vector<double>> samples_;
    std::vector<std::vector<cplx>> spectra_;
};

/// J = -2 sum P . (grad phi * rho) cell + 2 sum rho (grad phi * P) cell.
double morawetz_J(const DensitySet& ds, const MorawetzKernels& kernels);
double morawetz_J(const SpectralField& field, const MorawetzKernels& kernels);

struct MorawetzTerms {
    double kinetic = 0.0;          // 4 sum K : (D^2 phi * rho)
    double kinetic_partner = 0.0;  // 4 sum rho (D^2 phi :* K)
    double momentum = 0.0;         // -8 sum P . (D^2 phi * P)
    double gradient = 0.0;         // 2 sum grad rho . (D^2 phi * grad rho)
    double interaction = 0.0;      // sum nu (Delta phi * rho)
    double interaction_partner = 0.0;  // sum rho (Delta phi * nu)
    double lhs = 0.0;
    double rhs = 0.0;

    /// Positivity certificate: the four quadratic terms.
    double S() const { return kinetic + kinetic_partner + momentum + gradient; }
};

/// lhs = S + lambda (2 alpha/(alpha+2)) (interaction + interaction_partner),
/// rhs = lambda (4 alpha/(alpha+2)) interaction.
MorawetzTerms morawetz_terms(const DensitySet& ds, const PhysicsParams& physics,
                             const MorawetzKernels& kernels);
MorawetzTerms morawetz_terms(const SpectralField& field, const PhysicsParams& physics,
                             const MorawetzKernels& kernels);

double positivity_certificate(const SpectralField& field, const MorawetzKernels& kernels);

/// lhs - rhs >= -tol * max(|lhs|, |rhs|, mass^2).
bool morawetz_inequality_holds(const MorawetzTerms& terms, double mass, double tol = 1e-8);

struct FluxCheck {
    double time_derivative = 0.0;  // central difference of int psi |u|^2
    double flux = 0.0;             // -2 Im int conj(u) grad psi . grad_x u
    double residual = 0.0;
};

/// Local mass identity d/dt int psi |u|^2 = -2 Im int conj(u) grad psi . grad u,
/// psi sampled on the x-grid (y-independent).
FluxCheck local_mass_flux_residual(const SpectralField& u_minus, const SpectralField& u_mid,
                                   const SpectralField& u_plus, std::span<const double> psi,
                                   double delta);

struct DJdtCheck {
    double dJdt = 0.0;
    double lhs = 0.0;
    double residual = 0.0;
};

/// |(J(t+delta) - J(t-delta)) / (2 delta) - lhs(t)|.
DJdtCheck finite_difference_dJdt_check(const SpectralField& u_minus, const SpectralField& u_mid,
                                       const SpectralField& u_plus, const PhysicsParams& physics,
                                       const MorawetzKernels& kernels, double delta);

/// Trapezoid accumulation of cube_sup_mass(u(t), r_side)^{(alpha+4)/2} dt.
class CubeSupAccumulator {
public:
    CubeSupAccumulator(double r_side, double alpha);

    /// Adds a sample; times must increase.
    void push(double t, double cube_sup);
    void push(double t, const SpectralField& field);

    double r_side() const { return r_side_; }
    double value() const { return total_; }
    double last_increment() const { return last_increment_; }
    double peak_increment() const { return peak_increment_; }
    double last_integrand() const { return last_f_; }

private:
    double r_side_;
    double power_;
    bool started_ = false;
    double last_t_ = 0.0;
    double last_f_ = 0.0;
    double total_ = 0.0;
    double last_increment_ = 0.0;
    double peak_increment_ = 0.0;
};

struct MorawetzSample {
    double t = 0.0;
    double J = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double S = 0.0;
    double cube_sup = 0.0;
    double cube_sup_integral = 0.0;
};

}  // namespace nlslab
