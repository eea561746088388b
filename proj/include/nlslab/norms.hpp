#pragma once

// Norm engine: Lebesgue, Sobolev and mixed norms of fields on R^d x T,
// the difference-quotient form of the homogeneous H^s_y norm, and the
// cube-localized mass used by the decay diagnostics.

#include <limits>
#include <span>
#include <vector>

#include "nlslab/spectral_field.hpp"

namespace nlslab {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// (sum |u|^q w)^{1/q}; q = infinity gives the max modulus. Requires q >= 1.
double lebesgue_norm(const SpectralField& field, double q);
double lebesgue_norm(const Grid& grid, std::span<const cplx> physical, double q);

/// ||u||_{L^2} from the coefficients (Parseval side).
double l2_norm_spectral(const SpectralField& field);

/// (sum (1 + |xi|^2 + n^2) |c|^2 V)^{1/2}.
double sobolev_h1(const SpectralField& field);

/// ||<xi>^s <n>^gamma c||, the H^s_x H^gamma_y norm.
double hs_x_hgamma_y(const SpectralField& field, double s, double gamma);

/// L^r_x H^gamma_y: h(x)^2 = 2 pi sum_n <n>^{2 gamma} |a_n(x)|^2 with a_n(x) the
/// y-Fourier coefficients at x, then (sum h^r cell)^{1/r}. r may be infinity.
double mixed_norm(const SpectralField& field, double r, double gamma);

/// L^r_x L^2_y norm of |grad_x u|.
double mixed_norm_grad_x(const SpectralField& field, double r);

/// Homogeneous H^s_y norm (sum |n|^{2s} |c|^2 V)^{1/2}.
double homogeneous_hs_y(const SpectralField& field, double s);

struct DifferenceQuotientNorm {
    double multiplier = 0.0;  // Fourier-multiplier form
    double quadrature = 0.0;  // double integral of |u(y+h)-u(y)|^2/|h|^{1+2s}, over c(s)
};

struct QuadratureOptions {
    double h_max = 50.0;
    int samples = 10000;
};

/// Both forms of the homogeneous H^s_y norm, 0 < s < 1. The y-integral is
/// evaluated exactly through Parseval; the h-integral by the midpoint rule on
/// (0, h_max] plus the averaged tail beyond h_max.
DifferenceQuotientNorm difference_quotient_hs_y(const SpectralField& field, double s,
                                                QuadratureOptions options = {});

/// c(s) = int_R |e^{ir} - 1|^2 / |r|^{1+2s} dr by adaptive quadrature
/// (relative tolerance 1e-8), cached per s.
double difference_quotient_constant(double s);

/// u |u|^alpha formed on a 3/2-padded grid and truncated back.
SpectralField nonlinear_term(const SpectralField& field, double alpha);

/// ||u|u|^alpha||_{H^s_y} / (||u||_{H^s_y} ||u||_inf^alpha), homogeneous norms.
double fractional_leibniz_ratio(const SpectralField& field, double s, double alpha);

/// rho(x) = sum_y |u|^2 dy on the x-grid.
std::vector<double> mass_density(const SpectralField& field);

/// Number of cells spanned by a cube side; rejects r_side below one cell.
int cube_cells(const Grid& grid, double r_side);

/// max over grid-aligned cubes Q(x0, r_side) inside the box of sum rho cell.
double cube_sup_mass(const SpectralField& field, double r_side);
double cube_sup_mass(const Grid& grid, std::span<const double> rho, double r_side);

/// Largest fraction of the total mass held by a cube window that reaches
/// within `margin` of the box edge. Feeds the boundary guard.
double edge_mass_fraction(const Grid& grid, std::span<const double> rho, double r_side,
                          double margin);

struct GnCheck {
    double lhs = 0.0;          // ||u||_{L^{2 + 4/(d+1)}}
    double cube_factor = 0.0;  // (sup_Q int_Q |u|^2)^{1/2}, unit cubes
    double h1 = 0.0;

    /// lhs / (cube_factor^{2/(d+3)} h1^{(d+1)/(d+3)}); 0 for the zero field.
    double ratio(int d) const;
};

GnCheck localized_gn_check(const SpectralField& field);

/// Spectral derivatives.
SpectralField derivative_x(const SpectralField& field, int axis);
SpectralField derivative_y(const SpectralField& field);

}  // namespace nlslab
