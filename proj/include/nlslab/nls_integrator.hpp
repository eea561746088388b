#pragma once

// Strang split-step Fourier integrator for
//     i u_t - Delta_{x,y} u + lambda u |u|^alpha = 0.
// Linear flow: coefficients gain exp(+i t (|xi|^2 + n^2)) (see apply_free_flow).
// Nonlinear flow: u_t = i lambda u |u|^alpha, solved exactly by the phase
// rotation u exp(i lambda t |u|^alpha) because |u| is invariant.

#include <array>
#include <functional>
#include <vector>

#include "nlslab/spectral_field.hpp"

namespace nlslab {

struct PhysicsParams {
    double alpha = 1.0;
    double lambda = 1.0;  // +1 defocusing, -1 focusing, 0 linear test hook

    static PhysicsParams make(double alpha, double lambda);
};

struct StepControl {
    double dt = 1e-3;
    double t_end = 1.0;
    int sample_every = 1;

    static StepControl make(double dt, double t_end, int sample_every);
    /// Number of steps, round(t_end / dt).
    long long steps() const;
};

/// Edge-mass monitor evaluated at every sample.
struct BoundaryGuard {
    bool enabled = true;
    double r_side = 1.0;
    double threshold = 1e-3;
    double margin_fraction = 1.0 / 8.0;
};

struct Sample {
    long long step = 0;
    double t = 0.0;
    const SpectralField& field;
    bool boundary_warning = false;  // sticky once the guard fires
};

using Sink = std::function<void(const Sample&)>;

/// One symmetric step: half nonlinear, full linear, half nonlinear. Negative
/// dt steps backwards. Throws BlowUp on non-finite values.
SpectralField strang_step(const SpectralField& field, const PhysicsParams& physics, double dt);

/// Runs control.steps() Strang steps, handing every sink an immutable
/// snapshot at step 0 and at every multiple of sample_every. Consecutive
/// nonlinear half-steps between samples are merged (exact, since the
/// nonlinear flow is a pointwise phase rotation).
SpectralField evolve(const SpectralField& initial, const PhysicsParams& physics,
                     const StepControl& control, const std::vector<Sink>& sinks,
                     const BoundaryGuard& guard = {});

/// dt * max(|xi|^2 + n^2) / (2 pi); values >= 1 mean some mode rotates a full
/// turn per step (the substep stays exact, but the run is under-resolved in time).
double resolvability_ratio(const Grid& grid, double dt);

/// ||u||_{L^2}^2.
double mass(const SpectralField& field);
/// 1/2 ||grad u||^2 + lambda/(alpha+2) ||u||_{alpha+2}^{alpha+2}.
double energy(const SpectralField& field, const PhysicsParams& physics);

/// sqrt(2) B sech(B x), y-independent; d = 1. Its evolution under alpha = 2,
/// lambda = -1 is u(t) = sqrt(2) B sech(B x) exp(-i B^2 t).
SpectralField soliton_profile(const Grid& grid, double B);

/// A exp(i (xi_k . x + n y)) with xi_k = 2 pi k / L.
SpectralField plane_wave(const Grid& grid, std::array<int, 2> k, int n, cplx amplitude);

/// A exp(-|x|^2 / (2 w^2)) (1 + m cos y).
SpectralField gaussian(const Grid& grid, double amplitude, double width, double y_modulation);

}  // namespace nlslab
