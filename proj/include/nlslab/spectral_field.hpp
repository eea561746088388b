#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab {

using cplx = std::complex<double>;

/// u(t, x, y) on a Grid, stored as Fourier-series coefficients
///   c_{k,n} = (1/N) sum_j u(x_j, y_j) exp(-i (xi_k . x_j + n y_j))
/// so a plane wave A exp(i(xi_k x + n y)) has the single coefficient A and
/// sum |u|^2 w = sum |c|^2 * volume (Parseval). Coefficients use the FFT
/// wrapped order in the Grid storage layout. Values are immutable.
class SpectralField {
public:
    using Sampler = std::function<cplx(std::span<const double> x, double y)>;

    SpectralField(Grid grid, std::vector<cplx> coeffs, double time_tag = 0.0);

    static SpectralField zeros(const Grid& grid, double time_tag = 0.0);
    /// Samples `sampler` on the grid; rejects non-finite samples.
    static SpectralField from_profile(const Grid& grid, const Sampler& sampler);
    static SpectralField from_physical(const Grid& grid, std::span<const cplx> samples,
                                       double time_tag = 0.0);

    const Grid& grid() const { return grid_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    double time() const { return time_; }

    std::vector<cplx> to_physical() const;
    SpectralField with_time(double t) const { return SpectralField(grid_, coeffs_, t); }

private:
    Grid grid_;
    std::vector<cplx> coeffs_;
    double time_ = 0.0;
};

/// Physical samples -> coefficients in place (normalization and the
/// x_0 = -L/2 phase included).
void forward_in_place(const Grid& grid, std::vector<cplx>& data);
/// Coefficients -> physical samples in place.
void backward_in_place(const Grid& grid, std::vector<cplx>& data);

/// Multiplies every coefficient by exp(+i t (|xi|^2 + n^2)): the propagator
/// e^{-it Delta_{x,y}} of the linear flow i u_t - Delta u = 0.
void apply_free_flow(const Grid& grid, std::vector<cplx>& coeffs, double t);

/// e^{-it Delta} applied to the field; time_tag advances by t.
SpectralField free_evolve(const SpectralField& field, double t);

/// Sum of two fields on the same grid, a*u + b*v (time tag of u).
SpectralField combine(const SpectralField& u, double a, const SpectralField& v, double b);

/// Iterates over every coefficient index with its (k-index per axis, n-index).
template <typename F>
void for_each_mode(const Grid& grid, F&& f) {
    std::size_t idx = 0;
    if (grid.d == 1) {
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) f(idx++, i, 0, j);
    } else {
        for (int i1 = 0; i1 < grid.nx; ++i1)
            for (int i2 = 0; i2 < grid.nx; ++i2)
                for (int j = 0; j < grid.ny; ++j) f(idx++, i1, i2, j);
    }
}

/// |xi|^2 of the x-mode with per-axis indices (i1, i2).
inline double xi_squared(const Grid& g, int i1, int i2) {
    const double a = g.xi(i1);
    if (g.d == 1) return a * a;
    const double b = g.xi(i2);
    return a * a + b * b;
}

}  // namespace nlslab
