#pragma once

#include <cstddef>
#include <numbers>

namespace nlslab {

/// Periodic box [-L/2, L/2)^d x [0, 2pi) sampled with Nx points per x-axis
/// and Ny points in y. Storage is row-major with y innermost:
/// index = ((i1 * Nx + i2) * Ny + iy) for d = 2, (i1 * Ny + iy) for d = 1.
struct Grid {
    int d = 1;
    double L = 0.0;
    int nx = 0;
    int ny = 0;

    /// Validates d in {1, 2}, L > 0 and Nx, Ny powers of two >= 4.
    static Grid make(int d, double L, int nx, int ny);

    std::size_t x_points() const { return d == 1 ? std::size_t(nx) : std::size_t(nx) * nx; }
    std::size_t size() const { return x_points() * std::size_t(ny); }

    double dx() const { return L / nx; }
    double dy() const { return 2.0 * std::numbers::pi / ny; }
    /// Volume of one x-cell, (L/Nx)^d.
    double cell_x() const { return d == 1 ? dx() : dx() * dx(); }
    /// Rectangle-rule weight of one (x, y) grid point.
    double weight() const { return cell_x() * dy(); }
    /// |[-L/2, L/2)^d x T|.
    double volume() const { return (d == 1 ? L : L * L) * 2.0 * std::numbers::pi; }

    double x(int j) const { return -0.5 * L + j * dx(); }

    /// Signed mode number of wrapped index j along an axis of n points.
    static int wrapped_mode(int j, int n) { return j < n / 2 ? j : j - n; }
    /// x-frequency 2 pi k / L of wrapped index j.
    double xi(int j) const { return 2.0 * std::numbers::pi * wrapped_mode(j, nx) / L; }
    /// Symbol of d/dx: zero on the unpaired Nyquist mode so real fields
    /// keep real derivatives.
    double dxi(int j) const { return j == nx / 2 ? 0.0 : xi(j); }
    int n(int j) const { return wrapped_mode(j, ny); }

    bool operator==(const Grid&) const = default;
};

}  // namespace nlslab
