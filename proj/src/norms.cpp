#include "nlslab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nlslab/error.hpp"
#include "nlslab/fft.hpp"

namespace nlslab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double sum_weighted_coeffs(const SpectralField& field, double s, double gamma,
                           bool homogeneous_y) {
    const Grid& g = field.grid();
    const auto& c = field.coeffs();
    double acc = 0.0;
    for_each_mode(g, [&](std::size_t idx, int i1, int i2, int j) {
        const double n2 = double(g.n(j)) * g.n(j);
        double m;
        if (homogeneous_y) {
            m = n2 == 0.0 ? 0.0 : std::pow(n2, gamma);
        } else {
            m = 1.0;
            if (s != 0.0) m *= std::pow(1.0 + xi_squared(g, i1, i2), s);
            if (gamma != 0.0) m *= std::pow(1.0 + n2, gamma);
        }
        acc += m * std::norm(c[idx]);
    });
    return acc * g.volume();
}

double lp_of_profile(const Grid& g, const std::vector<double>& h, double r) {
    if (std::isinf(r)) return h.empty() ? 0.0 : *std::max_element(h.begin(), h.end());
    double acc = 0.0;
    for (double v : h) acc += std::pow(v, r);
    return std::pow(acc * g.cell_x(), 1.0 / r);
}

// Fourier coefficients in y at every x point: a_n(x), layout as the grid.
std::vector<cplx> y_coefficients(const SpectralField& field) {
    const Grid& g = field.grid();
    std::vector<cplx> a = field.to_physical();
    fft::transform_lines(g.ny, int(g.x_points()), fft::Direction::forward, a.data(), a.data());
    const double scale = 1.0 / g.ny;
    for (auto& v : a) v *= scale;
    return a;
}

Grid padded_grid(const Grid& g) { return Grid{g.d, g.L, 3 * g.nx / 2, 3 * g.ny / 2}; }

int pad_index(int j, int n, int m) {
    const int k = Grid::wrapped_mode(j, n);
    return k >= 0 ? k : k + m;
}

}  // namespace

double lebesgue_norm(const Grid& grid, std::span<const cplx> physical, double q) {
    if (!(q >= 1.0)) throw InvalidInput("Lebesgue exponent must satisfy q >= 1");
    if (std::isinf(q)) {
        double m = 0.0;
        for (const auto& v : physical) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    if (q == 2.0) {
        for (const auto& v : physical) acc += std::norm(v);
    } else {
        for (const auto& v : physical) acc += std::pow(std::abs(v), q);
    }
    return std::pow(acc * grid.weight(), 1.0 / q);
}

double lebesgue_norm(const SpectralField& field, double q) {
    const auto u = field.to_physical();
    return lebesgue_norm(field.grid(), u, q);
}

double l2_norm_spectral(const SpectralField& field) {
    return std::sqrt(sum_weighted_coeffs(field, 0.0, 0.0, false));
}

double sobolev_h1(const SpectralField& field) {
    const Grid& g = field.grid();
    const auto& c = field.coeffs();
    double acc = 0.0;
    for_each_mode(g, [&](std::size_t idx, int i1, int i2, int j) {
        const double n = g.n(j);
        acc += (1.0 + xi_squared(g, i1, i2) + n * n) * std::norm(c[idx]);
    });
    return std::sqrt(acc * g.volume());
}

double hs_x_hgamma_y(const SpectralField& field, double s, double gamma) {
    return std::sqrt(sum_weighted_coeffs(field, s, gamma, false));
}

double homogeneous_hs_y(const SpectralField& field, double s) {
    return std::sqrt(sum_weighted_coeffs(field, 0.0, s, true));
}

double mixed_norm(const SpectralField& field, double r, double gamma) {
    if (!(r >= 1.0)) throw InvalidInput("mixed norm exponent must satisfy r >= 1");
    const Grid& g = field.grid();
    const auto a = y_coefficients(field);
    std::vector<double> weight(g.ny);
    for (int j = 0; j < g.ny; ++j) weight[j] = std::pow(1.0 + double(g.n(j)) * g.n(j), gamma);
    std::vector<double> h(g.x_points());
    for (std::size_t x = 0; x < h.size(); ++x) {
        double acc = 0.0;
        for (int j = 0; j < g.ny; ++j) acc += weight[j] * std::norm(a[x * g.ny + j]);
        h[x] = std::sqrt(two_pi * acc);
    }
    return lp_of_profile(g, h, r);
}

double mixed_norm_grad_x(const SpectralField& field, double r) {
    if (!(r >= 1.0)) throw InvalidInput("mixed norm exponent must satisfy r >= 1");
    const Grid& g = field.grid();
    std::vector<double> h2(g.x_points(), 0.0);
    for (int axis = 0; axis < g.d; ++axis) {
        const auto du = derivative_x(field, axis).to_physical();
        for (std::size_t x = 0; x < h2.size(); ++x)
            for (int j = 0; j < g.ny; ++j) h2[x] += std::norm(du[x * g.ny + j]) * g.dy();
    }
    for (auto& v : h2) v = std::sqrt(v);
    return lp_of_profile(g, h2, r);
}

double difference_quotient_constant(double s) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("difference-quotient order must satisfy 0 < s < 1");
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(s); it != cache.end()) return it->second;
    }
    using namespace boost::math::quadrature;
    const double beta = 1.0 + 2.0 * s;
    constexpr double tol = 1e-10;
    // int_0^inf (1 - cos r) r^{-beta} dr split at r = 1; c(s) = 4 x that.
    tanh_sinh<double> ts;
    const double near = ts.integrate(
        [beta](double r) {
            if (r < 1e-6) return 0.5 * std::pow(r, 2.0 - beta);  // sin^2 underflows
            const double h = std::sin(0.5 * r);
            return 2.0 * h * h * std::pow(r, -beta);
        },
        0.0, 1.0, tol);
    const double power_part = 1.0 / (2.0 * s);  // int_1^inf r^{-beta}
    auto osc = [beta](double r) { return std::cos(r) * std::pow(r, -beta); };
    double cos_part = gauss_kronrod<double, 61>::integrate(osc, 1.0, two_pi, 15, tol);
    constexpr int periods = 400;
    for (int m = 1; m < periods; ++m)
        cos_part += gauss_kronrod<double, 61>::integrate(osc, two_pi * m, two_pi * (m + 1), 15, tol);
    // Tail beyond R = 2 pi M, two integrations by parts: beta R^{-beta-1}.
    const double R = two_pi * periods;
    cos_part += beta * std::pow(R, -beta - 1.0);
    const double value = 4.0 * (near + power_part - cos_part);
    std::lock_guard lock(mutex);
    cache.emplace(s, value);
    return value;
}

DifferenceQuotientNorm difference_quotient_hs_y(const SpectralField& field, double s,
                                                QuadratureOptions options) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("difference-quotient order must satisfy 0 < s < 1");
    if (!(options.h_max > 0.0) || options.samples < 1) throw InvalidInput("invalid quadrature options");
    const Grid& g = field.grid();
    const auto& c = field.coeffs();

    // W_n = int_x int_y |a_n(x)|^2 mass carried by y-mode n.
    std::vector<double> w(g.ny, 0.0);
    for_each_mode(g, [&](std::size_t idx, int, int, int j) { w[j] += std::norm(c[idx]); });
    for (auto& v : w) v *= g.volume();

    DifferenceQuotientNorm out;
    double mult = 0.0;
    for (int j = 0; j < g.ny; ++j)
        if (g.n(j) != 0) mult += std::pow(std::abs(double(g.n(j))), 2.0 * s) * w[j];
    out.multiplier = std::sqrt(mult);

    const double beta = 1.0 + 2.0 * s;
    const double dh = options.h_max / options.samples;
    const double tail = 2.0 * std::pow(options.h_max, -2.0 * s) / (2.0 * s);
    double total = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const int n = g.n(j);
        if (n == 0 || w[j] == 0.0) continue;
        // First cell from the small-h expansion 4 sin^2(nh/2) = n^2 h^2 - n^4 h^4/12 + ...,
        // which absorbs the integrable h^{1-2s} endpoint behaviour.
        const double n2 = double(n) * n;
        double integral = n2 * std::pow(dh, 3.0 - beta) / (3.0 - beta) -
                          n2 * n2 * std::pow(dh, 5.0 - beta) / (12.0 * (5.0 - beta));
        for (int m = 1; m < options.samples; ++m) {
            const double h = (m + 0.5) * dh;
            const double half = std::sin(0.5 * n * h);
            integral += 4.0 * half * half * std::pow(h, -beta) * dh;
        }
        // |h| symmetric: twice the one-sided integral.
        total += w[j] * 2.0 * (integral + tail);
    }
    out.quadrature = std::sqrt(total / difference_quotient_constant(s));
    return out;
}

SpectralField nonlinear_term(const SpectralField& field, double alpha) {
    const Grid& g = field.grid();
    const Grid p = padded_grid(g);
    std::vector<cplx> big(p.size());
    const auto& c = field.coeffs();
    for_each_mode(g, [&](std::size_t idx, int i1, int i2, int j) {
        const int pj = pad_index(j, g.ny, p.ny);
        const int p1 = pad_index(i1, g.nx, p.nx);
        std::size_t pidx;
        if (g.d == 1) {
            pidx = std::size_t(p1) * p.ny + pj;
        } else {
            const int p2 = pad_index(i2, g.nx, p.nx);
            pidx = (std::size_t(p1) * p.nx + p2) * p.ny + pj;
        }
        big[pidx] = c[idx];
    });
    backward_in_place(p, big);
    for (auto& v : big) v *= std::pow(std::max(std::abs(v), 1e-300), alpha);
    forward_in_place(p, big);
    std::vector<cplx> out(g.size());
    for_each_mode(g, [&](std::size_t idx, int i1, int i2, int j) {
        const int pj = pad_index(j, g.ny, p.ny);
        const int p1 = pad_index(i1, g.nx, p.nx);
        std::size_t pidx;
        if (g.d == 1) {
            pidx = std::size_t(p1) * p.ny + pj;
        } else {
            const int p2 = pad_index(i2, g.nx, p.nx);
            pidx = (std::size_t(p1) * p.nx + p2) * p.ny + pj;
        }
        out[idx] = big[pidx];
    });
    return SpectralField(g, std::move(out), field.time());
}

double fractional_leibniz_ratio(const SpectralField& field, double s, double alpha) {
    if (!(s > 0.0 && s < 1.0)) throw InvalidInput("Leibniz order must satisfy 0 < s < 1");
    if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
    const double sup = lebesgue_norm(field, infinity);
    const double hs = homogeneous_hs_y(field, s);
    const double denom = hs * std::pow(sup, alpha);
    if (!(denom > 0.0)) throw InvalidInput("Leibniz ratio undefined: zero denominator");
    return homogeneous_hs_y(nonlinear_term(field, alpha), s) / denom;
}

std::vector<double> mass_density(const SpectralField& field) {
    const Grid& g = field.grid();
    const auto u = field.to_physical();
    std::vector<double> rho(g.x_points(), 0.0);
    for (std::size_t x = 0; x < rho.size(); ++x) {
        double acc = 0.0;
        for (int j = 0; j < g.ny; ++j) acc += std::norm(u[x * g.ny + j]);
        rho[x] = acc * g.dy();
    }
    return rho;
}

int cube_cells(const Grid& grid, double r_side) {
    const double cells = r_side / grid.dx();
    if (!(cells >= 1.0 - 1e-9)) throw InvalidInput("cube side must span at least one grid cell");
    const int w = static_cast<int>(std::lround(cells));
    if (w > grid.nx) throw InvalidInput("cube side exceeds the box");
    return w;
}

namespace {

// Calls f(i1, i2, window_mass) for every grid-aligned window of w cells.
template <typename F>
void for_each_window(const Grid& g, std::span<const double> rho, int w, F&& f) {
    const int n = g.nx;
    if (g.d == 1) {
        std::vector<double> pre(n + 1, 0.0);
        for (int i = 0; i < n; ++i) pre[i + 1] = pre[i] + rho[i];
        for (int i = 0; i + w <= n; ++i) f(i, 0, (pre[i + w] - pre[i]) * g.cell_x());
        return;
    }
    std::vector<double> pre(std::size_t(n + 1) * (n + 1), 0.0);
    auto at = [&](int a, int b) -> double& { return pre[std::size_t(a) * (n + 1) + b]; };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            at(a + 1, b + 1) = rho[std::size_t(a) * n + b] + at(a, b + 1) + at(a + 1, b) - at(a, b);
    for (int a = 0; a + w <= n; ++a)
        for (int b = 0; b + w <= n; ++b)
            f(a, b, (at(a + w, b + w) - at(a, b + w) - at(a + w, b) + at(a, b)) * g.cell_x());
}

}  // namespace

double cube_sup_mass(const Grid& grid, std::span<const double> rho, double r_side) {
    const int w = cube_cells(grid, r_side);
    double best = 0.0;
    for_each_window(grid, rho, w, [&](int, int, double m) { best = std::max(best, m); });
    return best;
}

double cube_sup_mass(const SpectralField& field, double r_side) {
    const auto rho = mass_density(field);
    return cube_sup_mass(field.grid(), rho, r_side);
}

double edge_mass_fraction(const Grid& grid, std::span<const double> rho, double r_side,
                          double margin) {
    const int w = cube_cells(grid, r_side);
    double total = 0.0;
    for (double v : rho) total += v;
    total *= grid.cell_x();
    if (!(total > 0.0)) return 0.0;
    const int m = static_cast<int>(std::ceil(margin / grid.dx()));
    const int n = grid.nx;
    auto near_edge = [&](int i) { return i < m || i + w > n - m; };
    double best = 0.0;
    for_each_window(grid, rho, w, [&](int a, int b, double mass) {
        const bool edge = near_edge(a) || (grid.d == 2 && near_edge(b));
        if (edge) best = std::max(best, mass);
    });
    return best / total;
}

double GnCheck::ratio(int d) const {
    if (lhs == 0.0) return 0.0;
    const double rhs = std::pow(cube_factor, 2.0 / (d + 3)) * std::pow(h1, double(d + 1) / (d + 3));
    return lhs / rhs;
}

GnCheck localized_gn_check(const SpectralField& field) {
    const Grid& g = field.grid();
    GnCheck out;
    out.lhs = lebesgue_norm(field, 2.0 + 4.0 / (g.d + 1));
    out.cube_factor = std::sqrt(cube_sup_mass(field, 1.0));
    out.h1 = sobolev_h1(field);
    return out;
}

SpectralField derivative_x(const SpectralField& field, int axis) {
    const Grid& g = field.grid();
    if (axis < 0 || axis >= g.d) throw InvalidInput("derivative axis out of range");
    std::vector<cplx> c = field.coeffs();
    for_each_mode(g, [&](std::size_t idx, int i1, int i2, int) {
        c[idx] *= cplx(0.0, g.dxi(axis == 0 ? i1 : i2));
    });
    return SpectralField(g, std::move(c), field.time());
}

SpectralField derivative_y(const SpectralField& field) {
    const Grid& g = field.grid();
    std::vector<cplx> c = field.coeffs();
    for_each_mode(g, [&](std::size_t idx, int, int, int j) {
        c[idx] *= cplx(0.0, j == g.ny / 2 ? 0.0 : double(g.n(j)));
    });
    return SpectralField(g, std::move(c), field.time());
}

}  // namespace nlslab
