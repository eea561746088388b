#include "nlslab/spectral_field.hpp"

#include <cmath>

#include "nlslab/error.hpp"
#include "nlslab/fft.hpp"

namespace nlslab {

namespace {

std::vector<int> dims_of(const Grid& g) {
    if (g.d == 1) return {g.nx, g.ny};
    return {g.nx, g.nx, g.ny};
}

// x_j starts at -L/2, so exp(-i xi_k x_j) = (-1)^k exp(-2 pi i k j / Nx).
void apply_origin_phase(const Grid& g, std::vector<cplx>& data) {
    for_each_mode(g, [&](std::size_t idx, int i1, int i2, int) {
        if ((i1 + i2) & 1) data[idx] = -data[idx];
    });
}

}  // namespace

SpectralField::SpectralField(Grid grid, std::vector<cplx> coeffs, double time_tag)
    : grid_(grid), coeffs_(std::move(coeffs)), time_(time_tag) {
    if (coeffs_.size() != grid_.size()) throw InvalidInput("coefficient array does not match grid size");
}

SpectralField SpectralField::zeros(const Grid& grid, double time_tag) {
    return SpectralField(grid, std::vector<cplx>(grid.size()), time_tag);
}

SpectralField SpectralField::from_profile(const Grid& grid, const Sampler& sampler) {
    std::vector<cplx> data(grid.size());
    double x[2] = {0.0, 0.0};
    const std::span<const double> xs(x, grid.d);
    for_each_mode(grid, [&](std::size_t idx, int i1, int i2, int j) {
        x[0] = grid.x(i1);
        x[1] = grid.x(i2);
        const cplx v = sampler(xs, j * grid.dy());
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InvalidInput("profile sampler returned a non-finite value");
        data[idx] = v;
    });
    forward_in_place(grid, data);
    return SpectralField(grid, std::move(data));
}

SpectralField SpectralField::from_physical(const Grid& grid, std::span<const cplx> samples,
                                           double time_tag) {
    std::vector<cplx> data(samples.begin(), samples.end());
    if (data.size() != grid.size()) throw InvalidInput("sample array does not match grid size");
    forward_in_place(grid, data);
    return SpectralField(grid, std::move(data), time_tag);
}

std::vector<cplx> SpectralField::to_physical() const {
    std::vector<cplx> data = coeffs_;
    backward_in_place(grid_, data);
    return data;
}

void forward_in_place(const Grid& grid, std::vector<cplx>& data) {
    fft::transform(dims_of(grid), fft::Direction::forward, data.data(), data.data());
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& v : data) v *= scale;
    apply_origin_phase(grid, data);
}

void backward_in_place(const Grid& grid, std::vector<cplx>& data) {
    apply_origin_phase(grid, data);
    fft::transform(dims_of(grid), fft::Direction::backward, data.data(), data.data());
}

void apply_free_flow(const Grid& grid, std::vector<cplx>& coeffs, double t) {
    if (t == 0.0) return;
    for_each_mode(grid, [&](std::size_t idx, int i1, int i2, int j) {
        const double n = grid.n(j);
        const double phase = t * (xi_squared(grid, i1, i2) + n * n);
        coeffs[idx] *= cplx(std::cos(phase), std::sin(phase));
    });
}

SpectralField free_evolve(const SpectralField& field, double t) {
    std::vector<cplx> c = field.coeffs();
    apply_free_flow(field.grid(), c, t);
    return SpectralField(field.grid(), std::move(c), field.time() + t);
}

SpectralField combine(const SpectralField& u, double a, const SpectralField& v, double b) {
    if (!(u.grid() == v.grid())) throw InvalidInput("fields live on different grids");
    std::vector<cplx> c(u.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a * u.coeffs()[i] + b * v.coeffs()[i];
    return SpectralField(u.grid(), std::move(c), u.time());
}

}  // namespace nlslab
