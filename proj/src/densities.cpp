#include "nlslab/densities.hpp"

#include <algorithm>
#include <cmath>

#include "nlslab/norms.hpp"

namespace nlslab {

DensitySet densities(const SpectralField& field, double alpha) {
    const Grid& g = field.grid();
    const std::size_t nxp = g.x_points();
    const auto u = field.to_physical();
    std::vector<std::vector<cplx>> du;
    for (int a = 0; a < g.d; ++a) du.push_back(derivative_x(field, a).to_physical());

    DensitySet out;
    out.d = g.d;
    out.rho.assign(nxp, 0.0);
    out.nu.assign(nxp, 0.0);
    out.P.assign(g.d, std::vector<double>(nxp, 0.0));
    out.grad_rho.assign(g.d, std::vector<double>(nxp, 0.0));
    out.K.assign(g.d == 1 ? 1 : 3, std::vector<double>(nxp, 0.0));

    const double dy = g.dy();
    for (std::size_t x = 0; x < nxp; ++x) {
        for (int j = 0; j < g.ny; ++j) {
            const std::size_t idx = x * g.ny + j;
            const cplx v = u[idx];
            const double m = std::abs(v);
            out.rho[x] += m * m * dy;
            out.nu[x] += std::pow(std::max(m, 1e-300), alpha) * m * m * dy;
            for (int a = 0; a < g.d; ++a) {
                const cplx prod = std::conj(v) * du[a][idx];
                out.P[a][x] += prod.imag() * dy;
                out.grad_rho[a][x] += 2.0 * prod.real() * dy;
                for (int b = a; b < g.d; ++b)
                    out.K[DensitySet::k_index(g.d, a, b)][x] +=
                        (du[a][idx] * std::conj(du[b][idx])).real() * dy;
            }
        }
    }
    return out;
}

}  // namespace nlslab
