#pragma once

#include <vector>

#include "nlslab/spectral_field.hpp"

namespace nlslab {

/// y-integrated densities on the x-grid (rectangle rule in y):
///   rho = int |u|^2,  P_i = int Im(conj(u) d_i u),  K_ij = int Re(d_i u conj(d_j u)),
///   nu = int |u|^{alpha+2},  grad_rho_i = int 2 Re(conj(u) d_i u).
/// K is stored as its independent components: {K11} for d = 1 and
/// {K11, K12, K22} for d = 2.
struct DensitySet {
    int d = 1;
    std::vector<double> rho;
    std::vector<std::vector<double>> P;
    std::vector<std::vector<double>> K;
    std::vector<double> nu;
    std::vector<std::vector<double>> grad_rho;

    /// Component index of K_ij in `K`.
    static int k_index(int d, int i, int j) { return d == 1 ? 0 : i + j; }
};

DensitySet densities(const SpectralField& field, double alpha);

}  // namespace nlslab
