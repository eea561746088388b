#pragma once

// Brute-force feasibility oracle for the critical exponent system.
//
// For a candidate r the remaining exponents are solved from the raw
// identities (scaling, the two Holder identities) and every raw inequality
// is evaluated directly. Nothing here uses the closed-form interval bounds.

#include <cmath>
#include <optional>
#include <vector>

#include "nlslab/rational.hpp"

namespace oracle {

inline bool raw_system_feasible(int d, double alpha, double r) {
    const double s = (alpha * d - 4.0) / (2.0 * alpha);
    const double inv_r = 1.0 / r;
    const double inv_q = (d / 2.0 - s - d * inv_r) / 2.0;     // 2/q + d/r = d/2 - s
    const double inv_rt = 1.0 - (alpha + 1.0) * inv_r;        // 1/r~' = (alpha+1)/r
    const double inv_qt = 1.0 - (alpha + 1.0) * inv_q;        // 1/q~' = (alpha+1)/q
    auto open = [](double v) { return v > 0.0 && v < 0.5; };
    if (!open(inv_q) || !open(inv_r) || !open(inv_qt) || !open(inv_rt)) return false;
    if (d >= 3) {
        if (!(inv_q + inv_qt < 1.0)) return false;
        const double ratio = r * inv_rt;
        if (!(ratio > (d - 2.0) / d && ratio < d / (d - 2.0))) return false;
    }
    if (!(inv_q + d * inv_r < d / 2.0)) return false;
    if (!(inv_qt + d * inv_rt < d / 2.0)) return false;
    if (std::abs(2 * inv_q + d * inv_r + 2 * inv_qt + d * inv_rt - d) > 1e-9) return false;
    if (!(alpha * inv_r < 1.0)) return false;
    return true;
}

struct ScanResult {
    std::optional<double> first;
    std::optional<double> last;
    bool contiguous = true;
};

inline ScanResult scan_r(int d, double alpha, double lo = 2.0, double hi = 50.0,
                         double step = 1e-3) {
    ScanResult out;
    bool left_region = false;
    const long n = std::lround((hi - lo) / step);
    for (long k = 1; k < n; ++k) {
        const double r = lo + k * step;
        if (raw_system_feasible(d, alpha, r)) {
            if (left_region) out.contiguous = false;
            if (!out.first) out.first = r;
            out.last = r;
        } else if (out.first) {
            left_region = true;
        }
    }
    return out;
}

/// Rational alpha samples strictly inside each regime.
inline std::vector<nlslab::Rational> scattering_alphas(int d, int count = 20) {
    std::vector<nlslab::Rational> out;
    for (int j = 1; j <= count; ++j) {
        if (d == 1) {
            out.emplace_back(nlslab::Rational(4) + nlslab::Rational(j, 3));
        } else {
            const nlslab::Rational lo(4, d), hi(4, d - 1);
            out.push_back(lo + (hi - lo) * nlslab::Rational(j, count + 1));
        }
    }
    return out;
}

inline std::vector<nlslab::Rational> subcritical_alphas(int d, int count = 20) {
    std::vector<nlslab::Rational> out;
    for (int j = 1; j <= count; ++j) out.push_back(nlslab::Rational(4, d) * nlslab::Rational(j, count + 1));
    return out;
}

}  // namespace oracle
