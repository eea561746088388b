#include "nlslab/grid.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

namespace {

void require_power_of_two(const char* name, int n) {
    if (n < 4 || !std::has_single_bit(static_cast<unsigned>(n)))
        throw InvalidInput(std::string(name) + " must be a power of two >= 4, got " + std::to_string(n));
}

}  // namespace

Grid Grid::make(int d, double L, int nx, int ny) {
    if (d != 1 && d != 2) throw InvalidInput("d must be 1 or 2, got " + std::to_string(d));
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidInput("L must be a positive finite length");
    require_power_of_two("Nx", nx);
    require_power_of_two("Ny", ny);
    return Grid{d, L, nx, ny};
}

}  // namespace nlslab
