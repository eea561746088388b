#include "nlslab/snapshot_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "nlslab/error.hpp"

namespace nlslab {

namespace {

template <typename T>
void put(std::ostream& out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T)))
        throw InvalidInput("snapshot truncated");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const SpectralField& field) {
    const Grid& g = field.grid();
    put<std::int32_t>(out, g.d);
    put<double>(out, g.L);
    put<std::int32_t>(out, g.nx);
    put<std::int32_t>(out, g.ny);
    put<double>(out, field.time());
    for (const auto& c : field.coeffs()) {
        put<double>(out, c.real());
        put<double>(out, c.imag());
    }
    if (!out) throw std::runtime_error("failed writing snapshot");
}

SpectralField read_snapshot(std::istream& in) {
    const int d = get<std::int32_t>(in);
    const double L = get<double>(in);
    const int nx = get<std::int32_t>(in);
    const int ny = get<std::int32_t>(in);
    const double t = get<double>(in);
    const Grid g = Grid::make(d, L, nx, ny);
    std::vector<cplx> c(g.size());
    for (auto& v : c) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        v = cplx(re, im);
    }
    return SpectralField(g, std::move(c), t);
}

void save_snapshot(const std::filesystem::path& path, const SpectralField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_snapshot(out, field);
}

SpectralField load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open snapshot " + path.string());
    return read_snapshot(in);
}

}  // namespace nlslab
