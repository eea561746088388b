#pragma once

#include <filesystem>
#include <iosfwd>

#include "nlslab/spectral_field.hpp"

namespace nlslab {

// Binary snapshot layout, all little-endian:
//   int32 d, float64 L, int32 Nx, int32 Ny, float64 time_tag,
//   then (re, im) float64 pairs for every coefficient in storage order
//   (k outer, n inner, FFT wrapped frequencies).

void write_snapshot(std::ostream& out, const SpectralField& field);
SpectralField read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const SpectralField& field);
SpectralField load_snapshot(const std::filesystem::path& path);

}  // namespace nlslab
