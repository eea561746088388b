#pragma once

// Thin FFTW wrapper. Plans are created once per shape with FFTW_ESTIMATE
// (deterministic, data-independent) and cached behind a mutex; executing a
// cached plan is thread-safe.

#include <complex>
#include <vector>

namespace nlslab::fft {

using cplx = std::complex<double>;

enum class Direction { forward, backward };

/// Unnormalized multi-dimensional transform of a contiguous row-major array
/// with the given extents. `in` and `out` must each hold prod(dims) values
/// and may alias.
void transform(const std::vector<int>& dims, Direction dir, const cplx* in, cplx* out);

/// `howmany` contiguous 1-D transforms of length n laid out back to back.
void transform_lines(int n, int howmany, Direction dir, const cplx* in, cplx* out);

/// Thread count handed to FFTW for plans created from now on. Reads
/// NLSLAB_THREADS on first use; defaults to 1.
int threads();
void set_threads(int n);

}  // namespace nlslab::fft
