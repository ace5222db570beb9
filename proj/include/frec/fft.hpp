#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace frec {

using CVec = std::vector<std::complex<double>>;

bool is_pow2(std::size_t n);

// In-place radix-2 transform, unitary scaling (1/sqrt(N) in both
// directions). Length must be a power of two.
void fft_inplace(CVec& x, bool inverse);

// Separable 2-D transform of a row-major grid; both dimensions must be
// powers of two. Unitary in each direction.
void fft2_inplace(CVec& grid, int n_rows, int n_cols, bool inverse);

} // namespace frec
