#include "frec/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frec {

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

namespace {

// Core transform without normalization; sign = -1 forward, +1 inverse.
void fft_core(std::complex<double>* x, std::size_t n, int sign) {
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    // one twiddle table for the full length, reused by every stage
    std::vector<std::complex<double>> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = x[i + k];
                std::complex<double> t = x[i + k + len / 2] * w[k * stride];
                x[i + k] = u + t;
                x[i + k + len / 2] = u - t;
            }
        }
    }
}

} // namespace

void fft_inplace(CVec& x, bool inverse) {
    std::size_t n = x.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft_inplace: length not a power of two");
    if (n == 1) return;
    fft_core(x.data(), n, inverse ? +1 : -1);
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : x) v *= scale;
}

void fft2_inplace(CVec& grid, int n_rows, int n_cols, bool inverse) {
    if (n_rows <= 0 || n_cols <= 0 ||
        grid.size() != static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols))
        throw std::invalid_argument("fft2_inplace: shape mismatch");
    if (!is_pow2(static_cast<std::size_t>(n_rows)) || !is_pow2(static_cast<std::size_t>(n_cols)))
        throw std::invalid_argument("fft2_inplace: dimensions must be powers of two");

    CVec row(n_cols);
    for (int i = 0; i < n_rows; ++i) {
        std::copy(grid.begin() + static_cast<std::size_t>(i) * n_cols,
                  grid.begin() + static_cast<std::size_t>(i + 1) * n_cols, row.begin());
        fft_inplace(row, inverse);
        std::copy(row.begin(), row.end(), grid.begin() + static_cast<std::size_t>(i) * n_cols);
    }
    CVec col(n_rows);
    for (int j = 0; j < n_cols; ++j) {
        for (int i = 0; i < n_rows; ++i) col[i] = grid[static_cast<std::size_t>(i) * n_cols + j];
        fft_inplace(col, inverse);
        for (int i = 0; i < n_rows; ++i) grid[static_cast<std::size_t>(i) * n_cols + j] = col[i];
    }
}

} // namespace frec
