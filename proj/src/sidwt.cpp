#include "frec/sidwt.hpp"

#include <cmath>
#include <stdexcept>

#include "frec/fft.hpp"

namespace frec {

const std::array<double, 8> kDb4Lowpass = {
    0.230377813308855,  0.714846570552542,  0.630880767929590, -0.027983769416984,
    -0.187034811718881, 0.030841381835987,  0.032883011666983, -0.010597401784997};

namespace {

struct FilterPair {
    std::array<double, 8> lo;
    std::array<double, 8> hi;
};

// Per-level 1/sqrt(2) normalization turns the orthonormal pair into a
// Parseval two-channel bank for the undecimated transform.
FilterPair normalized_pair() {
    FilterPair fp{};
    const double s = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < 8; ++k) fp.lo[k] = kDb4Lowpass[k] * s;
    for (int k = 0; k < 8; ++k)
        fp.hi[k] = ((k & 1) ? -1.0 : 1.0) * kDb4Lowpass[7 - k] * s;
    return fp;
}

const FilterPair& filters() {
    static const FilterPair fp = normalized_pair();
    return fp;
}

// y[t] = sum_k f[k] x[(t - k*u) mod n], the a-trous convolution at hole size u.
void conv_atrous(const std::array<double, 8>& f, const double* x, double* y, int n, int u) {
    int off[8];
    for (int k = 0; k < 8; ++k) off[k] = (k * u) % n;
    for (int t = 0; t < n; ++t) {
        double acc = 0.0;
        for (int k = 0; k < 8; ++k) {
            int idx = t - off[k];
            if (idx < 0) idx += n;
            acc += f[k] * x[idx];
        }
        y[t] = acc;
    }
}

// Exact adjoint of conv_atrous.
void conv_atrous_adj(const std::array<double, 8>& f, const double* x, double* y, int n, int u) {
    int off[8];
    for (int k = 0; k < 8; ++k) off[k] = (k * u) % n;
    for (int t = 0; t < n; ++t) {
        double acc = 0.0;
        for (int k = 0; k < 8; ++k) {
            int idx = t + off[k];
            if (idx >= n) idx -= n;
            acc += f[k] * x[idx];
        }
        y[t] = acc;
    }
}

void check_shape_1d(int length, int levels) {
    if (!is_pow2(static_cast<std::size_t>(length)))
        throw std::invalid_argument("sidwt: length must be a power of two");
    if (levels < 1) throw std::invalid_argument("sidwt: levels must be at least 1");
    if ((1 << levels) > length)
        throw std::invalid_argument("sidwt: 2^levels exceeds the signal length");
}

} // namespace

Sidwt1D::Sidwt1D(int length, int levels) : length_(length), levels_(levels) {
    check_shape_1d(length, levels);
}

Vec Sidwt1D::analyze(const Vec& x) const {
    if (static_cast<int>(x.size()) != length_)
        throw std::invalid_argument("Sidwt1D::analyze: size mismatch");
    const FilterPair& fp = filters();
    Vec out(static_cast<std::size_t>(d()));
    Vec a = x, next(length_);
    for (int j = 1; j <= levels_; ++j) {
        int u = 1 << (j - 1);
        conv_atrous(fp.hi, a.data(), out.data() + static_cast<std::size_t>(j - 1) * length_,
                    length_, u);
        conv_atrous(fp.lo, a.data(), next.data(), length_, u);
        std::swap(a, next);
    }
    std::copy(a.begin(), a.end(), out.begin() + static_cast<std::size_t>(levels_) * length_);
    return out;
}

Vec Sidwt1D::synthesize(const Vec& coef) const {
    if (static_cast<int>(coef.size()) != d())
        throw std::invalid_argument("Sidwt1D::synthesize: size mismatch");
    const FilterPair& fp = filters();
    Vec r(coef.begin() + static_cast<std::size_t>(levels_) * length_, coef.end());
    Vec tmp(length_), det(length_);
    for (int j = levels_; j >= 1; --j) {
        int u = 1 << (j - 1);
        conv_atrous_adj(fp.lo, r.data(), tmp.data(), length_, u);
        conv_atrous_adj(fp.hi, coef.data() + static_cast<std::size_t>(j - 1) * length_,
                        det.data(), length_, u);
        for (int t = 0; t < length_; ++t) r[t] = tmp[t] + det[t];
    }
    return r;
}

namespace {

// Row-wise and column-wise a-trous passes for square row-major images.
void conv_rows(const std::array<double, 8>& f, const Vec& img, Vec& out, int s, int u,
               bool adjoint) {
    for (int i = 0; i < s; ++i) {
        const double* x = img.data() + static_cast<std::size_t>(i) * s;
        double* y = out.data() + static_cast<std::size_t>(i) * s;
        if (adjoint)
            conv_atrous_adj(f, x, y, s, u);
        else
            conv_atrous(f, x, y, s, u);
    }
}

void conv_cols(const std::array<double, 8>& f, const Vec& img, Vec& out, int s, int u,
               bool adjoint) {
    Vec colin(s), colout(s);
    for (int j = 0; j < s; ++j) {
        for (int i = 0; i < s; ++i) colin[i] = img[static_cast<std::size_t>(i) * s + j];
        if (adjoint)
            conv_atrous_adj(f, colin.data(), colout.data(), s, u);
        else
            conv_atrous(f, colin.data(), colout.data(), s, u);
        for (int i = 0; i < s; ++i) out[static_cast<std::size_t>(i) * s + j] = colout[i];
    }
}

} // namespace

Sidwt2D::Sidwt2D(int size, int levels) : size_(size), levels_(levels) {
    check_shape_1d(size, levels);
}

Vec Sidwt2D::analyze(const Vec& x) const {
    const int n = size_ * size_;
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("Sidwt2D::analyze: size mismatch");
    const FilterPair& fp = filters();
    Vec out(static_cast<std::size_t>(d()));
    Vec a = x;
    Vec rl(n), rh(n), band(n);
    for (int j = 1; j <= levels_; ++j) {
        int u = 1 << (j - 1);
        std::size_t base = static_cast<std::size_t>(3) * (j - 1) * n;
        conv_rows(fp.lo, a, rl, size_, u, false);
        conv_rows(fp.hi, a, rh, size_, u, false);
        // row-low / col-high
        conv_cols(fp.hi, rl, band, size_, u, false);
        std::copy(band.begin(), band.end(), out.begin() + base);
        // row-high / col-low
        conv_cols(fp.lo, rh, band, size_, u, false);
        std::copy(band.begin(), band.end(), out.begin() + base + n);
        // row-high / col-high
        conv_cols(fp.hi, rh, band, size_, u, false);
        std::copy(band.begin(), band.end(), out.begin() + base + 2 * static_cast<std::size_t>(n));
        // coarse band continues the cascade
        conv_cols(fp.lo, rl, a, size_, u, false);
    }
    std::copy(a.begin(), a.end(),
              out.begin() + static_cast<std::size_t>(3) * levels_ * n);
    return out;
}

Vec Sidwt2D::synthesize(const Vec& coef) const {
    const int n = size_ * size_;
    if (static_cast<int>(coef.size()) != d())
        throw std::invalid_argument("Sidwt2D::synthesize: size mismatch");
    const FilterPair& fp = filters();
    Vec r(coef.begin() + static_cast<std::size_t>(3) * levels_ * n, coef.end());
    Vec rl(n), rh(n), t1(n), t2(n);
    for (int j = levels_; j >= 1; --j) {
        int u = 1 << (j - 1);
        std::size_t base = static_cast<std::size_t>(3) * (j - 1) * n;
        Vec lh(coef.begin() + base, coef.begin() + base + n);
        Vec hl(coef.begin() + base + n, coef.begin() + base + 2 * static_cast<std::size_t>(n));
        Vec hh(coef.begin() + base + 2 * static_cast<std::size_t>(n),
               coef.begin() + base + 3 * static_cast<std::size_t>(n));
        // undo the column pass
        conv_cols(fp.lo, r, t1, size_, u, true);
        conv_cols(fp.hi, lh, t2, size_, u, true);
        for (int k = 0; k < n; ++k) rl[k] = t1[k] + t2[k];
        conv_cols(fp.lo, hl, t1, size_, u, true);
        conv_cols(fp.hi, hh, t2, size_, u, true);
        for (int k = 0; k < n; ++k) rh[k] = t1[k] + t2[k];
        // undo the row pass
        conv_rows(fp.lo, rl, t1, size_, u, true);
        conv_rows(fp.hi, rh, t2, size_, u, true);
        for (int k = 0; k < n; ++k) r[k] = t1[k] + t2[k];
    }
    return r;
}

} // namespace frec
