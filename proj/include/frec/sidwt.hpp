#pragma once

#include <array>

#include "frec/frames.hpp"

namespace frec {

// 8-tap Daubechies orthonormal scaling filter (sum sqrt(2), unit energy).
extern const std::array<double, 8> kDb4Lowpass;

// Undecimated (a-trous) Daubechies-4 wavelet frame on periodic signals of
// power-of-two length. Filters are upsampled by 2^(j-1) at level j and
// scaled by 1/sqrt(2) per level, which makes the stacked analysis map a
// Parseval frame: d = n * (levels + 1) coefficients, D D^T = I.
//
// Coefficient layout: detail level 1 .. detail level L, then the coarse
// approximation, each block of length n.
class Sidwt1D final : public TightFrame {
public:
    Sidwt1D(int length, int levels);

    int n() const override { return length_; }
    int d() const override { return length_ * (levels_ + 1); }
    std::string kind() const override { return "sidwt1d"; }
    Vec synthesize(const Vec& coef) const override;
    Vec analyze(const Vec& x) const override;
    int levels() const { return levels_; }

private:
    int length_;
    int levels_;
};

// Separable 2-D version on square power-of-two images (row-major). Each
// level emits three detail bands (row-lowpass/col-highpass, row-highpass/
// col-lowpass, row-highpass/col-highpass); the coarse band comes last:
// d = n * (3 * levels + 1) for n = size * size pixels.
class Sidwt2D final : public TightFrame {
public:
    Sidwt2D(int size, int levels);

    int n() const override { return size_ * size_; }
    int d() const override { return size_ * size_ * (3 * levels_ + 1); }
    std::string kind() const override { return "sidwt2d"; }
    Vec synthesize(const Vec& coef) const override;
    Vec analyze(const Vec& x) const override;
    int size() const { return size_; }
    int levels() const { return levels_; }

private:
    int size_;
    int levels_;
};

} // namespace frec
