#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "frec/fft.hpp"
#include "frec/linalg.hpp"
#include "frec/rng.hpp"

using namespace frec;

namespace {

// Quadratic-time reference DFT with the same unitary scaling.
CVec naive_dft(const CVec& x, bool inverse) {
    std::size_t n = x.size();
    CVec out(n);
    double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k * j % n) /
                         static_cast<double>(n);
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc / std::sqrt(static_cast<double>(n));
    }
    return out;
}

CVec random_cvec(std::size_t n, CounterRng& rng) {
    CVec x(n);
    for (auto& v : x) v = {rng.gaussian(), rng.gaussian()};
    return x;
}

double max_err(const CVec& a, const CVec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("fft matches the quadratic reference transform") {
    CounterRng rng(5);
    for (std::size_t n : {1u, 2u, 8u, 64u}) {
        CVec x = random_cvec(n, rng);
        CVec ref = naive_dft(x, false);
        CVec got = x;
        fft_inplace(got, false);
        CHECK(max_err(got, ref) < 1e-12);
        CVec refi = naive_dft(x, true);
        CVec goti = x;
        fft_inplace(goti, true);
        CHECK(max_err(goti, refi) < 1e-12);
    }
}

TEST_CASE("fft round trip and Parseval at length 1024") {
    CounterRng rng(6);
    CVec x = random_cvec(1024, rng);
    double e_before = 0.0;
    for (auto& v : x) e_before += std::norm(v);
    CVec y = x;
    fft_inplace(y, false);
    double e_after = 0.0;
    for (auto& v : y) e_after += std::norm(v);
    CHECK(std::abs(e_after - e_before) < 1e-12 * e_before);
    fft_inplace(y, true);
    CHECK(max_err(y, x) < 1e-12);
}

TEST_CASE("fft of an impulse is flat") {
    CVec x(16, 0.0);
    x[0] = 1.0;
    fft_inplace(x, false);
    for (auto& v : x) CHECK(std::abs(v - 0.25) < 1e-14);
}

TEST_CASE("fft rejects non power of two lengths") {
    CVec x(12, 0.0);
    CHECK_THROWS_AS(fft_inplace(x, false), std::invalid_argument);
}

TEST_CASE("fft2 equals row FFTs followed by column FFTs and round trips") {
    CounterRng rng(7);
    const int r = 4, c = 8;
    CVec grid = random_cvec(r * c, rng);

    CVec ref = grid;
    for (int i = 0; i < r; ++i) {
        CVec row(ref.begin() + i * c, ref.begin() + (i + 1) * c);
        row = naive_dft(row, false);
        std::copy(row.begin(), row.end(), ref.begin() + i * c);
    }
    for (int j = 0; j < c; ++j) {
        CVec col(r);
        for (int i = 0; i < r; ++i) col[i] = ref[i * c + j];
        col = naive_dft(col, false);
        for (int i = 0; i < r; ++i) ref[i * c + j] = col[i];
    }

    CVec got = grid;
    fft2_inplace(got, r, c, false);
    CHECK(max_err(got, ref) < 1e-12);
    fft2_inplace(got, r, c, true);
    CHECK(max_err(got, grid) < 1e-12);
}

TEST_CASE("counter rng reproduces its stream and decorrelates seeds") {
    CounterRng a(42), b(42), c(43);
    bool all_equal = true, any_equal = false;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t va = a.next_u64();
        all_equal = all_equal && (va == b.next_u64());
        any_equal = any_equal || (va == c.next_u64());
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal);
}

TEST_CASE("uniform draws live in [0,1)") {
    CounterRng rng(9);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("gaussian draws have standard moments") {
    CounterRng rng(10);
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        double g = rng.gaussian();
        s1 += g;
        s2 += g * g;
        s4 += g * g * g * g;
    }
    double mean = s1 / n;
    double var = s2 / n - mean * mean;
    double kurt = s4 / n / (var * var);
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
    CHECK(kurt == doctest::Approx(3.0).epsilon(0.08));
}

TEST_CASE("derive_seed separates streams by either index") {
    std::uint64_t base = derive_seed(42, 3, 7);
    CHECK(base == derive_seed(42, 3, 7));
    CHECK(base != derive_seed(42, 3, 8));
    CHECK(base != derive_seed(42, 4, 7));
    CHECK(base != derive_seed(43, 3, 7));
}

TEST_CASE("below produces indices within range") {
    CounterRng rng(11);
    for (int i = 0; i < 1000; ++i) CHECK(rng.below(17) < 17);
}
