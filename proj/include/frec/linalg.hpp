#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "frec/rng.hpp"

namespace frec {

using Vec = std::vector<double>;

// Dense row-major matrix. Desk-scale sizes only; nothing here is blocked
// or vectorized beyond what the compiler does on its own.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c);

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

// Throws std::invalid_argument when a NaN or infinity is present.
void check_finite(const Vec& v, const std::string& what);
void check_finite(const Mat& m, const std::string& what);

Mat identity(int n);
Mat transpose(const Mat& m);
Mat matmul(const Mat& a, const Mat& b);
// A^T * B without forming the transpose
Mat matmul_tn(const Mat& a, const Mat& b);
Vec matvec(const Mat& m, const Vec& x);
// M^T * y
Vec matvec_t(const Mat& m, const Vec& y);

// Columns of m restricted to an index set (order preserved).
Mat take_cols(const Mat& m, const std::vector<int>& idx);

double dot(const Vec& a, const Vec& b);
double nrm2(const Vec& v);
double nrm1(const Vec& v);
double nrm_inf(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(const Vec& v, double s);
// y += s * x
void axpy(double s, const Vec& x, Vec& y);
double max_abs_diff(const Mat& a, const Mat& b);

Vec gaussian_vec(int n, CounterRng& rng);

// Thin singular value decomposition, m = u * diag(sigma) * v^T with
// r = min(rows, cols) columns in u and v and sigma sorted descending.
struct Svd {
    Mat u;
    Vec sigma;
    Mat v;
};

// One-sided Jacobi SVD. Rotates column pairs until every normalized
// off-diagonal inner product falls below 1e-14; throws std::runtime_error
// with the residual when 100 sweeps are not enough. Zero singular
// directions get their u columns completed from the standard basis so the
// orthonormality postcondition holds at any rank.
Svd thin_svd(const Mat& m);

// Eigendecomposition of a symmetric matrix via cyclic Jacobi rotations.
// lambda ascending, eigenvectors as matching columns of `vectors`.
struct SymEig {
    Vec lambda;
    Mat vectors;
};

// Rejects input with max |m - m^T| entry above 1e-12.
SymEig symmetric_eig(const Mat& m);

} // namespace frec
