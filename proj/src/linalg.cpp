#include "frec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace frec {

Mat::Mat(int r, int c) {
    if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
    rows = r;
    cols = c;
    a.assign(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0);
}

void check_finite(const Vec& v, const std::string& what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw std::invalid_argument(what + ": non-finite entry");
    }
}

void check_finite(const Mat& m, const std::string& what) {
    for (double x : m.a) {
        if (!std::isfinite(x)) throw std::invalid_argument(what + ": non-finite entry");
    }
}

Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions differ");
    Mat c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = &b.a[static_cast<std::size_t>(k) * b.cols];
            double* crow = &c.a[static_cast<std::size_t>(i) * c.cols];
            for (int j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Mat matmul_tn(const Mat& a, const Mat& b) {
    if (a.rows != b.rows) throw std::invalid_argument("matmul_tn: row counts differ");
    Mat c(a.cols, b.cols);
    for (int k = 0; k < a.rows; ++k) {
        const double* arow = &a.a[static_cast<std::size_t>(k) * a.cols];
        const double* brow = &b.a[static_cast<std::size_t>(k) * b.cols];
        for (int i = 0; i < a.cols; ++i) {
            double aki = arow[i];
            if (aki == 0.0) continue;
            double* crow = &c.a[static_cast<std::size_t>(i) * c.cols];
            for (int j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

Vec matvec(const Mat& m, const Vec& x) {
    if (static_cast<int>(x.size()) != m.cols)
        throw std::invalid_argument("matvec: size mismatch");
    Vec y(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        const double* row = &m.a[static_cast<std::size_t>(i) * m.cols];
        double acc = 0.0;
        for (int j = 0; j < m.cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

Vec matvec_t(const Mat& m, const Vec& y) {
    if (static_cast<int>(y.size()) != m.rows)
        throw std::invalid_argument("matvec_t: size mismatch");
    Vec x(m.cols, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        const double* row = &m.a[static_cast<std::size_t>(i) * m.cols];
        double yi = y[i];
        if (yi == 0.0) continue;
        for (int j = 0; j < m.cols; ++j) x[j] += row[j] * yi;
    }
    return x;
}

Mat take_cols(const Mat& m, const std::vector<int>& idx) {
    Mat s(m.rows, static_cast<int>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        int c = idx[j];
        if (c < 0 || c >= m.cols) throw std::invalid_argument("take_cols: index out of range");
        for (int i = 0; i < m.rows; ++i) s(i, static_cast<int>(j)) = m(i, c);
    }
    return s;
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double nrm2(const Vec& v) { return std::sqrt(dot(v, v)); }

double nrm1(const Vec& v) {
    double acc = 0.0;
    for (double x : v) acc += std::abs(x);
    return acc;
}

double nrm_inf(const Vec& v) {
    double acc = 0.0;
    for (double x : v) acc = std::max(acc, std::abs(x));
    return acc;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("add: size mismatch");
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: size mismatch");
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

Vec scaled(const Vec& v, double s) {
    Vec c(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = s * v[i];
    return c;
}

void axpy(double s, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

Vec gaussian_vec(int n, CounterRng& rng) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
    return v;
}

namespace {

constexpr int kJacobiSweepCap = 100;
constexpr double kJacobiOffTol = 1e-14;

// One-sided Jacobi on the columns of b, rows >= cols assumed.
// Returns accumulated right rotations in v.
void one_sided_jacobi(Mat& b, Mat& v) {
    const int n = b.cols;
    const int m = b.rows;
    double max_off = 0.0;
    for (int sweep = 0; sweep < kJacobiSweepCap; ++sweep) {
        max_off = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double aii = 0.0, ajj = 0.0, aij = 0.0;
                for (int k = 0; k < m; ++k) {
                    double bi = b(k, i), bj = b(k, j);
                    aii += bi * bi;
                    ajj += bj * bj;
                    aij += bi * bj;
                }
                double denom = std::sqrt(aii * ajj);
                if (denom == 0.0) continue;
                double off = std::abs(aij) / denom;
                max_off = std::max(max_off, off);
                if (off <= kJacobiOffTol) continue;

                double zeta = (ajj - aii) / (2.0 * aij);
                double t = ((zeta >= 0.0) ? 1.0 : -1.0) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (int k = 0; k < m; ++k) {
                    double bi = b(k, i), bj = b(k, j);
                    b(k, i) = c * bi - s * bj;
                    b(k, j) = s * bi + c * bj;
                }
                for (int k = 0; k < n; ++k) {
                    double vi = v(k, i), vj = v(k, j);
                    v(k, i) = c * vi - s * vj;
                    v(k, j) = s * vi + c * vj;
                }
            }
        }
        if (max_off <= kJacobiOffTol) return;
    }
    std::ostringstream os;
    os << "thin_svd: Jacobi sweeps exhausted, off-diagonal residual " << max_off;
    throw std::runtime_error(os.str());
}

// Fills column j of u with a unit vector orthogonal to columns [0, j) by
// projecting standard basis vectors. Used for zero singular directions.
void complete_column(Mat& u, int j) {
    const int m = u.rows;
    for (int cand = 0; cand < m; ++cand) {
        Vec e(m, 0.0);
        e[cand] = 1.0;
        for (int c = 0; c < j; ++c) {
            double proj = 0.0;
            for (int k = 0; k < m; ++k) proj += u(k, c) * e[k];
            for (int k = 0; k < m; ++k) e[k] -= proj * u(k, c);
        }
        double nrm = nrm2(e);
        if (nrm > 0.5) {
            for (int k = 0; k < m; ++k) u(k, j) = e[k] / nrm;
            return;
        }
    }
    throw std::runtime_error("thin_svd: failed to complete orthonormal basis");
}

Svd thin_svd_tall(const Mat& mat) {
    Mat b = mat;
    Mat v = identity(mat.cols);
    one_sided_jacobi(b, v);

    const int n = mat.cols;
    Vec sigma(n);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < mat.rows; ++k) acc += b(k, j) * b(k, j);
        sigma[j] = std::sqrt(acc);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return sigma[x] > sigma[y]; });

    Svd out;
    out.sigma.resize(n);
    out.u = Mat(mat.rows, n);
    out.v = Mat(n, n);
    double smax = sigma.empty() ? 0.0 : sigma[order[0]];
    for (int j = 0; j < n; ++j) {
        int src = order[j];
        out.sigma[j] = sigma[src];
        for (int k = 0; k < n; ++k) out.v(k, j) = v(k, src);
        if (sigma[src] > smax * 1e-15 && sigma[src] > 0.0) {
            for (int k = 0; k < mat.rows; ++k) out.u(k, j) = b(k, src) / sigma[src];
        } else {
            complete_column(out.u, j);
        }
    }
    return out;
}

} // namespace

Svd thin_svd(const Mat& m) {
    if (m.rows <= 0 || m.cols <= 0) throw std::invalid_argument("thin_svd: empty matrix");
    check_finite(m, "thin_svd");
    if (m.rows >= m.cols) return thin_svd_tall(m);
    Svd t = thin_svd_tall(transpose(m));
    Svd out;
    out.u = t.v;
    out.sigma = t.sigma;
    out.v = t.u;
    return out;
}

SymEig symmetric_eig(const Mat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("symmetric_eig: matrix not square");
    check_finite(m, "symmetric_eig");
    const int n = m.rows;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-12)
                throw std::invalid_argument("symmetric_eig: matrix not symmetric");

    Mat a = m;
    Mat v = identity(n);
    double frob = 0.0;
    for (double x : a.a) frob += x * x;
    frob = std::sqrt(frob);
    const double tol = kJacobiOffTol * std::max(frob, 1e-300);

    double max_off = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < kJacobiSweepCap && !converged; ++sweep) {
        max_off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                max_off = std::max(max_off, std::abs(apq));
                if (std::abs(apq) <= tol) continue;

                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = ((theta >= 0.0) ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;

                double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(p, k) = a(k, p);
                    a(k, q) = s * akp + c * akq;
                    a(q, k) = a(k, q);
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
        converged = max_off <= tol;
    }
    if (!converged && n > 1) {
        std::ostringstream os;
        os << "symmetric_eig: Jacobi sweeps exhausted, off-diagonal residual " << max_off;
        throw std::runtime_error(os.str());
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a(x, x) < a(y, y); });

    SymEig out;
    out.lambda.resize(n);
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.lambda[j] = a(order[j], order[j]);
        for (int k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
    }
    return out;
}

} // namespace frec
