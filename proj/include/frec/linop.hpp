#pragma once

#include <memory>

#include "frec/linalg.hpp"

namespace frec {

// Abstract real linear map. Complex-valued measurement models are handled
// by realified operators (interleaved real/imag output), which keeps every
// solver purely real and makes adjoint-of-real-part exact.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;

    virtual int rows() const = 0;
    virtual int cols() const = 0;
    virtual Vec apply(const Vec& x) const = 0;
    virtual Vec apply_adjoint(const Vec& y) const = 0;
};

class DenseOp final : public LinearOperator {
public:
    explicit DenseOp(Mat m) : m_(std::move(m)) {}

    int rows() const override { return m_.rows; }
    int cols() const override { return m_.cols; }
    Vec apply(const Vec& x) const override { return matvec(m_, x); }
    Vec apply_adjoint(const Vec& y) const override { return matvec_t(m_, y); }
    const Mat& matrix() const { return m_; }

private:
    Mat m_;
};

struct SpectrumEstimate {
    double value = 0.0;      // largest singular value
    int iterations = 0;
    double residual = 0.0;   // ||A^T A v - mu v||_2 at the returned v
};

// Power iteration on A^T A from a fixed pseudo-random start. Stops once the
// Rayleigh residual certifies `value` to the requested relative accuracy;
// throws std::runtime_error when max_iter is exhausted first.
SpectrumEstimate power_iteration_norm(const LinearOperator& op, double tol = 1e-6,
                                      int max_iter = 20000);

struct CgResult {
    Vec x;
    int iterations = 0;
    double rel_residual = 0.0;
};

// Conjugate gradient for symmetric positive definite operators. Relative
// residual stopping; throws std::runtime_error (message carries the final
// residual) when max_iter is exhausted.
CgResult cg_solve(const LinearOperator& op, const Vec& rhs, double tol = 1e-10,
                  int max_iter = 0 /* 0: 10 * dimension */);

} // namespace frec
