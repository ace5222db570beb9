#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "frec/linalg.hpp"
#include "frec/linop.hpp"

namespace frec {

// Parseval frame of R^n with d atoms: the synthesis map D takes coefficient
// vectors in R^d to signals, analysis is D^T, and D D^T = I_n. Implementations
// either store the synthesis matrix densely or apply it matrix-free.
class TightFrame {
public:
    virtual ~TightFrame() = default;

    virtual int n() const = 0; // signal dimension
    virtual int d() const = 0; // coefficient dimension
    virtual std::string kind() const = 0;

    // D c
    virtual Vec synthesize(const Vec& coef) const = 0;
    // D^T x
    virtual Vec analyze(const Vec& x) const = 0;

    // Dense synthesis matrix when one is stored; nullptr for matrix-free frames.
    virtual const Mat* dense() const { return nullptr; }
};

class DenseFrame final : public TightFrame {
public:
    // Validates shape (n <= d), finiteness and tightness of the given
    // synthesis matrix; tol is the max-entry budget for |D D^T - I|.
    explicit DenseFrame(Mat synthesis, std::string kind = "dense", double tol = 1e-10);

    int n() const override { return m_.rows; }
    int d() const override { return m_.cols; }
    std::string kind() const override { return kind_; }
    Vec synthesize(const Vec& coef) const override { return matvec(m_, coef); }
    Vec analyze(const Vec& x) const override { return matvec_t(m_, x); }
    const Mat* dense() const override { return &m_; }

private:
    Mat m_;
    std::string kind_;
};

// max-entry deviation of D D^T from the identity, evaluated matrix-free
// through n synthesize/analyze round trips on basis vectors.
double tightness_error(const TightFrame& f);

// Gaussian n x d draw, SVD, singular values replaced by ones: a random
// partial isometry. Requires d >= n.
DenseFrame random_tight_frame(int n, int d, std::uint64_t seed);

// Canonical dual map (D D^T)^{-1} D. For a tight frame this is D itself;
// the dense path still solves with the Gram matrix instead of assuming it.
// The returned operator keeps a pointer to `f`, which must outlive it.
std::unique_ptr<LinearOperator> canonical_dual(const TightFrame& f);

// Orthonormal basis of the null space of the synthesis map, stored as the
// rows of b: b * D^T = 0 and b * b^T = I_{d-n}. Completes the coefficient
// space so that |v|^2 = |Dv|^2 + |b v|^2 for every v in R^d.
struct ComplementFrame {
    Mat b; // (d - n) x d

    Vec apply(const Vec& coef) const { return matvec(b, coef); }
    Vec apply_adjoint(const Vec& y) const { return matvec_t(b, y); }
};

// Requires a dense tight frame (rejects matrix-free ones).
ComplementFrame orthogonal_complement(const TightFrame& f);

} // namespace frec
