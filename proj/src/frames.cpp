#include "frec/frames.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "frec/rng.hpp"

namespace frec {

DenseFrame::DenseFrame(Mat synthesis, std::string kind, double tol)
    : m_(std::move(synthesis)), kind_(std::move(kind)) {
    if (m_.rows < 1 || m_.cols < m_.rows)
        throw std::invalid_argument("DenseFrame: need 1 <= n <= d");
    check_finite(m_, "DenseFrame");
    // tightness check on the explicit Gram matrix
    Mat gram = matmul(m_, transpose(m_));
    double worst = 0.0;
    for (int i = 0; i < gram.rows; ++i)
        for (int j = 0; j < gram.cols; ++j)
            worst = std::max(worst, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
    if (worst > tol) {
        std::ostringstream os;
        os << "DenseFrame: synthesis matrix is not a Parseval frame, |DD^T - I| = " << worst;
        throw std::invalid_argument(os.str());
    }
}

double tightness_error(const TightFrame& f) {
    const int n = f.n();
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        Vec col = f.synthesize(f.analyze(e));
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(col[i] - (i == j ? 1.0 : 0.0)));
    }
    return worst;
}

DenseFrame random_tight_frame(int n, int d, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_tight_frame: n must be positive");
    if (d < n) throw std::invalid_argument("random_tight_frame: d < n not supported");
    CounterRng rng(seed);
    Mat e(n, d);
    for (double& x : e.a) x = rng.gaussian();
    Svd s = thin_svd(e); // u: n x n, v: d x n
    Mat frame = matmul(s.u, transpose(s.v));
    return DenseFrame(std::move(frame), "random_tight");
}

namespace {

// Synthesis map of a frame exposed as a LinearOperator (R^d -> R^n).
class FrameSynthesisOp final : public LinearOperator {
public:
    explicit FrameSynthesisOp(const TightFrame& f) : f_(&f) {}
    int rows() const override { return f_->n(); }
    int cols() const override { return f_->d(); }
    Vec apply(const Vec& x) const override { return f_->synthesize(x); }
    Vec apply_adjoint(const Vec& y) const override { return f_->analyze(y); }

private:
    const TightFrame* f_;
};

} // namespace

std::unique_ptr<LinearOperator> canonical_dual(const TightFrame& f) {
    const Mat* dm = f.dense();
    if (dm == nullptr) {
        // matrix-free frames are tight by construction, so the Gram inverse
        // is the identity and the dual is the synthesis map itself
        return std::make_unique<FrameSynthesisOp>(f);
    }
    Mat gram = matmul(*dm, transpose(*dm));
    SymEig eig = symmetric_eig(gram);
    if (eig.lambda.front() <= 0.0)
        throw std::runtime_error("canonical_dual: Gram matrix is singular");
    // (Q diag(1/lambda) Q^T) D
    Mat qt_d = matmul_tn(eig.vectors, *dm);
    for (int i = 0; i < qt_d.rows; ++i)
        for (int j = 0; j < qt_d.cols; ++j) qt_d(i, j) /= eig.lambda[i];
    return std::make_unique<DenseOp>(matmul(eig.vectors, qt_d));
}

ComplementFrame orthogonal_complement(const TightFrame& f) {
    const Mat* dm = f.dense();
    if (dm == nullptr)
        throw std::invalid_argument("orthogonal_complement: dense frame required");
    const int n = dm->rows;
    const int d = dm->cols;

    // Start from the frame's own rows (orthonormal up to the tightness
    // tolerance), tidy them with modified Gram-Schmidt, then extend with
    // standard basis vectors until the full space is covered.
    Mat basis(d, d);
    int have = 0;
    auto push_ortho = [&](Vec v) -> bool {
        for (int pass = 0; pass < 2; ++pass) {
            for (int r = 0; r < have; ++r) {
                double proj = 0.0;
                for (int k = 0; k < d; ++k) proj += basis(r, k) * v[k];
                for (int k = 0; k < d; ++k) v[k] -= proj * basis(r, k);
            }
        }
        double nv = nrm2(v);
        if (nv < 1e-8) return false;
        for (int k = 0; k < d; ++k) basis(have, k) = v[k] / nv;
        ++have;
        return true;
    };

    for (int i = 0; i < n; ++i) {
        Vec row(d);
        for (int k = 0; k < d; ++k) row[k] = (*dm)(i, k);
        if (!push_ortho(std::move(row)))
            throw std::runtime_error("orthogonal_complement: frame rows are degenerate");
    }
    for (int c = 0; c < d && have < d; ++c) {
        Vec e(d, 0.0);
        e[c] = 1.0;
        push_ortho(std::move(e));
    }
    if (have != d)
        throw std::runtime_error("orthogonal_complement: completion failed");

    ComplementFrame out;
    out.b = Mat(d - n, d);
    for (int i = n; i < d; ++i)
        for (int k = 0; k < d; ++k) out.b(i - n, k) = basis(i, k);
    return out;
}

} // namespace frec
