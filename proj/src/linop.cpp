#include "frec/linop.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "frec/rng.hpp"

namespace frec {

SpectrumEstimate power_iteration_norm(const LinearOperator& op, double tol, int max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("power_iteration_norm: tol must be positive");
    const int n = op.cols();
    CounterRng rng(0x706f776572ULL); // fixed start keeps the estimate deterministic
    Vec v = gaussian_vec(n, rng);
    double nv = nrm2(v);
    for (int i = 0; i < n; ++i) v[i] /= nv;

    SpectrumEstimate est;
    for (int it = 1; it <= max_iter; ++it) {
        Vec w = op.apply_adjoint(op.apply(v));
        double mu = dot(v, w); // Rayleigh quotient, ||v|| == 1
        Vec r = w;
        axpy(-mu, v, r);
        double res = nrm2(r);
        est.iterations = it;
        est.residual = res;
        double nw = nrm2(w);
        if (nw == 0.0) {
            est.value = 0.0;
            return est;
        }
        if (res <= tol * mu) {
            est.value = std::sqrt(mu);
            return est;
        }
        for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
    }
    std::ostringstream os;
    os << "power_iteration_norm: no convergence in " << max_iter
       << " iterations, residual " << est.residual;
    throw std::runtime_error(os.str());
}

CgResult cg_solve(const LinearOperator& op, const Vec& rhs, double tol, int max_iter) {
    if (op.rows() != op.cols()) throw std::invalid_argument("cg_solve: operator not square");
    if (static_cast<int>(rhs.size()) != op.rows())
        throw std::invalid_argument("cg_solve: rhs size mismatch");
    const int n = op.rows();
    if (max_iter <= 0) max_iter = 10 * n + 50;

    CgResult out;
    out.x.assign(n, 0.0);
    double bn = nrm2(rhs);
    if (bn == 0.0) return out;

    Vec r = rhs;
    Vec p = r;
    double rr = dot(r, r);
    for (int it = 1; it <= max_iter; ++it) {
        Vec ap = op.apply(p);
        double pap = dot(p, ap);
        if (pap <= 0.0)
            throw std::runtime_error("cg_solve: operator not positive definite");
        double alpha = rr / pap;
        axpy(alpha, p, out.x);
        axpy(-alpha, ap, r);
        double rr_next = dot(r, r);
        out.iterations = it;
        out.rel_residual = std::sqrt(rr_next) / bn;
        if (out.rel_residual <= tol) return out;
        double beta = rr_next / rr;
        rr = rr_next;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    std::ostringstream os;
    os << "cg_solve: no convergence in " << max_iter << " iterations, relative residual "
       << out.rel_residual;
    throw std::runtime_error(os.str());
}

} // namespace frec
