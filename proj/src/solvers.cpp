#include "frec/solvers.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace frec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_problem(const LinearOperator& a, const Vec& b, const TightFrame& frame) {
    if (a.cols() != frame.n())
        throw std::invalid_argument("solver: operator and frame dimensions differ");
    if (static_cast<int>(b.size()) != a.rows())
        throw std::invalid_argument("solver: measurement size mismatch");
    check_finite(b, "solver rhs");
}

double resolve_gamma(const LinearOperator& a, double requested) {
    SpectrumEstimate est = power_iteration_norm(a, 1e-6);
    double s2 = est.value * est.value;
    if (requested <= 0.0) {
        if (s2 == 0.0) throw std::invalid_argument("solver: zero operator");
        return 0.99 / s2;
    }
    // small slack absorbs the power-iteration tolerance at the gamma = 1/s2 boundary
    if (s2 > 0.0 && requested > (1.0 + 1e-4) / s2)
        throw std::invalid_argument("solver: step size exceeds 1 / ||A||^2");
    return requested;
}

} // namespace

double objective_analysis(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                          const ProxSpec& prox, double lambda, const Vec& x) {
    Vec r = sub(a.apply(x), b);
    return penalty_value(prox, frame.analyze(x), lambda) + 0.5 * dot(r, r);
}

double objective_rasso(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                       double lambda, double alpha, double rho, const Vec& x, const Vec& z) {
    Vec r = sub(a.apply(x), b);
    Vec c = sub(frame.analyze(x), z);
    return lambda * (nrm1(z) - alpha * nrm2(z)) + 0.5 * dot(r, r) + 0.5 * rho * dot(c, c);
}

Vec pfista_step(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                const ProxSpec& prox, double lambda, double gamma, const Vec& x) {
    Vec g = a.apply_adjoint(sub(a.apply(x), b));
    Vec y = x;
    axpy(-gamma, g, y);
    return frame.synthesize(apply_prox(prox, frame.analyze(y), lambda * gamma));
}

SolveReport pfista(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                   const SolverConfig& cfg) {
    auto t0 = Clock::now();
    check_problem(a, b, frame);
    cfg.prox.validate();
    if (!(cfg.lambda > 0.0)) throw std::invalid_argument("pfista: lambda must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("pfista: max_iter must be positive");
    if (!(cfg.tol >= 0.0)) throw std::invalid_argument("pfista: tol must be nonnegative");

    const double gamma = resolve_gamma(a, cfg.gamma);
    const int n = a.cols();

    Vec atb = a.apply_adjoint(b);
    Vec x = cfg.init_zero ? Vec(n, 0.0) : atb;

    // lambda schedule
    std::vector<double> stages;
    if (cfg.continuation && cfg.continuation_stages > 1) {
        double lmax = nrm_inf(frame.analyze(atb));
        if (lmax > cfg.lambda) {
            int s = cfg.continuation_stages;
            for (int i = 0; i < s; ++i) {
                double f = static_cast<double>(i) / static_cast<double>(s - 1);
                stages.push_back(lmax * std::pow(cfg.lambda / lmax, f));
            }
        }
    }
    if (stages.empty()) stages.push_back(cfg.lambda);
    const int per_stage = std::max(1, cfg.max_iter / static_cast<int>(stages.size()));

    SolveReport rep;
    rep.gamma = gamma;
    rep.lambda = cfg.lambda;

    for (std::size_t si = 0; si < stages.size(); ++si) {
        double lambda = stages[si];
        bool last_stage = (si + 1 == stages.size());
        int budget = last_stage ? std::max(1, cfg.max_iter - rep.iterations) : per_stage;

        Vec y = x;
        Vec x_prev = x;
        double t = 1.0;
        for (int k = 0; k < budget; ++k) {
            Vec g = a.apply_adjoint(sub(a.apply(y), b));
            Vec w = y;
            axpy(-gamma, g, w);
            Vec x_next = frame.synthesize(apply_prox(cfg.prox, frame.analyze(w), lambda * gamma));

            double nx = nrm2(x_next);
            if (!std::isfinite(nx)) {
                std::ostringstream os;
                os << "pfista: non-finite iterate at iteration " << rep.iterations + 1
                   << " (lambda " << lambda << ", gamma " << gamma << ")";
                throw std::runtime_error(os.str());
            }

            double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            Vec diff = sub(x_next, x);
            y = x_next;
            axpy((t - 1.0) / t_next, diff, y);

            double base = nrm2(x);
            double rel = base > 0.0 ? nrm2(diff) / base : (nx > 0.0 ? 1.0 : 0.0);

            x_prev = x;
            x = x_next;
            t = t_next;
            ++rep.iterations;
            rep.objective_trace.push_back(objective_analysis(a, b, frame, cfg.prox, lambda, x));
            rep.rel_change_trace.push_back(rel);
            if (rel < cfg.tol) {
                if (last_stage) rep.converged = true;
                break;
            }
        }
    }

    rep.x = x;
    rep.final_objective = objective_analysis(a, b, frame, cfg.prox, cfg.lambda, x);
    rep.wall_time_s = seconds_since(t0);
    return rep;
}

namespace {

// A^T A + rho I as an operator, for the x-step system.
class NormalPlusRidgeOp final : public LinearOperator {
public:
    NormalPlusRidgeOp(const LinearOperator& a, double rho) : a_(&a), rho_(rho) {}
    int rows() const override { return a_->cols(); }
    int cols() const override { return a_->cols(); }
    Vec apply(const Vec& x) const override {
        Vec y = a_->apply_adjoint(a_->apply(x));
        axpy(rho_, x, y);
        return y;
    }
    Vec apply_adjoint(const Vec& y) const override { return apply(y); }

private:
    const LinearOperator* a_;
    double rho_;
};

} // namespace

RassoReport solve_rasso(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                        const RassoConfig& cfg) {
    auto t0 = Clock::now();
    check_problem(a, b, frame);
    if (!(cfg.lambda > 0.0)) throw std::invalid_argument("solve_rasso: lambda must be positive");
    if (!(cfg.alpha > 0.0) || !(cfg.alpha <= 1.0))
        throw std::invalid_argument("solve_rasso: alpha must lie in (0, 1]");
    if (!(cfg.rho > 0.0)) throw std::invalid_argument("solve_rasso: rho must be positive");
    if (!(cfg.tol >= 0.0)) throw std::invalid_argument("solve_rasso: tol must be nonnegative");

    std::vector<double> rhos;
    if (cfg.rho_ramp) {
        for (double r = 1.0; r < cfg.rho; r *= 10.0) rhos.push_back(r);
    }
    rhos.push_back(cfg.rho);

    const int n = a.cols();
    Vec atb = a.apply_adjoint(b);
    Vec x = cfg.init_zero ? Vec(n, 0.0) : atb;
    Vec z = frame.analyze(x);
    ProxSpec shrink{ProxKind::L1MinusAlphaL2, cfg.alpha, 0.5};

    RassoReport rep;
    try {
        for (double rho : rhos) {
            NormalPlusRidgeOp normal(a, rho);
            bool last_stage = (rho == rhos.back());
            for (int k = 0; k < cfg.max_outer; ++k) {
                Vec z_next = apply_prox(shrink, frame.analyze(x), cfg.lambda / rho);
                Vec rhs = atb;
                axpy(rho, frame.synthesize(z_next), rhs);
                CgResult cg = cg_solve(normal, rhs, cfg.cg_tol, cfg.cg_max_iter);

                double dx = nrm2(sub(cg.x, x));
                double dz = nrm2(sub(z_next, z));
                double bx = nrm2(x), bz = nrm2(z);
                double rel_x = bx > 0.0 ? dx / bx : (dx > 0.0 ? 1.0 : 0.0);
                double rel_z = bz > 0.0 ? dz / bz : (dz > 0.0 ? 1.0 : 0.0);

                x = cg.x;
                z = z_next;
                ++rep.outer_iterations;
                rep.objective_trace.push_back(
                    objective_rasso(a, b, frame, cfg.lambda, cfg.alpha, rho, x, z));
                if (!std::isfinite(rep.objective_trace.back()))
                    throw std::runtime_error("solve_rasso: non-finite objective");
                if (std::max(rel_x, rel_z) < cfg.tol) {
                    if (last_stage) rep.converged = true;
                    break;
                }
            }
        }
    } catch (const std::runtime_error& e) {
        std::ostringstream os;
        os << "solve_rasso: inner solve failed at outer iteration " << rep.outer_iterations + 1
           << ": " << e.what();
        throw std::runtime_error(os.str());
    }

    rep.x = x;
    rep.z = z;
    rep.final_objective =
        objective_rasso(a, b, frame, cfg.lambda, cfg.alpha, cfg.rho, x, z);
    rep.wall_time_s = seconds_since(t0);
    return rep;
}

} // namespace frec
