#pragma once

#include "frec/frames.hpp"
#include "frec/linop.hpp"
#include "frec/prox.hpp"

namespace frec {

struct SolverConfig {
    ProxSpec prox;
    double lambda = 1e-3;    // final regularization weight
    double gamma = 0.0;      // step size; <= 0 selects 0.99 / ||A||_2^2
    int max_iter = 1000;
    double tol = 1e-6;       // relative-change stopping threshold
    bool init_zero = false;  // default start is A^T b
    // Geometric lambda schedule from ||D^T A^T b||_inf down to `lambda`,
    // warm starting each stage. Helps the nonconvex penalties find the
    // noiseless-recovery basin.
    bool continuation = false;
    int continuation_stages = 10;
};

struct SolveReport {
    Vec x;
    int iterations = 0; // total across continuation stages
    bool converged = false;
    double gamma = 0.0;
    double lambda = 0.0; // final-stage weight
    double final_objective = 0.0;
    // One entry per iteration; objectives are evaluated with the lambda of
    // the stage the iteration belongs to.
    std::vector<double> objective_trace;
    std::vector<double> rel_change_trace;
    double wall_time_s = 0.0;
};

// Proximal FISTA restricted to the synthesis range: each step shrinks the
// analysis coefficients of the gradient-descended iterate and maps them
// back through the frame. Throws on non-finite iterates and invalid steps.
SolveReport pfista(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                   const SolverConfig& cfg);

struct RassoConfig {
    double lambda = 1e-3;
    double alpha = 1.0;
    double rho = 1.0;       // coupling weight
    int max_outer = 500;
    double tol = 1e-8;      // joint relative change over (x, z)
    double cg_tol = 1e-10;
    int cg_max_iter = 0;    // 0: cg picks 10*dim + 50
    bool init_zero = false;
    // Warm-started geometric schedule 1 -> rho (decade steps). Off by
    // default: a fixed-rho run keeps the objective trace nonincreasing,
    // which the ramp trades away for usable large-rho convergence.
    bool rho_ramp = false;
};

struct RassoReport {
    Vec x;
    Vec z;
    int outer_iterations = 0;
    bool converged = false;
    double final_objective = 0.0;
    // One entry per outer iteration, evaluated at that iteration's rho.
    std::vector<double> objective_trace;
    double wall_time_s = 0.0;
};

// Exact alternating minimization of the splitting objective: a shrink on
// z = D^T x and a CG solve of (A^T A + rho I) x = A^T b + rho D z, the
// identity D D^T = I making the x-step system this simple.
RassoReport solve_rasso(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                        const RassoConfig& cfg);

// lambda * g(D^T x) + 0.5 * ||A x - b||^2 with g given by the prox spec.
double objective_analysis(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                          const ProxSpec& prox, double lambda, const Vec& x);

// Splitting objective: lambda*(||z||_1 - alpha*||z||_2) + 0.5*||Ax - b||^2
// + (rho/2)*||D^T x - z||^2.
double objective_rasso(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                       double lambda, double alpha, double rho, const Vec& x, const Vec& z);

// One exact proximal gradient step at (x, lambda): D Prox(D^T(x - gamma A^T(Ax - b))).
// Exposed so convergence can be certified by how little a further step moves.
Vec pfista_step(const LinearOperator& a, const Vec& b, const TightFrame& frame,
                const ProxSpec& prox, double lambda, double gamma, const Vec& x);

} // namespace frec
