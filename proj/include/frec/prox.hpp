#pragma once

#include <string>

#include "frec/linalg.hpp"

namespace frec {

enum class ProxKind { L1, L1MinusAlphaL2, Lp };

// Which separable (or nearly separable) penalty a solver shrinks with.
struct ProxSpec {
    ProxKind kind = ProxKind::L1;
    double alpha = 1.0; // difference-of-norms weight, (0, 1]
    double p = 0.5;     // quasinorm exponent, (0, 1)

    void validate() const; // throws std::invalid_argument
    std::string name() const;
};

// Componentwise soft threshold, the exact minimizer of
// lambda*||z||_1 + 0.5*||z - b||^2.
Vec prox_l1(const Vec& b, double lambda);

// Exact minimizer of lambda*(||z||_1 - alpha*||z||_2) + 0.5*||z - b||^2.
// Three regimes in ||b||_inf: soft threshold plus a radial stretch, a
// single surviving coordinate, or zero. Ties on the max-magnitude entry go
// to the lowest index.
Vec prox_l1_minus_alpha_l2(const Vec& b, double lambda, double alpha);

// Scalar minimizer of lambda*|z|^p + 0.5*(z - b)^2 for 0 < p < 1. Zero below
// the jump threshold; otherwise the larger stationary point, found by a
// bisection-safeguarded Newton iteration and compared against zero by
// objective value (ties prefer zero).
double prox_lp_scalar(double b, double lambda, double p);

Vec prox_lp(const Vec& b, double lambda, double p);

// Dispatch on spec.kind with threshold weight `lambda`.
Vec apply_prox(const ProxSpec& spec, const Vec& b, double lambda);

// Penalty value g(z) used in objectives: lambda*(||z||_1 - alpha*||z||_2),
// lambda*||z||_1, or lambda*sum |z_i|^p.
double penalty_value(const ProxSpec& spec, const Vec& z, double lambda);

} // namespace frec
