#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "frec/prox.hpp"
#include "frec/rng.hpp"
#include "prox_oracle.hpp"

using namespace frec;
using frec::testing::oracle_objective;
using frec::testing::prox_objective;

namespace {

Vec random_vec(int dim, CounterRng& rng, double scale) {
    Vec v(dim);
    for (double& x : v) x = scale * rng.gaussian();
    return v;
}

} // namespace

TEST_CASE("spec validation") {
    ProxSpec ok;
    CHECK_NOTHROW(ok.validate());

    ProxSpec bad_alpha;
    bad_alpha.kind = ProxKind::L1MinusAlphaL2;
    bad_alpha.alpha = 0.0;
    CHECK_THROWS_AS(bad_alpha.validate(), std::invalid_argument);
    bad_alpha.alpha = 1.5;
    CHECK_THROWS_AS(bad_alpha.validate(), std::invalid_argument);

    ProxSpec bad_p;
    bad_p.kind = ProxKind::Lp;
    bad_p.p = 1.0;
    CHECK_THROWS_AS(bad_p.validate(), std::invalid_argument);
    bad_p.p = 0.0;
    CHECK_THROWS_AS(bad_p.validate(), std::invalid_argument);
}

TEST_CASE("soft threshold closed form") {
    const Vec b = {3.0, -0.4, 0.5, -2.0, 0.0};
    const Vec z = prox_l1(b, 0.5);
    CHECK(z[0] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(z[1] == 0.0);
    CHECK(z[2] == 0.0);
    CHECK(z[3] == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(z[4] == 0.0);
}

TEST_CASE("difference-of-norms shrink: the three regimes") {
    const double lambda = 1.0;
    const double alpha = 0.8;

    SUBCASE("large input: soft threshold then radial stretch") {
        const Vec b = {3.0, -2.0, 0.5};
        const Vec z = prox_l1_minus_alpha_l2(b, lambda, alpha);
        Vec soft = prox_l1(b, lambda);
        const double sn = nrm2(soft);
        const double stretch = (sn + alpha * lambda) / sn;
        for (int i = 0; i < 3; ++i)
            CHECK(z[i] == doctest::Approx(soft[i] * stretch).epsilon(1e-14));
    }

    SUBCASE("intermediate input: one surviving coordinate") {
        // (1 - alpha) * lambda < ||b||_inf <= lambda
        const Vec b = {0.1, -0.9, 0.2};
        const Vec z = prox_l1_minus_alpha_l2(b, lambda, alpha);
        CHECK(z[0] == 0.0);
        CHECK(z[2] == 0.0);
        CHECK(std::abs(z[1]) ==
              doctest::Approx(0.9 + (alpha - 1.0) * lambda).epsilon(1e-14));
        CHECK(z[1] < 0.0); // sign follows the input
    }

    SUBCASE("tie on the max magnitude goes to the lowest index") {
        const Vec b = {-0.9, 0.9, 0.3};
        const Vec z = prox_l1_minus_alpha_l2(b, lambda, alpha);
        CHECK(z[0] != 0.0);
        CHECK(z[1] == 0.0);
        CHECK(z[2] == 0.0);
    }

    SUBCASE("small input: zero") {
        const Vec b = {0.1, -0.15, 0.05};
        const Vec z = prox_l1_minus_alpha_l2(b, lambda, alpha);
        for (double v : z) CHECK(v == 0.0);
    }
}

TEST_CASE("difference-of-norms shrink beats the brute-force oracle") {
    CounterRng rng(2024);
    ProxSpec spec;
    spec.kind = ProxKind::L1MinusAlphaL2;
    for (int trial = 0; trial < 120; ++trial) {
        const int dim = 1 + static_cast<int>(rng.below(3));
        const double lambda = 0.05 + 2.0 * rng.uniform();
        spec.alpha = 0.05 + 0.95 * rng.uniform();
        const Vec b = random_vec(dim, rng, 1.5);
        const Vec z = prox_l1_minus_alpha_l2(b, lambda, spec.alpha);
        const double at_z = prox_objective(spec, b, lambda, z);
        const double best = oracle_objective(spec, b, lambda);
        CHECK(at_z <= best + 1e-6);
    }
}

TEST_CASE("scalar p-power shrink: threshold and oracle") {
    SUBCASE("zero below the jump threshold, nonzero above") {
        const double lambda = 0.3, p = 0.5;
        const double beta = std::pow(2.0 * lambda * (1.0 - p), 1.0 / (2.0 - p));
        const double tau = beta + lambda * p * std::pow(beta, p - 1.0);
        CHECK(prox_lp_scalar(0.9 * tau, lambda, p) == 0.0);
        CHECK(prox_lp_scalar(1.1 * tau, lambda, p) > 0.0);
        CHECK(prox_lp_scalar(-1.1 * tau, lambda, p) < 0.0);
        CHECK(prox_lp_scalar(0.0, lambda, p) == 0.0);
    }

    SUBCASE("objective at the output matches the oracle") {
        CounterRng rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            const double b = 3.0 * rng.gaussian();
            const double lambda = 0.05 + 1.5 * rng.uniform();
            const double p = 0.05 + 0.9 * rng.uniform();
            const double z = prox_lp_scalar(b, lambda, p);
            ProxSpec spec;
            spec.kind = ProxKind::Lp;
            spec.p = p;
            const double at_z = prox_objective(spec, Vec{b}, lambda, Vec{z});
            CHECK(at_z <= frec::testing::oracle_objective_scalar_lp(b, lambda, p) + 1e-6);
        }
    }

    SUBCASE("vector form is componentwise") {
        const Vec b = {2.0, -0.1, 0.7};
        const Vec z = prox_lp(b, 0.4, 0.5);
        for (int i = 0; i < 3; ++i) CHECK(z[i] == prox_lp_scalar(b[i], 0.4, 0.5));
    }
}

TEST_CASE("dispatch and penalty values") {
    const Vec b = {1.0, -2.0, 0.2};
    ProxSpec l1;
    CHECK(apply_prox(l1, b, 0.5) == prox_l1(b, 0.5));

    ProxSpec dn;
    dn.kind = ProxKind::L1MinusAlphaL2;
    dn.alpha = 0.7;
    CHECK(apply_prox(dn, b, 0.5) == prox_l1_minus_alpha_l2(b, 0.5, 0.7));

    ProxSpec lp;
    lp.kind = ProxKind::Lp;
    lp.p = 0.5;
    CHECK(apply_prox(lp, b, 0.5) == prox_lp(b, 0.5, 0.5));

    const Vec z = {3.0, -4.0, 0.0};
    CHECK(penalty_value(l1, z, 2.0) == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(penalty_value(dn, z, 1.0) == doctest::Approx(7.0 - 0.7 * 5.0).epsilon(1e-14));
    CHECK(penalty_value(lp, z, 1.0) ==
          doctest::Approx(std::sqrt(3.0) + 2.0).epsilon(1e-14));
}

TEST_CASE("difference-of-norms shrink with alpha = 1 keeps exact zeros exact") {
    // ||b||_inf <= (1 - alpha) * lambda collapses to ||b||_inf = 0 only.
    const Vec zero = {0.0, 0.0};
    const Vec z = prox_l1_minus_alpha_l2(zero, 0.5, 1.0);
    for (double v : z) CHECK(v == 0.0);
}
