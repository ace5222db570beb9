#include <algorithm>
#include <cmath>
#include <set>

#include <doctest.h>

#include "frec/experiments.hpp"
#include "frec/frames.hpp"
#include "frec/linop.hpp"
#include "frec/sidwt.hpp"

using namespace frec;

TEST_CASE("gaussian matrix draws are seeded and roughly standard") {
    const Mat a = gaussian_matrix(1000, 1, 77);
    const Mat b = gaussian_matrix(1000, 1, 77);
    const Mat c = gaussian_matrix(1000, 1, 78);
    CHECK(a.a == b.a);
    CHECK(a.a != c.a);

    double mean = 0.0;
    for (double v : a.a) mean += v;
    mean /= 1000.0;
    double var = 0.0;
    for (double v : a.a) var += (v - mean) * (v - mean);
    var /= 999.0;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(1000.0));
    CHECK(std::fabs(var - 1.0) < 0.2);
}

TEST_CASE("cosparse instances annihilate on the chosen rows") {
    SUBCASE("square frame") {
        const CosparseInstance inst = gen_cosparse(64, 64, 40, 11);
        CHECK(inst.cosupport.size() == 40);
        CHECK(inst.frame.rows == 64);
        CHECK(inst.frame.cols == 64);
        const DenseFrame frame(inst.frame);
        const Vec coef = frame.analyze(inst.x0);
        for (int i : inst.cosupport) CHECK(std::fabs(coef[i]) < 1e-10);
        CHECK(nrm2(inst.x0) > 1e-6);
    }
    SUBCASE("redundant frame") {
        const CosparseInstance inst = gen_cosparse(32, 48, 20, 12);
        const DenseFrame frame(inst.frame);
        const Vec coef = frame.analyze(inst.x0);
        for (int i : inst.cosupport) CHECK(std::fabs(coef[i]) < 1e-10);
        std::set<int> uniq(inst.cosupport.begin(), inst.cosupport.end());
        CHECK(uniq.size() == inst.cosupport.size());
    }
    SUBCASE("no constraints") {
        const CosparseInstance inst = gen_cosparse(16, 16, 0, 13);
        CHECK(inst.cosupport.empty());
        CHECK(nrm2(inst.x0) > 1e-6);
    }
    SUBCASE("maximal cosparsity leaves one analysis coefficient") {
        const CosparseInstance inst = gen_cosparse(24, 24, 23, 14);
        const DenseFrame frame(inst.frame);
        const Vec coef = frame.analyze(inst.x0);
        int big = 0;
        for (double v : coef)
            if (std::fabs(v) > 1e-8) ++big;
        CHECK(big == 1);
    }
    SUBCASE("many seeds") {
        for (std::uint64_t seed = 100; seed < 150; ++seed) {
            const CosparseInstance inst = gen_cosparse(20, 26, 12, seed);
            const DenseFrame frame(inst.frame);
            const Vec coef = frame.analyze(inst.x0);
            double worst = 0.0;
            for (int i : inst.cosupport) worst = std::max(worst, std::fabs(coef[i]));
            CHECK(worst < 1e-10);
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(gen_cosparse(16, 8, 2, 1), std::invalid_argument);
        CHECK_THROWS_AS(gen_cosparse(16, 16, 16, 1), std::invalid_argument);
        CHECK_THROWS_AS(gen_cosparse(16, 16, -1, 1), std::invalid_argument);
    }
}

TEST_CASE("measurements are the exact forward image") {
    CosparseInstance inst = gen_cosparse(24, 24, 12, 15);
    add_measurements(inst, 18, 16);
    CHECK(inst.a.rows == 18);
    CHECK(inst.a.cols == 24);
    const Vec ax = matvec(inst.a, inst.x0);
    CHECK(nrm_inf(sub(ax, inst.b)) == 0.0);
}

TEST_CASE("method parsing accepts the documented names") {
    CHECK(method_from_name("l1").prox.kind == ProxKind::L1);
    CHECK(method_from_name("l1l2").prox.kind == ProxKind::L1MinusAlphaL2);
    CHECK(method_from_name("l1l2").prox.alpha == 1.0);
    CHECK(method_from_name("l1l2_0.5").prox.alpha == doctest::Approx(0.5));
    CHECK(method_from_name("lp_0.5").prox.kind == ProxKind::Lp);
    CHECK(method_from_name("lp_0.9").prox.p == doctest::Approx(0.9));
    CHECK(method_from_name("zero_fill").zero_fill);
    CHECK(method_from_name("l1").name == "l1");

    CHECK_THROWS_AS(method_from_name("l2"), std::invalid_argument);
    CHECK_THROWS_AS(method_from_name("l1l2_0"), std::invalid_argument);
    CHECK_THROWS_AS(method_from_name("l1l2_1.5"), std::invalid_argument);
    CHECK_THROWS_AS(method_from_name("lp_1.0"), std::invalid_argument);
    CHECK_THROWS_AS(method_from_name("lp_0.5x"), std::invalid_argument);
    CHECK_THROWS_AS(method_from_name(""), std::invalid_argument);
}

TEST_CASE("phase sweep on an easy corner succeeds and is reproducible") {
    PhaseGrid grid;
    grid.n = 32;
    grid.varrho = {0.9};
    grid.rho = {0.3};
    grid.trials = 6;
    grid.max_iter = 600;
    const std::vector<MethodSpec> methods = {method_from_name("l1l2")};

    const PhaseResult r1 = run_phase_transition(grid, methods, 21);
    REQUIRE(r1.cells.size() == 1);
    const PhaseCell& cell = r1.cells[0];
    CHECK(cell.m == 29); // round(0.9 * 32)
    CHECK(cell.ell == 32 - static_cast<int>(std::lround(0.3 * 29)));
    CHECK(cell.counted == 6);
    CHECK(cell.skipped == 0);
    CHECK(cell.success_rate() == doctest::Approx(1.0));

    const PhaseResult r2 = run_phase_transition(grid, methods, 21);
    CHECK(r2.cells[0].successes == r1.cells[0].successes);
    CHECK(r2.cells[0].counted == r1.cells[0].counted);

    const PhaseResult r3 = run_phase_transition(grid, methods, 22);
    CHECK(r3.cells[0].counted == 6);
}

TEST_CASE("phase sweep is threading-invariant") {
    PhaseGrid grid;
    grid.n = 24;
    grid.varrho = {0.5, 0.8};
    grid.rho = {0.4, 0.7};
    grid.trials = 4;
    grid.max_iter = 400;
    const std::vector<MethodSpec> methods = {method_from_name("l1"),
                                             method_from_name("l1l2")};

    const PhaseResult par = run_phase_transition(grid, methods, 31, true);
    const PhaseResult ser = run_phase_transition(grid, methods, 31, false);
    REQUIRE(par.cells.size() == ser.cells.size());
    REQUIRE(par.cells.size() == 8);
    for (std::size_t i = 0; i < par.cells.size(); ++i) {
        CHECK(par.cells[i].successes == ser.cells[i].successes);
        CHECK(par.cells[i].counted == ser.cells[i].counted);
        CHECK(par.cells[i].skipped == ser.cells[i].skipped);
        CHECK(par.cells[i].method == ser.cells[i].method);
        CHECK(par.cells[i].rho == ser.cells[i].rho);
        CHECK(par.cells[i].varrho == ser.cells[i].varrho);
    }
    CHECK(par.method_names == std::vector<std::string>{"l1", "l1l2"});
}

TEST_CASE("phase grid validation") {
    PhaseGrid grid;
    grid.varrho = {0.5};
    grid.rho = {};
    CHECK_THROWS_AS(run_phase_transition(grid, {method_from_name("l1")}, 1),
                    std::invalid_argument);
    grid.rho = {0.5};
    CHECK_THROWS_AS(run_phase_transition(grid, {}, 1), std::invalid_argument);
    PhaseGrid bad = grid;
    bad.varrho = {1.5};
    CHECK_THROWS_AS(run_phase_transition(bad, {method_from_name("l1")}, 1),
                    std::invalid_argument);
}

TEST_CASE("radial masks are symmetric, anchored, and sized as documented") {
    SUBCASE("single line") {
        const RadialMask mask = radial_mask(64, 1);
        CHECK(mask.count() == 64);
        CHECK(mask.sampling_rate == doctest::Approx(1.0 / 64.0));
        CHECK(mask.at(32, 32));
    }
    SUBCASE("structure") {
        const int n = 64;
        const RadialMask mask = radial_mask(n, 24);
        CHECK(mask.at(n / 2, n / 2));
        // point symmetry about DC; cells in row/col 0 have no mirror partner
        for (int r = 1; r < n; ++r)
            for (int c = 1; c < n; ++c)
                CHECK(mask.at(r, c) == mask.at(n - r, n - c));
        CHECK(mask.sampling_rate ==
              doctest::Approx(static_cast<double>(mask.count()) / (n * n)));
        // doubling the line count keeps every existing angle
        const RadialMask half = radial_mask(n, 12);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (half.at(r, c)) CHECK(mask.at(r, c));
    }
    SUBCASE("documented rates at the reference sizes") {
        const RadialMask m256 = radial_mask(256, 76);
        CHECK(std::fabs(m256.sampling_rate - 0.3081) < 0.020);
        const RadialMask m512 = radial_mask(512, 76);
        CHECK(std::fabs(m512.sampling_rate - 0.1617) < 0.015);
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(radial_mask(63, 8), std::invalid_argument);
        CHECK_THROWS_AS(radial_mask(64, 0), std::invalid_argument);
    }
}

TEST_CASE("phantom image has the expected landmarks") {
    const Mat img = shepp_logan(128);
    CHECK(img.rows == 128);
    CHECK(img.cols == 128);
    CHECK(img.a[64 * 128 + 64] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(img.a[0] == 0.0);
    double lo = 1e300, hi = -1e300;
    for (double v : img.a) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    CHECK(hi > 0.9);

    // Left-right structure is broadly mirrored, but the standard table is
    // not an even function of x: the two tilted lateral ellipses carry
    // different semi-axes (0.11/0.31 vs 0.16/0.41) and two of the small
    // bottom ellipses sit off-center, so a few percent of pixels differ.
    int asym = 0;
    for (int r = 0; r < 128; ++r)
        for (int c = 0; c < 128; ++c)
            if (std::fabs(img.a[r * 128 + c] - img.a[r * 128 + (127 - c)]) > 1e-9)
                ++asym;
    CHECK(asym <= 128 * 128 * 7 / 100);
}

TEST_CASE("partial Fourier operator is a faithful adjoint pair") {
    const RadialMask mask = radial_mask(32, 10);
    const MriOp op(mask);
    CHECK(op.cols() == 32 * 32);
    CHECK(op.rows() == 2 * static_cast<int>(mask.count()));

    CounterRng rng(41);
    for (int t = 0; t < 5; ++t) {
        Vec x(op.cols()), y(op.rows());
        for (double& v : x) v = rng.gaussian();
        for (double& v : y) v = rng.gaussian();
        const double lhs = dot(op.apply(x), y);
        const double rhs = dot(x, op.apply_adjoint(y));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("fully sampled operator composes to the identity") {
    const int n = 16;
    RadialMask full;
    full.n = n;
    full.lines = 0;
    full.mask.assign(static_cast<std::size_t>(n) * n, 1);
    full.sampling_rate = 1.0;
    const MriOp op(full);

    CounterRng rng(43);
    Vec x(n * n);
    for (double& v : x) v = rng.gaussian();
    const Vec back = op.apply_adjoint(op.apply(x));
    CHECK(nrm_inf(sub(back, x)) < 1e-12);
}

TEST_CASE("reconstruction pipeline handles the reference methods") {
    const int n = 32;
    const Mat img = shepp_logan(n);
    const Sidwt2D frame(n, 3);

    SUBCASE("full sampling recovers exactly") {
        RadialMask full;
        full.n = n;
        full.lines = 0;
        full.mask.assign(static_cast<std::size_t>(n) * n, 1);
        full.sampling_rate = 1.0;

        SolverConfig cfg;
        cfg.prox.kind = ProxKind::L1;
        cfg.max_iter = 200;
        const MriResult zf =
            mri_reconstruct(img, full, frame, method_from_name("zero_fill"), cfg);
        CHECK(zf.re < 1e-10);
        CHECK(zf.method == "zero_fill");

        cfg.lambda = 1e-12;
        const MriResult l1 =
            mri_reconstruct(img, full, frame, method_from_name("l1"), cfg);
        CHECK(l1.re < 1e-6);
    }
    SUBCASE("undersampled solve beats the adjoint image") {
        const RadialMask mask = radial_mask(n, 12);
        SolverConfig cfg;
        cfg.max_iter = 150;
        cfg.tol = 1e-8;
        const MriResult zf =
            mri_reconstruct(img, mask, frame, method_from_name("zero_fill"), cfg);
        const MriResult l1 =
            mri_reconstruct(img, mask, frame, method_from_name("l1"), cfg);
        CHECK(l1.re < zf.re);
        CHECK(l1.iterations > 0);
        CHECK(l1.lambda > 0.0);
        CHECK(l1.difference.rows == n);
        CHECK(zf.re > 0.0);
    }
    SUBCASE("shape mismatch is rejected") {
        const RadialMask mask = radial_mask(16, 6);
        SolverConfig cfg;
        CHECK_THROWS_AS(
            mri_reconstruct(img, mask, frame, method_from_name("l1"), cfg),
            std::invalid_argument);
    }
}
