// Timing comparison of the OpenMP kernels against their serial reference:
// exhaustive isometry-constant enumeration and phase-grid trials. Prints a
// small table; correctness of the parallel results is asserted against the
// serial ones before any time is reported.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "frec/experiments.hpp"
#include "frec/frames.hpp"
#include "frec/parallel.hpp"
#include "frec/theory.hpp"

using namespace frec;

namespace {

template <typename F>
double time_s(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.3fs %10.3fs %8.2fx\n", name, serial, parallel,
                parallel > 0.0 ? serial / parallel : 0.0);
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", effective_threads());
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const int n = 12, dim = 22, m = 30, s = 3;
        Mat a = gaussian_matrix(m, n, 7);
        for (double& v : a.a) v /= std::sqrt(static_cast<double>(m));
        const Mat d = *random_tight_frame(n, dim, 8).dense();

        CertMode serial_mode;
        serial_mode.parallel = false;
        CertMode parallel_mode;

        RipEstimate rs, rp;
        const double t_serial = time_s([&] { rs = drip_delta(a, d, s, serial_mode); });
        const double t_parallel = time_s([&] { rp = drip_delta(a, d, s, parallel_mode); });
        if (rs.delta != rp.delta || rs.witness_support != rp.witness_support)
            throw std::runtime_error("bench: isometry enumeration mismatch");
        report("drip_delta (C(22,3) eigs)", t_serial, t_parallel);

        RocEstimate os, op;
        const double u_serial = time_s([&] { os = droc_theta(a, d, s, 2, serial_mode); });
        const double u_parallel = time_s([&] { op = droc_theta(a, d, s, 2, parallel_mode); });
        if (os.theta != op.theta || os.witness_s != op.witness_s)
            throw std::runtime_error("bench: cross-support enumeration mismatch");
        report("droc_theta (disjoint pairs)", u_serial, u_parallel);
    }

    {
        PhaseGrid grid;
        grid.n = 32;
        grid.varrho = {0.5, 0.75};
        grid.rho = {0.5};
        grid.trials = 6;
        grid.max_iter = 400;
        const std::vector<MethodSpec> methods = {method_from_name("l1l2")};

        PhaseResult ps, pp;
        const double t_serial =
            time_s([&] { ps = run_phase_transition(grid, methods, 42, false); });
        const double t_parallel =
            time_s([&] { pp = run_phase_transition(grid, methods, 42, true); });
        for (std::size_t i = 0; i < ps.cells.size(); ++i)
            if (ps.cells[i].successes != pp.cells[i].successes)
                throw std::runtime_error("bench: phase table mismatch");
        report("phase grid (2 cells x 6)", t_serial, t_parallel);
    }

    return 0;
}
