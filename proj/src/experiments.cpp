#include "frec/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "frec/parallel.hpp"
#include "frec/fft.hpp"
#include "frec/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace frec {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<int> random_rows(int d, int ell, CounterRng& rng) {
    std::vector<int> pool(d);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < ell; ++i) {
        int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(d - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(ell);
    std::sort(pool.begin(), pool.end());
    return pool;
}

// Rows of the analysis operator D^T indexed by `rows`, as an ell x n matrix.
Mat analysis_rows(const Mat& frame, const std::vector<int>& rows) {
    Mat os(static_cast<int>(rows.size()), frame.rows);
    for (int i = 0; i < os.rows; ++i)
        for (int r = 0; r < frame.rows; ++r)
            os.a[static_cast<std::size_t>(i) * os.cols + r] =
                frame.a[static_cast<std::size_t>(r) * frame.cols + rows[i]];
    return os;
}

double parse_suffix(const std::string& name, std::size_t from) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(name.substr(from), &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("method: cannot parse parameter in '" + name + "'");
    }
    if (from + used != name.size())
        throw std::invalid_argument("method: trailing junk in '" + name + "'");
    return v;
}

struct TrialRecord {
    // 0 skipped (no instance), 1 success, 2 unsuccessful, 3 solver failure
    unsigned char status = 0;
    double time_s = 0.0;
};

int ratio_count(double ratio, int base) {
    return static_cast<int>(std::lround(ratio * base));
}

} // namespace

Mat gaussian_matrix(int m, int n, std::uint64_t seed) {
    if (m < 1 || n < 1) throw std::invalid_argument("gaussian_matrix: m, n must be >= 1");
    Mat out(m, n);
    CounterRng rng(seed);
    for (double& v : out.a) v = rng.gaussian();
    return out;
}

CosparseInstance gen_cosparse(int n, int d, int ell, std::uint64_t seed) {
    if (n < 1 || d < n) throw std::invalid_argument("gen_cosparse: need 1 <= n <= d");
    if (ell < 0 || ell >= n) throw std::invalid_argument("gen_cosparse: need 0 <= ell < n");

    CosparseInstance inst;
    inst.seed = seed;
    inst.frame = *random_tight_frame(n, d, derive_seed(seed, 0)).dense();

    CounterRng signal_rng(derive_seed(seed, 1));
    Vec y = gaussian_vec(n, signal_rng);
    if (ell == 0) {
        inst.x0 = y;
        return inst;
    }

    CounterRng pick_rng(derive_seed(seed, 2));
    const int attempts = 10;
    for (int attempt = 0; attempt <= attempts; ++attempt) {
        const bool last = attempt == attempts;
        std::vector<int> rows = random_rows(d, ell, pick_rng);
        Mat os = analysis_rows(inst.frame, rows);
        Mat ot = transpose(os);
        SymEig eig = symmetric_eig(matmul_tn(ot, ot));
        const double lam_max = eig.lambda[ell - 1];
        const double cut = 1e-12 * std::max(lam_max, 1.0);
        if (eig.lambda[0] <= cut && !last) continue; // singular Gram: redraw

        // w = pinv(Os Os^T) (Os y); on the last attempt small eigenvalues
        // are dropped instead of inverted.
        Vec r = matvec(os, y);
        Vec c(ell, 0.0);
        for (int j = 0; j < ell; ++j) {
            double cj = 0.0;
            for (int i = 0; i < ell; ++i)
                cj += eig.vectors.a[static_cast<std::size_t>(i) * ell + j] * r[i];
            c[j] = eig.lambda[j] > cut ? cj / eig.lambda[j] : 0.0;
        }
        Vec w(ell, 0.0);
        for (int i = 0; i < ell; ++i) {
            double wi = 0.0;
            for (int j = 0; j < ell; ++j)
                wi += eig.vectors.a[static_cast<std::size_t>(i) * ell + j] * c[j];
            w[i] = wi;
        }
        Vec x0 = y;
        Vec back = matvec_t(os, w);
        for (int i = 0; i < n; ++i) x0[i] -= back[i];

        const double resid = nrm_inf(matvec(os, x0));
        if ((resid < 1e-10 && nrm2(x0) > 1e-8 * nrm2(y)) || last) {
            if (resid >= 1e-10)
                throw std::runtime_error("gen_cosparse: annihilation residual " +
                                         std::to_string(resid) + " at the attempt cap");
            inst.cosupport = std::move(rows);
            inst.x0 = std::move(x0);
            return inst;
        }
    }
    throw std::runtime_error("gen_cosparse: unreachable");
}

void add_measurements(CosparseInstance& inst, int m, std::uint64_t seed) {
    const int n = static_cast<int>(inst.x0.size());
    if (n == 0) throw std::invalid_argument("add_measurements: empty instance");
    inst.a = gaussian_matrix(m, n, seed);
    inst.b = matvec(inst.a, inst.x0);
}

MethodSpec method_from_name(const std::string& name) {
    MethodSpec spec;
    spec.name = name;
    if (name == "zero_fill") {
        spec.zero_fill = true;
        return spec;
    }
    if (name == "l1") {
        spec.prox.kind = ProxKind::L1;
        return spec;
    }
    if (name == "l1l2" || name.rfind("l1l2_", 0) == 0) {
        spec.prox.kind = ProxKind::L1MinusAlphaL2;
        spec.prox.alpha = name == "l1l2" ? 1.0 : parse_suffix(name, 5);
        if (!(spec.prox.alpha > 0.0 && spec.prox.alpha <= 1.0))
            throw std::invalid_argument("method: alpha must be in (0, 1] in '" + name + "'");
        return spec;
    }
    if (name.rfind("lp_", 0) == 0) {
        spec.prox.kind = ProxKind::Lp;
        spec.prox.p = parse_suffix(name, 3);
        if (!(spec.prox.p > 0.0 && spec.prox.p < 1.0))
            throw std::invalid_argument("method: p must be in (0, 1) in '" + name + "'");
        return spec;
    }
    throw std::invalid_argument("method: unknown name '" + name + "'");
}

namespace {

std::vector<double> ratio_steps(int count, double step) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = (i + 1) * step;
    return out;
}

} // namespace

PhaseGrid desk_phase_grid() {
    PhaseGrid g;
    g.n = 64;
    g.varrho = ratio_steps(10, 0.1);
    g.rho = ratio_steps(10, 0.1);
    g.trials = 20;
    return g;
}

PhaseGrid full_phase_grid() {
    PhaseGrid g;
    g.n = 100;
    g.varrho = ratio_steps(20, 0.05);
    g.rho = ratio_steps(20, 0.05);
    g.trials = 100;
    return g;
}

PhaseResult run_phase_transition(const PhaseGrid& grid, const std::vector<MethodSpec>& methods,
                                 std::uint64_t seed, bool parallel) {
    if (grid.n < 2) throw std::invalid_argument("phase: n must be >= 2");
    if (grid.redundancy < 1.0) throw std::invalid_argument("phase: redundancy must be >= 1");
    if (grid.varrho.empty() || grid.rho.empty())
        throw std::invalid_argument("phase: empty ratio list");
    for (double v : grid.varrho)
        if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("phase: varrho outside (0, 1]");
    for (double v : grid.rho)
        if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("phase: rho outside (0, 1]");
    if (grid.trials < 1) throw std::invalid_argument("phase: trials must be >= 1");
    if (methods.empty()) throw std::invalid_argument("phase: no methods");
    for (const MethodSpec& m : methods) {
        if (m.zero_fill) throw std::invalid_argument("phase: zero_fill is image-only");
        m.prox.validate();
    }

    const int n = grid.n;
    const int d = ratio_count(grid.redundancy, n);
    const int nv = static_cast<int>(grid.varrho.size());
    const int nr = static_cast<int>(grid.rho.size());
    const int nm = static_cast<int>(methods.size());
    const int cells = nr * nv;
    const int tasks = cells * grid.trials;

    std::vector<TrialRecord> records(static_cast<std::size_t>(tasks) * nm);

    int want = effective_threads();
    if (!parallel) want = 1;

#pragma omp parallel for schedule(dynamic) num_threads(want) if (want > 1)
    for (int task = 0; task < tasks; ++task) {
        const int cell = task / grid.trials;
        const int trial = task % grid.trials;
        const int ir = cell / nv;
        const int iv = cell % nv;
        const int m = std::max(1, ratio_count(grid.varrho[iv], n));
        const int ell = std::min(n - 1, std::max(0, n - ratio_count(grid.rho[ir], m)));
        TrialRecord* rec = &records[static_cast<std::size_t>(task) * nm];

        const std::uint64_t tseed = derive_seed(seed, static_cast<std::uint64_t>(cell),
                                                static_cast<std::uint64_t>(trial));
        CosparseInstance inst;
        try {
            inst = gen_cosparse(n, d, ell, tseed);
            add_measurements(inst, m, derive_seed(tseed, 6));
        } catch (const std::exception&) {
            continue; // statuses stay 0: skipped for every method
        }

        const DenseFrame fr(inst.frame);
        const DenseOp op(inst.a);
        const double x0n = nrm2(inst.x0);
        const double scale = std::max(nrm_inf(fr.analyze(op.apply_adjoint(inst.b))), 1e-300);

        for (int im = 0; im < nm; ++im) {
            SolverConfig cfg;
            cfg.prox = methods[im].prox;
            cfg.lambda = grid.lambda_rel * scale;
            cfg.max_iter = grid.max_iter;
            cfg.tol = grid.tol;
            cfg.continuation = true;
            try {
                SolveReport rep = pfista(op, inst.b, fr, cfg);
                const double rel = nrm2(sub(rep.x, inst.x0)) / x0n;
                rec[im].status = rel < grid.eps ? 1 : 2;
                rec[im].time_s = rep.wall_time_s;
            } catch (const std::exception&) {
                rec[im].status = 3;
            }
        }
    }

    PhaseResult out;
    out.grid = grid;
    out.seed = seed;
    for (const MethodSpec& m : methods) out.method_names.push_back(m.name);
    out.cells.reserve(static_cast<std::size_t>(cells) * nm);
    for (int ir = 0; ir < nr; ++ir) {
        for (int iv = 0; iv < nv; ++iv) {
            const int cell = ir * nv + iv;
            for (int im = 0; im < nm; ++im) {
                PhaseCell pc;
                pc.rho = grid.rho[ir];
                pc.varrho = grid.varrho[iv];
                pc.method = methods[im].name;
                pc.m = std::max(1, ratio_count(grid.varrho[iv], n));
                pc.d = d;
                pc.ell = std::min(n - 1, std::max(0, n - ratio_count(grid.rho[ir], pc.m)));
                double time_sum = 0.0;
                for (int trial = 0; trial < grid.trials; ++trial) {
                    const TrialRecord& rec =
                        records[(static_cast<std::size_t>(cell) * grid.trials + trial) * nm + im];
                    if (rec.status == 0) {
                        ++pc.skipped;
                        continue;
                    }
                    ++pc.counted;
                    time_sum += rec.time_s;
                    if (rec.status == 1) ++pc.successes;
                    if (rec.status == 3) ++pc.solver_failures;
                }
                pc.mean_time_s = pc.counted > 0 ? time_sum / pc.counted : 0.0;
                out.warnings += im == 0 ? pc.skipped : 0;
                out.cells.push_back(std::move(pc));
            }
        }
    }
    return out;
}

int RadialMask::count() const {
    int c = 0;
    for (unsigned char v : mask) c += v != 0;
    return c;
}

RadialMask radial_mask(int n, int lines) {
    if (!is_pow2(static_cast<std::size_t>(n)) || n < 2)
        throw std::invalid_argument("radial_mask: grid side must be a power of two >= 2");
    if (lines < 1 || lines > 4 * n)
        throw std::invalid_argument("radial_mask: need 1 <= lines <= 4n");

    RadialMask out;
    out.n = n;
    out.lines = lines;
    out.mask.assign(static_cast<std::size_t>(n) * n, 0);
    const int c = n / 2;

    // A cell belongs to a line when the line passes within half a pixel of
    // the cell center. Perpendicular distance is even under 180-degree
    // rotation about the DC cell, so the mask is exactly point-symmetric
    // wherever the mirrored cell is on the grid.
    std::vector<double> cs(lines), sn(lines);
    for (int k = 0; k < lines; ++k) {
        const double theta = kPi * k / lines;
        cs[k] = std::cos(theta);
        sn[k] = std::sin(theta);
    }
    for (int r = 0; r < n; ++r) {
        const double u = r - c;
        for (int col = 0; col < n; ++col) {
            const double v = col - c;
            for (int k = 0; k < lines; ++k) {
                if (std::fabs(u * cs[k] - v * sn[k]) <= 0.5) {
                    out.mask[static_cast<std::size_t>(r) * n + col] = 1;
                    break;
                }
            }
        }
    }
    out.sampling_rate = static_cast<double>(out.count()) / (static_cast<double>(n) * n);
    return out;
}

Mat shepp_logan(int n) {
    if (!is_pow2(static_cast<std::size_t>(n)) || n < 2)
        throw std::invalid_argument("shepp_logan: grid side must be a power of two >= 2");

    struct Ellipse {
        double value, a, b, x0, y0, phi_deg;
    };
    // Low-contrast (Toft) intensity variant of the classic head phantom.
    static const Ellipse table[10] = {
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
        {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
        {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
        {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
        {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
        {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
        {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
        {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
        {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
    };

    Mat img(n, n);
    for (int i = 0; i < n; ++i) {
        const double y = 1.0 - (2.0 * i + 1.0) / n;
        for (int j = 0; j < n; ++j) {
            const double x = (2.0 * j + 1.0) / n - 1.0;
            double v = 0.0;
            for (const Ellipse& e : table) {
                const double phi = e.phi_deg * kPi / 180.0;
                const double dx = x - e.x0;
                const double dy = y - e.y0;
                const double u = dx * std::cos(phi) + dy * std::sin(phi);
                const double w = -dx * std::sin(phi) + dy * std::cos(phi);
                if (u * u / (e.a * e.a) + w * w / (e.b * e.b) <= 1.0) v += e.value;
            }
            // Overlapping ellipse sums cancel to tiny negatives in floating
            // point; the phantom is defined on [0, 1].
            img.a[static_cast<std::size_t>(i) * n + j] = std::min(1.0, std::max(0.0, v));
        }
    }
    return img;
}

MriOp::MriOp(const RadialMask& mask) : n_(mask.n) {
    if (n_ < 2 || mask.mask.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("mri operator: malformed mask");
    for (int i = 0; i < n_ * n_; ++i)
        if (mask.mask[i]) cells_.push_back(i);
    if (cells_.empty()) throw std::invalid_argument("mri operator: empty mask");
}

Vec MriOp::apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != cols())
        throw std::invalid_argument("mri operator: size mismatch");
    CVec grid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) grid[i] = x[i];
    fft2_inplace(grid, n_, n_, false);
    Vec out(static_cast<std::size_t>(rows()));
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        out[2 * k] = grid[cells_[k]].real();
        out[2 * k + 1] = grid[cells_[k]].imag();
    }
    return out;
}

Vec MriOp::apply_adjoint(const Vec& y) const {
    if (static_cast<int>(y.size()) != rows())
        throw std::invalid_argument("mri operator: size mismatch");
    CVec grid(static_cast<std::size_t>(n_) * n_);
    for (std::size_t k = 0; k < cells_.size(); ++k)
        grid[cells_[k]] = {y[2 * k], y[2 * k + 1]};
    fft2_inplace(grid, n_, n_, true);
    Vec out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = grid[i].real();
    return out;
}

MriResult mri_reconstruct(const Mat& image, const RadialMask& mask, const TightFrame& frame,
                          const MethodSpec& method, const SolverConfig& cfg,
                          double noise_sigma, std::uint64_t noise_seed) {
    if (image.rows != image.cols || image.rows != mask.n)
        throw std::invalid_argument("mri_reconstruct: image/mask size mismatch");
    const int npix = image.rows * image.cols;
    if (frame.n() != npix)
        throw std::invalid_argument("mri_reconstruct: frame built for a different grid");

    const Vec& x0 = image.a;
    const double x0n = nrm2(x0);
    if (x0n <= 0.0) throw std::invalid_argument("mri_reconstruct: zero image");

    MriOp op(mask);
    Vec b = op.apply(x0);
    if (noise_sigma > 0.0) {
        CounterRng rng(noise_seed);
        for (double& v : b) v += noise_sigma * rng.gaussian();
    }

    MriResult res;
    res.method = method.name;
    if (method.zero_fill) {
        const auto start = std::chrono::steady_clock::now();
        res.image.rows = image.rows;
        res.image.cols = image.cols;
        res.image.a = op.apply_adjoint(b);
        res.wall_time_s = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start).count();
    } else {
        SolverConfig run = cfg;
        run.prox = method.prox;
        if (run.lambda <= 0.0)
            run.lambda = 5e-6 * std::max(nrm_inf(frame.analyze(op.apply_adjoint(b))), 1e-300);
        SolveReport rep = pfista(op, b, frame, run);
        res.image.rows = image.rows;
        res.image.cols = image.cols;
        res.image.a = std::move(rep.x);
        res.wall_time_s = rep.wall_time_s;
        res.iterations = rep.iterations;
        res.lambda = run.lambda;
    }

    res.difference.rows = image.rows;
    res.difference.cols = image.cols;
    res.difference.a = sub(res.image.a, x0);
    res.re = nrm2(res.difference.a) / x0n;
    return res;
}

} // namespace frec
