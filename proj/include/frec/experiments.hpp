#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frec/frames.hpp"
#include "frec/linalg.hpp"
#include "frec/linop.hpp"
#include "frec/solvers.hpp"

namespace frec {

// m x n matrix with i.i.d. standard normal entries, deterministic per seed.
Mat gaussian_matrix(int m, int n, std::uint64_t seed);

// A cosparse recovery instance: a signal annihilated by `cosupport.size()`
// rows of the analysis operator of a random tight frame, plus (optionally)
// Gaussian measurements of it. `frame` stores the synthesis matrix.
struct CosparseInstance {
    Vec x0;
    Mat frame;
    std::vector<int> cosupport;
    Mat a;
    Vec b;
    std::uint64_t seed = 0;
};

// Draws a random tight frame, picks `ell` analysis rows at random, and
// projects a Gaussian vector onto their common null space. Requires
// 0 <= ell < n (a full cosupport would annihilate the signal). When the
// selected rows have a (numerically) singular Gram matrix the cosupport is
// redrawn, up to 10 attempts, after which an eigenvalue-thresholded
// pseudo-inverse takes over. Postcondition: max_i |<row_i, x0>| < 1e-10
// over the cosupport.
CosparseInstance gen_cosparse(int n, int d, int ell, std::uint64_t seed);

// Fills inst.a with an m x n Gaussian matrix and sets inst.b = a * x0.
void add_measurements(CosparseInstance& inst, int m, std::uint64_t seed);

// A named solver configuration: either the plain zero-filled adjoint
// (images only) or a shrinkage penalty for pfista.
struct MethodSpec {
    std::string name;
    bool zero_fill = false;
    ProxSpec prox;
};

// Parses "zero_fill", "l1", "l1l2" (alpha = 1), "l1l2_<alpha>", "lp_<p>".
// Throws std::invalid_argument on anything else or out-of-range parameters.
MethodSpec method_from_name(const std::string& name);

struct PhaseGrid {
    int n = 64;
    double redundancy = 1.0; // d = round(redundancy * n)
    std::vector<double> varrho; // undersampling ratios, m = round(varrho * n)
    std::vector<double> rho;    // cosparsity ratios, ell = n - round(rho * m)
    int trials = 20;
    double eps = 1e-2;       // success threshold on relative error
    // Solver budget per trial. The final lambda is lambda_rel times the
    // data scale ||D^T A^T b||_inf; continuation walks down to it.
    double lambda_rel = 1e-5;
    int max_iter = 1000;
    double tol = 1e-6;
};

// Steps of 0.1 over both ratios, n=64, 20 trials.
PhaseGrid desk_phase_grid();
// Steps of 0.05, n=100, 100 trials.
PhaseGrid full_phase_grid();

struct PhaseCell {
    double rho = 0.0;
    double varrho = 0.0;
    std::string method;
    int m = 0;
    int d = 0;
    int ell = 0;
    int counted = 0;         // trials in the success-rate denominator
    int successes = 0;
    int solver_failures = 0; // solver aborts; counted and unsuccessful
    int skipped = 0;         // instance generation failed; excluded
    double mean_time_s = 0.0;

    double success_rate() const {
        return counted > 0 ? static_cast<double>(successes) / counted : 0.0;
    }
};

struct PhaseResult {
    PhaseGrid grid;
    std::vector<std::string> method_names;
    std::uint64_t seed = 0;
    // rho-major, then varrho, then method; one entry per (cell, method)
    std::vector<PhaseCell> cells;
    int warnings = 0; // total skipped trials across the grid
};

// Runs every (rho, varrho) cell: per trial one fresh instance shared by all
// methods, solved with warm-started continuation, success iff
// ||x_hat - x0|| / ||x0|| < grid.eps. Trials run in parallel when asked;
// aggregation is a deterministic reduction keyed by (cell, trial), so the
// table is identical for any thread count. Per-trial streams are derived
// from (seed, cell index, trial index).
PhaseResult run_phase_transition(const PhaseGrid& grid, const std::vector<MethodSpec>& methods,
                                 std::uint64_t seed, bool parallel = true);

// Radial line mask over an N x N frequency grid (fftshift convention: DC at
// (N/2, N/2), always sampled).
struct RadialMask {
    int n = 0;
    int lines = 0;
    std::vector<unsigned char> mask; // row-major, 1 = sampled
    double sampling_rate = 0.0;

    bool at(int r, int c) const { return mask[static_cast<std::size_t>(r) * n + c] != 0; }
    int count() const;
};

// `lines` equally spaced angles in [0, pi), each rasterized by marking the
// nearest cell at half-pixel steps along both ray directions until either
// arm leaves the grid (which keeps the mask symmetric about the center).
// Requires N a power of two and 1 <= lines <= 4N.
RadialMask radial_mask(int n, int lines);

// Standard 10-ellipse head phantom on an N x N grid over [-1,1]^2 (pixel
// centers), low-contrast tissue variant, values in [0,1]. Row 0 is the top
// of the image.
Mat shepp_logan(int n);

// Partial Fourier measurement of a real image: unitary 2-D FFT, selection
// of the masked cells, complex outputs realified as (re, im) pairs. The
// adjoint embeds the pairs back into the grid, inverse transforms, and
// takes the real part, which is the exact transpose of the forward map.
class MriOp final : public LinearOperator {
public:
    explicit MriOp(const RadialMask& mask);

    int rows() const override { return 2 * static_cast<int>(cells_.size()); }
    int cols() const override { return n_ * n_; }
    Vec apply(const Vec& x) const override;
    Vec apply_adjoint(const Vec& y) const override;

private:
    int n_ = 0;
    std::vector<int> cells_; // linear indices of sampled cells, ascending
};

struct MriResult {
    std::string method;
    Mat image;       // reconstruction
    Mat difference;  // reconstruction minus ground truth
    double re = 0.0; // ||x_hat - x0|| / ||x0||
    double wall_time_s = 0.0;
    int iterations = 0;
    double lambda = 0.0; // weight actually used (0 for zero_fill)
};

// Measures `image` through the masked Fourier operator (optionally adding
// complex Gaussian noise of the given sigma per component) and reconstructs
// with the requested method: zero_fill applies the adjoint, everything else
// runs pfista over `frame` with cfg's budget; cfg.lambda <= 0 picks
// 5e-6 * ||D^T A^T b||_inf. Rejects a mask/image size mismatch.
MriResult mri_reconstruct(const Mat& image, const RadialMask& mask, const TightFrame& frame,
                          const MethodSpec& method, const SolverConfig& cfg,
                          double noise_sigma = 0.0, std::uint64_t noise_seed = 0);

} // namespace frec
