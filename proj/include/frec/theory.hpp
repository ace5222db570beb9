#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "frec/frames.hpp"
#include "frec/linalg.hpp"
#include "frec/linop.hpp"

namespace frec {

// How the support-enumeration constants are certified: full enumeration of
// every admissible support (exact value, combinatorially bounded) or random
// support sampling (a lower bound, any dimension).
struct CertMode {
    bool exhaustive = true;
    std::int64_t samples = 100000; // draws in sampled mode
    std::uint64_t seed = 42;       // sampled-mode stream
    bool parallel = true;          // OpenMP over support chunks; serial reference otherwise
};

inline CertMode sampled_mode(std::int64_t samples = 100000, std::uint64_t seed = 42) {
    CertMode m;
    m.exhaustive = false;
    m.samples = samples;
    m.seed = seed;
    return m;
}

// Hard cap on enumerated supports (or support pairs) in exhaustive mode.
inline constexpr std::int64_t kEnumBudget = 1000000;

// Thrown when an exhaustive request would enumerate more than kEnumBudget
// supports; callers should fall back to sampled mode or shrink the problem.
class BudgetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// C(n, k), saturating at a large sentinel instead of overflowing.
std::int64_t binomial(int n, int k);

// Lexicographic combination walking: the rank-th k-subset of {0..n-1}, and
// the in-place successor (returns false after the last one).
std::vector<int> combination_at(std::int64_t rank, int n, int k);
bool next_combination(std::vector<int>& c, int n);

// Indices of the k largest-magnitude entries, returned ascending. Magnitude
// ties break toward the smaller index.
std::vector<int> top_support(const Vec& v, int k);

// Norms of v restricted to idx (or to its complement). idx must be a sorted
// subset of 0..v.size()-1.
double norm1_on(const Vec& v, const std::vector<int>& idx, bool complement = false);
double norm2_on(const Vec& v, const std::vector<int>& idx, bool complement = false);
double norm_inf_on(const Vec& v, const std::vector<int>& idx, bool complement = false);

// Isometry defect of A on s-sparse coefficient supports of the frame: the
// smallest c with (1-c)|Dv|^2 <= |ADv|^2 <= (1+c)|Dv|^2 over all s-sparse v.
struct RipEstimate {
    int s = 0;
    double delta = 0.0;
    std::vector<int> witness_support; // attains the max (lexicographic tie-break)
    bool exhaustive = true;           // false: sampled lower bound
    std::int64_t supports_checked = 0;
};

// Cross-support defect: max over disjoint supports |S| = s, |T| = t of the
// spectral norm of (AD_S)^T (AD_T) - D_S^T D_T.
struct RocEstimate {
    int s = 0;
    int t = 0;
    double theta = 0.0;
    std::vector<int> witness_s;
    std::vector<int> witness_t;
    bool exhaustive = true;
    std::int64_t pairs_checked = 0;
};

// a: m x n measurement matrix, d: n x dim frame synthesis matrix. Per
// support, the extreme generalized eigenvalues of ((AD_S)^T(AD_S), D_S^T D_S)
// are taken over the subspace where D_S v is nonzero.
RipEstimate drip_delta(const Mat& a, const Mat& d, int s, const CertMode& mode = {});

// Requires s + t <= dim so that disjoint support pairs exist.
RocEstimate droc_theta(const Mat& a, const Mat& d, int s, int t, const CertMode& mode = {});

// Numerical check of the coefficient-space splitting given by the orthogonal
// complement of the frame rows: energy and inner-product identities, the
// certified-isometry sandwich, and the cross-term bound on disjoint draws.
// Fields hold the worst relative violation seen over all trials.
struct Prop2Report {
    double pythagorean = 0.0;    // |v|^2 = |Dv|^2 + |Bv|^2
    double sandwich = 0.0;       // (1-delta)|v|^2 <= |ADv|^2 + |Bv|^2 <= (1+delta)|v|^2
    double polarization = 0.0;   // <u,v> = <Bu,Bv> + <Du,Dv>
    double cross = 0.0;          // |<ADu,ADv> + <Bu,Bv> - <u,v>| <= theta|u||v|
    double cross_disjoint = 0.0; // same bound without the <u,v> term
    double delta = 0.0;          // certified constant used by the sandwich
    double theta = 0.0;          // certified constant used by the cross bound
    int trials = 0;
};

Prop2Report check_prop2(const Mat& a, const Mat& d, int trials, std::uint64_t seed,
                        int s = 2, int t = 2);

// Which optimality inequality family to evaluate: the analysis objective's
// four displayed consequences, or the splitting objective's single one with
// its (alpha+1)^2 dim lambda / (2 rho) relaxation term.
struct ConeVariant {
    bool rasso = false;
    double rho = 1.0; // splitting weight, used only when rasso
};

struct ConeReport {
    std::vector<double> slacks; // rhs - lhs per displayed inequality
    double min_slack = 0.0;
    double noise_norm = 0.0; // ||b - A x||
    bool noise_ok = false;   // noise_norm <= lambda
};

// T is the support of the t_or_s largest-magnitude analysis coefficients of
// the ground truth x. Slacks are meaningful when x_hat (near-)minimizes the
// matching objective and the noise obeys ||b - Ax|| <= lambda.
ConeReport check_cone_inequalities(const Vec& x, const Vec& x_hat, const LinearOperator& a,
                                   const Vec& b, const TightFrame& frame, double lambda,
                                   double alpha, int t_or_s, const ConeVariant& variant = {});

// Random-draw check of the sparse difference-of-norms estimates: the
// two-sided bound (s - alpha sqrt(s)) min |x_j| <= |x|_1 - alpha |x|_2
// <= (sqrt(s) - alpha) |x|_2 and superadditivity over disjoint splits.
// Fields hold the worst violation (positive means a bound failed).
struct MetricReport {
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double superadditivity = 0.0;
    int trials = 0;
};

MetricReport check_l1l2_metric_props(int trials, std::uint64_t seed);

// Cross-term bound where only one side is sparse: u s1-sparse, v disjoint
// from u with |v|_inf <= eta and |v|_1 - |v|_2 <= (s2 - sqrt(s2)) eta. The
// admissible-v sampler draws uniform on [-eta, eta] over a random support
// and shrinks onto the constraint ball by scalar bisection when needed.
struct NonsparseRocReport {
    double max_ratio = 0.0;        // lhs over (1 + sqrt(2)/2) eta sqrt(s2) theta |u|
    double max_ratio_sparse = 0.0; // draws with |v|_0 <= s2 against the tighter eta sqrt(s2) theta |u|
    int draws = 0;
    int sampler_failures = 0; // all-zero redraw cap hits
    double theta = 0.0;       // certified constant used
};

NonsparseRocReport check_nonsparse_roc(const Mat& a, const Mat& d, int s1, int s2,
                                       double eta, int trials, std::uint64_t seed);

// Composite recovery condition and the error-bound constants built from the
// certified delta and theta. t = 2 uses (delta_s, theta_{s,s}); t >= 3 uses
// (delta_{ts}, theta_{ts,(t-1)s}).
struct ConditionReport {
    int s = 0;
    int t = 0;
    double alpha = 1.0;
    int delta_order = 0;
    int theta_rows = 0;
    int theta_cols = 0;
    double delta = 0.0;
    double theta = 0.0;
    double rho = 0.0;      // composite value; the condition is rho < 1
    bool satisfied = false;
    // Populated only when satisfied (they divide by 1 - rho).
    double tau = 0.0;
    double c_const = 0.0;
    double tau_bar = 0.0; // tau + sqrt(1+delta)/(1-rho)
    double c_bar = 0.0;   // c_const + (sqrt(s)+alpha) sqrt(1+delta)/(1-rho)
    double e1 = 0.0;      // coefficient of the analysis-tail term
    double e2 = 0.0;      // coefficient of 2 lambda
};

// Pre: s >= 2, t >= 2, and the required orders fit in the coefficient
// dimension (2s <= dim for t = 2, (2t-1)s <= dim otherwise).
ConditionReport eval_conditions(const Mat& a, const Mat& d, int s, int t, double alpha,
                                const CertMode& mode = {});

// Right-hand side of the recovery bound: e1*(2*tail_l1 + extra) + e2*2*lambda,
// where extra = (alpha+1)^2 dim lambda / (2 rho_split) for the splitting
// solver (rho_split > 0) and 0 otherwise.
double error_bound_rhs(const ConditionReport& rep, double tail_l1, double lambda, int dim,
                       double rho_split = 0.0);

// Sufficient threshold on the order-2s isometry constant alone:
// 1 / ((1 + sqrt(2)/2)(sqrt(s)+alpha)/(sqrt(s)-1) + 1). Pre: s >= 2.
double simple_rip_threshold(int s, double alpha);

// A complete synthetic recovery problem for end-to-end bound verification.
struct BoundInstance {
    Mat a;     // m x n measurement matrix
    Mat frame; // n x dim synthesis matrix of a tight frame
    Vec x;     // ground truth
    Vec e;     // noise, ||e|| <= lambda
    Vec b;     // a x + e
    int s = 2;
    int t = 2;
    double alpha = 1.0;
    double lambda = 0.1;
    double rho = 1.0; // splitting weight when solved with the splitting model
};

// Gaussian measurement rows scaled by 1/sqrt(m), random tight frame, unit
// ground truth synthesized from an s-sparse coefficient draw, noise scaled
// to noise_frac * lambda.
BoundInstance make_bound_instance(int n, int dim, int m, int s, int t, double alpha,
                                  double lambda, double noise_frac, std::uint64_t seed);

struct BoundReport {
    ConditionReport condition;
    bool condition_satisfied = false;
    // The rest is filled only when the condition holds.
    double error = 0.0; // ||x_hat - x||
    double bound = 0.0; // certified right-hand side
    double slack = 0.0; // bound - error
    bool objective_ok = false; // solver got at least as low as the truth
};

// theorem 1: proximal-gradient solution of the analysis objective; theorem 2:
// alternating solution of the splitting objective, whose bound carries the
// extra (alpha+1)^2 dim lambda / (2 rho) term. Unsatisfied conditions are
// reported, not asserted against.
BoundReport verify_error_bound(const BoundInstance& inst, int theorem,
                               const CertMode& mode = {});

// Deterministic inequality chain evaluated at a solver output: feeds on the
// comparison ("hypothesis") between the off-support analysis difference and
// the on-support terms, then follows it through the l1-l2 tail bound, the
// four-step sup-norm chain, and the quadratic l2 tail estimate. gamma_extra
// is the splitting relaxation term, eps_bar the free weight of the final
// estimate. Pre: s >= 2. All slacks should be nonnegative whenever the
// hypothesis slack is.
struct TailChainReport {
    double hypothesis_slack = 0.0;
    double cone_chain_slack = 0.0;
    double infty_chain_slack = 0.0; // min over the chain's four steps
    double l2_tail_slack = 0.0;
};

TailChainReport check_tail_chain(const LinearOperator& a, const TightFrame& frame,
                                 const Vec& x, const Vec& x_hat, double alpha, int s,
                                 double gamma_extra = 0.0, double eps_bar = 1.0);

} // namespace frec
