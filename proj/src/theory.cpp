#include "frec/theory.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "frec/parallel.hpp"
#include "frec/prox.hpp"
#include "frec/rng.hpp"
#include "frec/solvers.hpp"

namespace frec {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// (value, witness) pair with a deterministic order: larger value wins,
// exact ties go to the lexicographically smaller witness.
struct BestSupport {
    double value = -1.0;
    std::vector<int> sup_s;
    std::vector<int> sup_t; // empty for single-support searches

    void offer(double v, const std::vector<int>& s, const std::vector<int>& t = {}) {
        if (sup_s.empty() || v > value ||
            (v == value && std::tie(s, t) < std::tie(sup_s, sup_t))) {
            value = v;
            sup_s = s;
            sup_t = t;
        }
    }

    void merge(const BestSupport& other) {
        if (!other.sup_s.empty()) offer(other.value, other.sup_s, other.sup_t);
    }
};

struct Grams {
    Mat coef; // D^T D
    Mat meas; // (AD)^T (AD)
};

Grams make_grams(const Mat& a, const Mat& d) {
    Mat ad = matmul(a, d);
    return {matmul_tn(d, d), matmul_tn(ad, ad)};
}

Mat pick(const Mat& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    Mat out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(static_cast<int>(i), static_cast<int>(j)) = m(rows[i], cols[j]);
    return out;
}

void symmetrize(Mat& m) {
    for (int i = 0; i < m.rows; ++i)
        for (int j = i + 1; j < m.cols; ++j) {
            double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
}

// Extreme generalized eigenvalues of (meas_S, coef_S) over the subspace
// where the frame section is nonsingular: whiten with the eigenvectors of
// coef_S, dropping directions with eigenvalue below 1e-12 (coefficients
// that the synthesis map annihilates carry no isometry information).
double support_delta(const Grams& g, const std::vector<int>& sup) {
    Mat gs = pick(g.coef, sup, sup);
    Mat hs = pick(g.meas, sup, sup);
    SymEig eg = symmetric_eig(gs);
    const int k = static_cast<int>(sup.size());
    std::vector<int> keep;
    for (int i = 0; i < k; ++i)
        if (eg.lambda[i] > 1e-12) keep.push_back(i);
    if (keep.empty()) return 0.0;
    const int r = static_cast<int>(keep.size());
    Mat w(k, r);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < r; ++j)
            w(i, j) = eg.vectors(i, keep[j]) / std::sqrt(eg.lambda[keep[j]]);
    Mat m = matmul_tn(w, matmul(hs, w));
    symmetrize(m);
    SymEig em = symmetric_eig(m);
    return std::max(em.lambda.back() - 1.0, 1.0 - em.lambda.front());
}

// Spectral norm of meas_{S,T} - coef_{S,T} through the Gram of the thinner side.
double pair_theta(const Grams& g, const std::vector<int>& s, const std::vector<int>& t) {
    Mat x(static_cast<int>(s.size()), static_cast<int>(t.size()));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            x(static_cast<int>(i), static_cast<int>(j)) =
                g.meas(s[i], t[j]) - g.coef(s[i], t[j]);
    Mat m = x.rows >= x.cols ? matmul_tn(x, x) : [&] {
        Mat xt = transpose(x);
        return matmul_tn(xt, xt);
    }();
    SymEig em = symmetric_eig(m);
    return std::sqrt(std::max(0.0, em.lambda.back()));
}

std::vector<int> random_subset(CounterRng& rng, int n, int k) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < k; ++j)
        std::swap(idx[j], idx[j + static_cast<int>(rng.below(
                               static_cast<std::uint64_t>(n - j)))]);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

// Disjoint pair: a single shuffle split into the first s and next t slots.
std::pair<std::vector<int>, std::vector<int>> random_disjoint_pair(CounterRng& rng, int n,
                                                                   int s, int t) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < s + t; ++j)
        std::swap(idx[j], idx[j + static_cast<int>(rng.below(
                               static_cast<std::uint64_t>(n - j)))]);
    std::vector<int> a(idx.begin(), idx.begin() + s);
    std::vector<int> b(idx.begin() + s, idx.begin() + s + t);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return {std::move(a), std::move(b)};
}

void validate_pair(const Mat& a, const Mat& d) {
    check_finite(a, "measurement matrix");
    check_finite(d, "frame matrix");
    if (a.cols != d.rows)
        throw std::invalid_argument("measurement columns (" + std::to_string(a.cols) +
                                    ") do not match frame rows (" + std::to_string(d.rows) +
                                    ")");
}

Vec sparse_gaussian(CounterRng& rng, int dim, const std::vector<int>& sup) {
    Vec v(dim, 0.0);
    for (int i : sup) v[i] = rng.gaussian();
    return v;
}

} // namespace

std::int64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    constexpr std::int64_t cap = std::numeric_limits<std::int64_t>::max();
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= static_cast<unsigned>(n - k + i);
        r /= static_cast<unsigned>(i);
        if (r > static_cast<unsigned __int128>(cap)) return cap;
    }
    return static_cast<std::int64_t>(r);
}

std::vector<int> combination_at(std::int64_t rank, int n, int k) {
    if (k < 0 || k > n || rank < 0 || rank >= binomial(n, k))
        throw std::invalid_argument("combination rank out of range");
    std::vector<int> c(k);
    int v = 0;
    for (int i = 0; i < k; ++i) {
        for (;;) {
            std::int64_t cnt = binomial(n - 1 - v, k - 1 - i);
            if (rank < cnt) break;
            rank -= cnt;
            ++v;
        }
        c[i] = v++;
    }
    return c;
}

bool next_combination(std::vector<int>& c, int n) {
    const int k = static_cast<int>(c.size());
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    return true;
}

std::vector<int> top_support(const Vec& v, int k) {
    const int n = static_cast<int>(v.size());
    if (k < 0 || k > n) throw std::invalid_argument("top_support size out of range");
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return std::fabs(v[a]) > std::fabs(v[b]); });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

namespace {

std::vector<char> membership(std::size_t n, const std::vector<int>& idx) {
    std::vector<char> in(n, 0);
    for (int i : idx) {
        if (i < 0 || static_cast<std::size_t>(i) >= n)
            throw std::invalid_argument("support index out of range");
        in[i] = 1;
    }
    return in;
}

} // namespace

double norm1_on(const Vec& v, const std::vector<int>& idx, bool complement) {
    auto in = membership(v.size(), idx);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (in[i] != static_cast<char>(complement)) s += std::fabs(v[i]);
    return s;
}

double norm2_on(const Vec& v, const std::vector<int>& idx, bool complement) {
    auto in = membership(v.size(), idx);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (in[i] != static_cast<char>(complement)) s += v[i] * v[i];
    return std::sqrt(s);
}

double norm_inf_on(const Vec& v, const std::vector<int>& idx, bool complement) {
    auto in = membership(v.size(), idx);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (in[i] != static_cast<char>(complement)) s = std::max(s, std::fabs(v[i]));
    return s;
}

RipEstimate drip_delta(const Mat& a, const Mat& d, int s, const CertMode& mode) {
    validate_pair(a, d);
    const int dim = d.cols;
    if (s < 1 || s > dim) throw std::invalid_argument("sparsity order out of range");
    Grams gm = make_grams(a, d);

    RipEstimate out;
    out.s = s;
    out.exhaustive = mode.exhaustive;
    const int want = mode.parallel ? effective_threads() : 1;
    std::vector<BestSupport> best(want);
    std::exception_ptr err = nullptr;

    if (mode.exhaustive) {
        const std::int64_t total = binomial(dim, s);
        if (total > kEnumBudget) {
            std::ostringstream os;
            os << "exhaustive mode would enumerate " << total << " supports (budget "
               << kEnumBudget << "); use sampled mode";
            throw BudgetError(os.str());
        }
        out.supports_checked = total;
#pragma omp parallel num_threads(want)
        {
            const int nt = omp_get_num_threads();
            const int tid = omp_get_thread_num();
            const std::int64_t lo = total * tid / nt;
            const std::int64_t hi = total * (tid + 1) / nt;
            try {
                BestSupport local;
                if (lo < hi) {
                    std::vector<int> sup = combination_at(lo, dim, s);
                    for (std::int64_t r = lo; r < hi; ++r) {
                        local.offer(support_delta(gm, sup), sup);
                        if (r + 1 < hi) next_combination(sup, dim);
                    }
                }
                best[tid].merge(local);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
    } else {
        if (mode.samples < 1) throw std::invalid_argument("sampled mode needs draws >= 1");
        const std::int64_t draws = mode.samples;
        out.supports_checked = draws;
#pragma omp parallel num_threads(want)
        {
            const int nt = omp_get_num_threads();
            const int tid = omp_get_thread_num();
            const std::int64_t lo = draws * tid / nt;
            const std::int64_t hi = draws * (tid + 1) / nt;
            try {
                BestSupport local;
                for (std::int64_t i = lo; i < hi; ++i) {
                    CounterRng rng(derive_seed(mode.seed, static_cast<std::uint64_t>(i)));
                    std::vector<int> sup = random_subset(rng, dim, s);
                    local.offer(support_delta(gm, sup), sup);
                }
                best[tid].merge(local);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
    }
    if (err) std::rethrow_exception(err);

    BestSupport merged;
    for (const auto& b : best) merged.merge(b);
    out.delta = std::max(0.0, merged.value);
    out.witness_support = merged.sup_s;
    return out;
}

RocEstimate droc_theta(const Mat& a, const Mat& d, int s, int t, const CertMode& mode) {
    validate_pair(a, d);
    const int dim = d.cols;
    if (s < 1 || t < 1 || s + t > dim)
        throw std::invalid_argument("support orders need s, t >= 1 and s + t <= " +
                                    std::to_string(dim));
    Grams gm = make_grams(a, d);

    RocEstimate out;
    out.s = s;
    out.t = t;
    out.exhaustive = mode.exhaustive;
    const int want = mode.parallel ? effective_threads() : 1;
    std::vector<BestSupport> best(want);
    std::exception_ptr err = nullptr;

    if (mode.exhaustive) {
        const std::int64_t total_s = binomial(dim, s);
        const std::int64_t total_t = binomial(dim - s, t);
        if (total_s > kEnumBudget ||
            static_cast<double>(total_s) * static_cast<double>(total_t) >
                static_cast<double>(kEnumBudget)) {
            std::ostringstream os;
            os << "exhaustive mode would enumerate " << static_cast<double>(total_s) *
                      static_cast<double>(total_t)
               << " support pairs (budget " << kEnumBudget << "); use sampled mode";
            throw BudgetError(os.str());
        }
        out.pairs_checked = total_s * total_t;
#pragma omp parallel num_threads(want)
        {
            const int nt = omp_get_num_threads();
            const int tid = omp_get_thread_num();
            const std::int64_t lo = total_s * tid / nt;
            const std::int64_t hi = total_s * (tid + 1) / nt;
            try {
                BestSupport local;
                if (lo < hi) {
                    std::vector<int> sup = combination_at(lo, dim, s);
                    std::vector<int> comp, tsel;
                    for (std::int64_t r = lo; r < hi; ++r) {
                        comp.clear();
                        auto in = membership(static_cast<std::size_t>(dim), sup);
                        for (int i = 0; i < dim; ++i)
                            if (!in[i]) comp.push_back(i);
                        std::vector<int> pos(t);
                        std::iota(pos.begin(), pos.end(), 0);
                        for (;;) {
                            tsel.clear();
                            for (int p : pos) tsel.push_back(comp[p]);
                            local.offer(pair_theta(gm, sup, tsel), sup, tsel);
                            if (!next_combination(pos, dim - s)) break;
                        }
                        if (r + 1 < hi) next_combination(sup, dim);
                    }
                }
                best[tid].merge(local);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
    } else {
        if (mode.samples < 1) throw std::invalid_argument("sampled mode needs draws >= 1");
        const std::int64_t draws = mode.samples;
        out.pairs_checked = draws;
#pragma omp parallel num_threads(want)
        {
            const int nt = omp_get_num_threads();
            const int tid = omp_get_thread_num();
            const std::int64_t lo = draws * tid / nt;
            const std::int64_t hi = draws * (tid + 1) / nt;
            try {
                BestSupport local;
                for (std::int64_t i = lo; i < hi; ++i) {
                    CounterRng rng(derive_seed(mode.seed, static_cast<std::uint64_t>(i)));
                    auto [ss, tt] = random_disjoint_pair(rng, dim, s, t);
                    local.offer(pair_theta(gm, ss, tt), ss, tt);
                }
                best[tid].merge(local);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
    }
    if (err) std::rethrow_exception(err);

    BestSupport merged;
    for (const auto& b : best) merged.merge(b);
    out.theta = std::max(0.0, merged.value);
    out.witness_s = merged.sup_s;
    out.witness_t = merged.sup_t;
    return out;
}

Prop2Report check_prop2(const Mat& a, const Mat& d, int trials, std::uint64_t seed, int s,
                        int t) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    DenseFrame frame(d);
    ComplementFrame comp = orthogonal_complement(frame);
    const int dim = frame.d();
    if (s < 1 || t < 1 || s + t > dim)
        throw std::invalid_argument("orders need s, t >= 1 and s + t <= coefficient dim");

    Prop2Report rep;
    rep.trials = trials;
    rep.delta = drip_delta(a, d, s).delta;
    rep.theta = droc_theta(a, d, s, t).theta;

    for (int trial = 0; trial < trials; ++trial) {
        CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));

        // Energy split and polarization hold for every coefficient vector.
        Vec v = gaussian_vec(dim, rng);
        Vec u = gaussian_vec(dim, rng);
        const double v2 = dot(v, v);
        const double dv2 = dot(frame.synthesize(v), frame.synthesize(v));
        const double bv2 = dot(comp.apply(v), comp.apply(v));
        rep.pythagorean = std::max(rep.pythagorean, std::fabs(v2 - dv2 - bv2) / v2);

        const double uv = dot(u, v);
        const double pol = dot(comp.apply(u), comp.apply(v)) +
                           dot(frame.synthesize(u), frame.synthesize(v));
        rep.polarization =
            std::max(rep.polarization, std::fabs(uv - pol) / (nrm2(u) * nrm2(v)));

        // Certified sandwich on an s-sparse draw.
        Vec vs = sparse_gaussian(rng, dim, random_subset(rng, dim, s));
        const double vs2 = dot(vs, vs);
        Vec advs = matvec(a, frame.synthesize(vs));
        const double mid = dot(advs, advs) + dot(comp.apply(vs), comp.apply(vs));
        const double lo_viol = (1.0 - rep.delta) * vs2 - mid;
        const double hi_viol = mid - (1.0 + rep.delta) * vs2;
        rep.sandwich = std::max(rep.sandwich, std::max(lo_viol, hi_viol) / vs2);

        // Cross bound on a disjoint sparse pair; the certified constant is
        // taken over disjoint supports, so the draws must be disjoint too.
        auto [sup_u, sup_v] = random_disjoint_pair(rng, dim, s, t);
        Vec cu = sparse_gaussian(rng, dim, sup_u);
        Vec cv = sparse_gaussian(rng, dim, sup_v);
        Vec adu = matvec(a, frame.synthesize(cu));
        Vec adv = matvec(a, frame.synthesize(cv));
        const double scale = nrm2(cu) * nrm2(cv);
        const double inner = dot(adu, adv) + dot(comp.apply(cu), comp.apply(cv));
        const double with_term = std::fabs(inner - dot(cu, cv));
        const double without_term = std::fabs(inner);
        rep.cross = std::max(rep.cross, (with_term - rep.theta * scale) / scale);
        rep.cross_disjoint =
            std::max(rep.cross_disjoint, (without_term - rep.theta * scale) / scale);
    }
    rep.cross = std::max(rep.cross, 0.0);
    rep.cross_disjoint = std::max(rep.cross_disjoint, 0.0);
    rep.sandwich = std::max(rep.sandwich, 0.0);
    return rep;
}

ConeReport check_cone_inequalities(const Vec& x, const Vec& x_hat, const LinearOperator& a,
                                   const Vec& b, const TightFrame& frame, double lambda,
                                   double alpha, int t_or_s, const ConeVariant& variant) {
    if (x.size() != x_hat.size() || static_cast<int>(x.size()) != frame.n())
        throw std::invalid_argument("signal sizes do not match the frame");
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in (0, 1]");

    Vec h = sub(x_hat, x);
    Vec dtx = frame.analyze(x);
    Vec dth = frame.analyze(h);
    std::vector<int> big_t = top_support(dtx, t_or_s);

    Vec ax = a.apply(x);
    Vec ah = a.apply(h);
    const double ah2 = nrm2(ah);
    const double ahsq = ah2 * ah2;
    const double tail = norm1_on(dtx, big_t, true);
    const double ht1 = norm1_on(dth, big_t);
    const double ht2 = norm2_on(dth, big_t);
    const double htc1 = norm1_on(dth, big_t, true);
    const double htc2 = norm2_on(dth, big_t, true);
    const double dth2 = nrm2(dth);

    ConeReport rep;
    rep.noise_norm = nrm2(sub(b, ax));
    rep.noise_ok = rep.noise_norm <= lambda * (1.0 + 1e-12);

    if (!variant.rasso) {
        rep.slacks = {
            2.0 * lambda * (ht1 + alpha * dth2 + 2.0 * tail + ah2) - (ahsq + 2.0 * lambda * htc1),
            2.0 * lambda * (ht1 + 2.0 * tail + alpha * ht2 + ah2) -
                (ahsq + 2.0 * lambda * (htc1 - alpha * htc2)),
            (ht1 + 2.0 * tail + alpha * dth2 + ah2) - htc1,
            2.0 * lambda * (ht1 + 2.0 * tail + alpha * dth2 + ah2) - ahsq,
        };
    } else {
        if (variant.rho <= 0.0) throw std::invalid_argument("rho must be positive");
        const double relax = (alpha + 1.0) * (alpha + 1.0) * frame.d() * lambda /
                             (2.0 * variant.rho);
        rep.slacks = {2.0 * lambda * (ht1 + alpha * dth2 + 2.0 * tail + ah2 + relax) -
                      (ahsq + 2.0 * lambda * htc1)};
    }
    rep.min_slack = *std::min_element(rep.slacks.begin(), rep.slacks.end());
    return rep;
}

MetricReport check_l1l2_metric_props(int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    MetricReport rep;
    rep.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        const int dim = 2 + static_cast<int>(rng.below(11));
        const int s = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(dim)));
        const double alpha = 1.0 - rng.uniform(); // (0, 1]

        std::vector<int> sup = random_subset(rng, dim, s);
        Vec x = sparse_gaussian(rng, dim, sup);
        double l1 = 0.0, l2sq = 0.0, min_abs = std::numeric_limits<double>::infinity();
        for (int i : sup) {
            l1 += std::fabs(x[i]);
            l2sq += x[i] * x[i];
            min_abs = std::min(min_abs, std::fabs(x[i]));
        }
        const double l2 = std::sqrt(l2sq);
        const double metric = l1 - alpha * l2;
        const double rs = std::sqrt(static_cast<double>(s));
        rep.lower_bound = std::max(rep.lower_bound, (s - alpha * rs) * min_abs - metric);
        rep.upper_bound = std::max(rep.upper_bound, metric - (rs - alpha) * l2);

        // Disjoint split of a dense draw.
        Vec y = gaussian_vec(dim, rng);
        std::vector<int> s1, s2, both;
        for (int i = 0; i < dim; ++i) {
            switch (rng.below(3)) {
                case 0: s1.push_back(i); both.push_back(i); break;
                case 1: s2.push_back(i); both.push_back(i); break;
                default: break;
            }
        }
        auto piece = [&](const std::vector<int>& idx) {
            return norm1_on(y, idx) - alpha * norm2_on(y, idx);
        };
        rep.superadditivity =
            std::max(rep.superadditivity, piece(s1) + piece(s2) - piece(both));
    }
    return rep;
}

NonsparseRocReport check_nonsparse_roc(const Mat& a, const Mat& d, int s1, int s2,
                                       double eta, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
    DenseFrame frame(d);
    ComplementFrame comp = orthogonal_complement(frame);
    const int dim = frame.d();
    if (s1 < 1 || s2 < 2 || s1 + s2 > dim)
        throw std::invalid_argument("orders need s1 >= 1, s2 >= 2, s1 + s2 <= coefficient dim");

    NonsparseRocReport rep;
    rep.theta = droc_theta(a, d, s1, s2).theta;
    const double limit = (s2 - std::sqrt(static_cast<double>(s2))) * eta;

    for (int trial = 0; trial < trials; ++trial) {
        CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        std::vector<int> sup_u = random_subset(rng, dim, s1);
        Vec u = sparse_gaussian(rng, dim, sup_u);

        // Support size spans both proof regimes: sparse (<= s2) and beyond.
        const int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(dim - s1)));
        auto in_u = membership(static_cast<std::size_t>(dim), sup_u);
        std::vector<int> avail;
        for (int i = 0; i < dim; ++i)
            if (!in_u[i]) avail.push_back(i);
        std::vector<int> pos = random_subset(rng, static_cast<int>(avail.size()), t);

        Vec v(dim, 0.0);
        bool ok = false;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
            for (int p : pos) v[avail[p]] = eta * (2.0 * rng.uniform() - 1.0);
            ok = norm_inf_on(v, {}, true) > 1e-12;
        }
        if (!ok) {
            ++rep.sampler_failures;
            continue;
        }

        // Shrink onto the difference-of-norms ball by bisection on the scale.
        const double ell = nrm1(v) - nrm2(v);
        if (ell > limit) {
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (mid * ell <= limit ? lo : hi) = mid;
            }
            for (double& vi : v) vi *= lo;
        }

        Vec adu = matvec(a, frame.synthesize(u));
        Vec adv = matvec(a, frame.synthesize(v));
        const double lhs = std::fabs(dot(adu, adv) + dot(comp.apply(u), comp.apply(v)));
        const double base = eta * std::sqrt(static_cast<double>(s2)) * rep.theta * nrm2(u);
        const double rhs = (1.0 + kSqrt2 / 2.0) * base;
        if (rhs < 1e-300) {
            if (lhs > 1e-12) rep.max_ratio = std::numeric_limits<double>::infinity();
            ++rep.draws;
            continue;
        }
        rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
        if (t <= s2) rep.max_ratio_sparse = std::max(rep.max_ratio_sparse, lhs / base);
        ++rep.draws;
    }
    return rep;
}

ConditionReport eval_conditions(const Mat& a, const Mat& d, int s, int t, double alpha,
                                const CertMode& mode) {
    if (s < 2) throw std::invalid_argument("sparsity order must be >= 2");
    if (t < 2) throw std::invalid_argument("aspect parameter must be >= 2");
    if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in (0, 1]");

    ConditionReport rep;
    rep.s = s;
    rep.t = t;
    rep.alpha = alpha;
    if (t == 2) {
        rep.delta_order = s;
        rep.theta_rows = s;
        rep.theta_cols = s;
    } else {
        rep.delta_order = t * s;
        rep.theta_rows = t * s;
        rep.theta_cols = (t - 1) * s;
    }
    if (rep.theta_rows + rep.theta_cols > d.cols)
        throw std::invalid_argument("required support orders exceed the coefficient dimension");

    rep.delta = drip_delta(a, d, rep.delta_order, mode).delta;
    rep.theta = droc_theta(a, d, rep.theta_rows, rep.theta_cols, mode).theta;

    const double rs = std::sqrt(static_cast<double>(s));
    const double shape =
        t == 2 ? 1.0
               : std::sqrt(static_cast<double>(rep.theta_cols) /
                           (static_cast<double>(t - 1) * (t - 1) * s));
    const double slope = (kSqrt2 + 1.0) * (rs + alpha) / (kSqrt2 * (rs - 1.0));
    rep.rho = rep.delta + shape * slope * rep.theta;
    rep.satisfied = rep.rho < 1.0;
    if (!rep.satisfied) return rep;

    const double lead = (kSqrt2 + 1.0) * rep.theta / (kSqrt2 * (1.0 - rep.rho));
    rep.tau = t == 2 ? lead / (rs - 1.0)
                     : lead * std::sqrt(static_cast<double>(rep.theta_cols)) /
                           ((t - 1) * (s - rs));
    rep.c_const = 1.0 + (rs + alpha) * rep.tau;
    const double lift = std::sqrt(1.0 + rep.delta) / (1.0 - rep.rho);
    rep.tau_bar = rep.tau + lift;
    rep.c_bar = rep.c_const + (rs + alpha) * lift;
    const double k = std::sqrt((alpha + rs) / rs + alpha * alpha / (4.0 * s)) +
                     (alpha + 1.0) / (2.0 * rs) + 1.0;
    rep.e1 = k * (rep.tau + rep.tau_bar * rep.c_const / rep.c_bar) +
             0.5 * (1.0 + rep.c_const / rep.c_bar);
    rep.e2 = (k * rep.tau_bar + 0.5) * rep.c_bar;
    return rep;
}

double error_bound_rhs(const ConditionReport& rep, double tail_l1, double lambda, int dim,
                       double rho_split) {
    if (!rep.satisfied)
        throw std::invalid_argument("error bound is undefined when the condition fails");
    double extra = 0.0;
    if (rho_split > 0.0)
        extra = (rep.alpha + 1.0) * (rep.alpha + 1.0) * dim * lambda / (2.0 * rho_split);
    return rep.e1 * (2.0 * tail_l1 + extra) + rep.e2 * 2.0 * lambda;
}

double simple_rip_threshold(int s, double alpha) {
    if (s < 2) throw std::invalid_argument("sparsity order must be >= 2");
    const double rs = std::sqrt(static_cast<double>(s));
    return 1.0 / ((1.0 + kSqrt2 / 2.0) * (rs + alpha) / (rs - 1.0) + 1.0);
}

BoundInstance make_bound_instance(int n, int dim, int m, int s, int t, double alpha,
                                  double lambda, double noise_frac, std::uint64_t seed) {
    if (noise_frac < 0.0 || noise_frac > 1.0)
        throw std::invalid_argument("noise_frac must be in [0, 1]");
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");

    BoundInstance inst;
    inst.s = s;
    inst.t = t;
    inst.alpha = alpha;
    inst.lambda = lambda;
    inst.frame = *random_tight_frame(n, dim, derive_seed(seed, 1)).dense();

    CounterRng ra(derive_seed(seed, 2));
    inst.a = Mat(m, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (double& v : inst.a.a) v = scale * ra.gaussian();

    CounterRng rc(derive_seed(seed, 3));
    Vec coef = sparse_gaussian(rc, dim, random_subset(rc, dim, s));
    inst.x = matvec(inst.frame, coef);
    const double xn = nrm2(inst.x);
    if (xn < 1e-12) throw std::runtime_error("degenerate ground-truth draw");
    for (double& v : inst.x) v /= xn;

    CounterRng re(derive_seed(seed, 4));
    inst.e.assign(m, 0.0);
    if (noise_frac > 0.0) {
        inst.e = gaussian_vec(m, re);
        const double en = nrm2(inst.e);
        const double target = noise_frac * lambda;
        for (double& v : inst.e) v *= target / en;
    }
    inst.b = add(matvec(inst.a, inst.x), inst.e);
    return inst;
}

BoundReport verify_error_bound(const BoundInstance& inst, int theorem, const CertMode& mode) {
    if (theorem != 1 && theorem != 2) throw std::invalid_argument("theorem must be 1 or 2");

    BoundReport rep;
    rep.condition = eval_conditions(inst.a, inst.frame, inst.s, inst.t, inst.alpha, mode);
    rep.condition_satisfied = rep.condition.satisfied;
    if (!rep.condition_satisfied) return rep;

    DenseFrame frame(inst.frame);
    DenseOp a(inst.a);
    Vec x_hat;
    if (theorem == 1) {
        SolverConfig cfg;
        cfg.prox.kind = ProxKind::L1MinusAlphaL2;
        cfg.prox.alpha = inst.alpha;
        cfg.lambda = inst.lambda;
        cfg.max_iter = 20000;
        cfg.tol = 1e-12;
        SolveReport sr = pfista(a, inst.b, frame, cfg);
        x_hat = sr.x;
        const double at_hat = objective_analysis(a, inst.b, frame, cfg.prox, cfg.lambda, x_hat);
        const double at_x = objective_analysis(a, inst.b, frame, cfg.prox, cfg.lambda, inst.x);
        rep.objective_ok = at_hat <= at_x + 1e-10 * (1.0 + std::fabs(at_x));
    } else {
        RassoConfig cfg;
        cfg.lambda = inst.lambda;
        cfg.alpha = inst.alpha;
        cfg.rho = inst.rho;
        cfg.max_outer = 20000;
        cfg.tol = 1e-12;
        RassoReport rr = solve_rasso(a, inst.b, frame, cfg);
        x_hat = rr.x;
        const double at_hat =
            objective_rasso(a, inst.b, frame, cfg.lambda, cfg.alpha, cfg.rho, rr.x, rr.z);
        const double at_x = objective_rasso(a, inst.b, frame, cfg.lambda, cfg.alpha, cfg.rho,
                                            inst.x, frame.analyze(inst.x));
        rep.objective_ok = at_hat <= at_x + 1e-10 * (1.0 + std::fabs(at_x));
    }

    Vec dtx = frame.analyze(inst.x);
    const double tail = norm1_on(dtx, top_support(dtx, inst.s), true);
    rep.bound = error_bound_rhs(rep.condition, tail, inst.lambda, frame.d(),
                                theorem == 2 ? inst.rho : 0.0);
    rep.error = nrm2(sub(x_hat, inst.x));
    rep.slack = rep.bound - rep.error;
    return rep;
}

TailChainReport check_tail_chain(const LinearOperator& a, const TightFrame& frame,
                                 const Vec& x, const Vec& x_hat, double alpha, int s,
                                 double gamma_extra, double eps_bar) {
    if (s < 2) throw std::invalid_argument("sparsity order must be >= 2");
    if (eps_bar <= 0.0) throw std::invalid_argument("eps_bar must be positive");

    Vec h = sub(x_hat, x);
    Vec dth = frame.analyze(h);
    Vec dtx = frame.analyze(x);
    std::vector<int> sup = top_support(dth, s);
    std::vector<int> big_t = top_support(dtx, s);

    const double hs1 = norm1_on(dth, sup);
    const double hs2 = norm2_on(dth, sup);
    const double hsc1 = norm1_on(dth, sup, true);
    const double hsc2 = norm2_on(dth, sup, true);
    const double hsc_inf = norm_inf_on(dth, sup, true);
    const double tail = norm1_on(dtx, big_t, true);
    const double ah2 = nrm2(a.apply(h));

    const double rs = std::sqrt(static_cast<double>(s));
    const double rest = 2.0 * tail + ah2 + gamma_extra;
    const double base = hs1 + alpha * hs2 + rest;
    const double varrho =
        ((rs + alpha) / (rs - 1.0)) * (hs2 / rs) + rest / (s - rs);

    TailChainReport rep;
    rep.hypothesis_slack = base - (hsc1 - alpha * hsc2);
    rep.cone_chain_slack = (s - rs) * varrho - (hsc1 - hsc2);
    const double boosted = ((rs + alpha) / (rs - 1.0)) * (hs2 / rs);
    rep.infty_chain_slack = std::min({hs1 / s - hsc_inf, hs2 / rs - hs1 / s,
                                      boosted - hs2 / rs, varrho - boosted});
    rep.l2_tail_slack =
        (std::sqrt((rs + alpha) / rs + alpha * alpha / (4.0 * s)) +
         (alpha + eps_bar) / (2.0 * rs)) *
            hs2 +
        rest / (2.0 * eps_bar) - hsc2;
    return rep;
}

} // namespace frec
