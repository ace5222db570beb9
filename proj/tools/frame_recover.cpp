// frame_recover: sparse recovery over tight frames from the command line.
//
// Subcommands: solve (single instance), phase (success-rate grid), mri
// (phantom reconstruction), certify (isometry constants and recovery
// conditions), gen (write instances/masks/phantoms to files). Every run
// writes a JSON bundle echoing the configuration, the version, the seed,
// and a digest manifest of the emitted files. Outputs are deterministic
// for a fixed (config, seed) apart from wall-time fields.
//
// Exit codes: 0 success, 1 computational failure, 2 usage error (including
// an exhausted enumeration budget in certify --mode exhaustive).

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frec/experiments.hpp"
#include "frec/frames.hpp"
#include "frec/io.hpp"
#include "frec/linalg.hpp"
#include "frec/prox.hpp"
#include "frec/sidwt.hpp"
#include "frec/solvers.hpp"
#include "frec/theory.hpp"
#include "frec/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace frec;

namespace {

constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// config files: JSON with snake_case keys mirroring the long option names;
// a present command-line flag wins over the file value.

struct ConfigBinding {
    std::string key;
    CLI::Option* opt = nullptr;
};

class Merger {
public:
    Merger(CLI::App* cmd, std::string* config_path) : cmd_(cmd), config_path_(config_path) {}

    void bind(const std::string& key, CLI::Option* opt) { bindings_.push_back({key, opt}); }

    // Applies config-file values to options the command line left untouched.
    void apply() const {
        if (config_path_->empty()) return;
        json cfg;
        try {
            cfg = json::parse(read_text_file(*config_path_));
        } catch (const json::parse_error& e) {
            throw std::invalid_argument("config: " + std::string(e.what()));
        }
        if (!cfg.is_object()) throw std::invalid_argument("config: expected a JSON object");
        if (!cfg.contains("schema_version"))
            throw std::invalid_argument("config: missing schema_version");
        if (cfg["schema_version"] != kSchemaVersion)
            throw std::invalid_argument("config: unsupported schema_version");
        for (const auto& item : cfg.items()) {
            if (item.key() == "schema_version") continue;
            const ConfigBinding* hit = nullptr;
            for (const ConfigBinding& b : bindings_)
                if (b.key == item.key()) hit = &b;
            if (!hit)
                throw std::invalid_argument("config: unknown key '" + item.key() + "' for " +
                                            cmd_->get_name());
            if (hit->opt->count() > 0) continue;
            const json& v = item.value();
            const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
            try {
                hit->opt->add_result(text);
                hit->opt->run_callback();
            } catch (const CLI::Error& e) {
                throw std::invalid_argument("config: " + item.key() + ": " + e.what());
            }
        }
    }

private:
    CLI::App* cmd_;
    std::string* config_path_;
    std::vector<ConfigBinding> bindings_;
};

// ---------------------------------------------------------------------------
// bundle plumbing

json manifest_of(const fs::path& dir, const std::vector<std::string>& files) {
    std::vector<std::string> sorted = files;
    std::sort(sorted.begin(), sorted.end());
    json out = json::array();
    for (const std::string& f : sorted)
        out.push_back({{"file", f}, {"sha256", sha256_file((dir / f).string())}});
    return out;
}

void write_bundle(const fs::path& dir, const std::string& name, json bundle,
                  const std::vector<std::string>& files) {
    bundle["schema_version"] = kSchemaVersion;
    bundle["version"] = kVersion;
    bundle["manifest"] = manifest_of(dir, files);
    write_text_file((dir / name).string(), bundle.dump(2) + "\n");
    std::cout << (dir / name).string() << "\n";
}

fs::path ensure_dir(const std::string& out) {
    fs::path dir(out.empty() ? "." : out);
    fs::create_directories(dir);
    return dir;
}

std::vector<MethodSpec> parse_methods(const std::string& list, bool allow_zero_fill) {
    std::vector<MethodSpec> methods;
    std::string cur;
    std::stringstream ss(list);
    while (std::getline(ss, cur, ',')) {
        if (cur.empty()) continue;
        MethodSpec m = method_from_name(cur);
        if (m.zero_fill && !allow_zero_fill)
            throw std::invalid_argument("method zero_fill is only available for mri");
        methods.push_back(std::move(m));
    }
    if (methods.empty()) throw std::invalid_argument("no methods given");
    return methods;
}

json prox_json(const ProxSpec& p) {
    json j;
    j["penalty"] = p.name();
    if (p.kind == ProxKind::L1MinusAlphaL2) j["alpha"] = p.alpha;
    if (p.kind == ProxKind::Lp) j["p"] = p.p;
    return j;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
    int n = 64, d = 64, m = 48, ell = 58;
    std::string method = "l1l2";
    double lambda = 0.0, lambda_rel = 1e-5, gamma = 0.0, tol = 1e-6;
    int max_iter = 1000;
    bool toy = false, init_zero = false, no_continuation = false;
    std::string from, out = ".";
    std::uint64_t seed = 42;
};

int run_solve(const SolveArgs& a) {
    const fs::path dir = ensure_dir(a.out);
    MethodSpec method = method_from_name(a.method);
    if (method.zero_fill) throw std::invalid_argument("solve: zero_fill is image-only");

    Mat frame_m, amat;
    Vec b, x0;
    bool have_truth = true;
    if (a.toy) {
        frame_m = identity(a.n);
        amat = identity(a.n);
        x0.assign(a.n, 0.0);
        CounterRng rng(derive_seed(a.seed, 9));
        for (int k = 0; k < std::max(1, a.n / 8); ++k)
            x0[rng.below(a.n)] = rng.gaussian();
        b = matvec(amat, x0);
    } else if (!a.from.empty()) {
        const fs::path src(a.from);
        frame_m = read_matrix_csv((src / "frame.csv").string());
        amat = read_matrix_csv((src / "a.csv").string());
        b = read_vector_csv((src / "b.csv").string());
        have_truth = fs::exists(src / "x0.csv");
        if (have_truth) x0 = read_vector_csv((src / "x0.csv").string());
    } else {
        CosparseInstance inst = gen_cosparse(a.n, a.d, a.ell, a.seed);
        add_measurements(inst, a.m, derive_seed(a.seed, 6));
        frame_m = std::move(inst.frame);
        amat = std::move(inst.a);
        b = std::move(inst.b);
        x0 = std::move(inst.x0);
    }

    const DenseFrame frame(frame_m);
    const DenseOp op(amat);
    SolverConfig cfg;
    cfg.prox = method.prox;
    cfg.gamma = a.gamma;
    cfg.max_iter = a.max_iter;
    cfg.tol = a.tol;
    cfg.init_zero = a.init_zero;
    cfg.continuation = !a.no_continuation;
    cfg.lambda = a.lambda > 0.0
                     ? a.lambda
                     : a.lambda_rel *
                           std::max(nrm_inf(frame.analyze(op.apply_adjoint(b))), 1e-300);

    SolveReport rep = pfista(op, b, frame, cfg);

    std::vector<std::string> files;
    write_vector_csv((dir / "recovered.csv").string(), rep.x);
    files.push_back("recovered.csv");
    if (have_truth) {
        write_vector_csv((dir / "truth.csv").string(), x0);
        files.push_back("truth.csv");
    }

    json bundle;
    bundle["command"] = "solve";
    bundle["seed"] = a.seed;
    bundle["config"] = {{"n", frame.n()},      {"d", frame.d()},
                        {"m", op.rows()},      {"ell", a.toy || !a.from.empty() ? -1 : a.ell},
                        {"method", a.method},  {"lambda", cfg.lambda},
                        {"max_iter", cfg.max_iter}, {"tol", cfg.tol},
                        {"continuation", cfg.continuation}, {"toy", a.toy}};
    bundle["config"]["prox"] = prox_json(method.prox);
    json metrics;
    metrics["iterations"] = rep.iterations;
    metrics["converged"] = rep.converged;
    metrics["gamma"] = rep.gamma;
    metrics["lambda"] = rep.lambda;
    metrics["final_objective"] = rep.final_objective;
    metrics["wall_time_s"] = rep.wall_time_s;
    if (have_truth) {
        const double xn = nrm2(x0);
        metrics["rel_err"] = xn > 0.0 ? nrm2(sub(rep.x, x0)) / xn : -1.0;
    }
    bundle["metrics"] = metrics;
    write_bundle(dir, "solve_report.json", std::move(bundle), files);
    return 0;
}

// ---------------------------------------------------------------------------
// phase

struct PhaseArgs {
    int n = 64, trials = 20, max_iter = 1000;
    double redundancy = 1.0, step = 0.1, eps = 1e-2, lambda_rel = 1e-5, tol = 1e-6;
    std::string methods = "l1,l1l2,lp_0.5", out = ".";
    bool full_scale = false, serial = false;
    std::uint64_t seed = 42;
};

int run_phase(const PhaseArgs& a) {
    const fs::path dir = ensure_dir(a.out);
    PhaseGrid grid;
    if (a.full_scale) {
        grid = full_phase_grid();
    } else {
        grid = desk_phase_grid();
        grid.n = a.n;
        grid.trials = a.trials;
        if (a.step != 0.1) {
            const int steps = static_cast<int>(std::lround(1.0 / a.step));
            if (steps < 1 || std::abs(steps * a.step - 1.0) > 1e-9)
                throw std::invalid_argument("phase: step must divide 1 evenly");
            grid.varrho.resize(steps);
            grid.rho.resize(steps);
            for (int i = 0; i < steps; ++i) grid.varrho[i] = grid.rho[i] = (i + 1) * a.step;
        }
    }
    grid.redundancy = a.redundancy;
    grid.eps = a.eps;
    grid.lambda_rel = a.lambda_rel;
    grid.max_iter = a.max_iter;
    grid.tol = a.tol;

    const std::vector<MethodSpec> methods = parse_methods(a.methods, false);
    PhaseResult res = run_phase_transition(grid, methods, a.seed, !a.serial);

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"rho", "varrho", "method", "success_rate", "mean_time_s"});
    for (const PhaseCell& c : res.cells)
        rows.push_back({format_real(c.rho), format_real(c.varrho), c.method,
                        format_real(c.success_rate()), format_real(c.mean_time_s)});
    write_csv((dir / "phase.csv").string(), rows);

    json bundle;
    bundle["command"] = "phase";
    bundle["seed"] = a.seed;
    bundle["config"] = {{"n", grid.n},
                        {"redundancy", grid.redundancy},
                        {"trials", grid.trials},
                        {"eps", grid.eps},
                        {"lambda_rel", grid.lambda_rel},
                        {"max_iter", grid.max_iter},
                        {"tol", grid.tol},
                        {"varrho", grid.varrho},
                        {"rho", grid.rho},
                        {"methods", json::array()},
                        {"full_scale", a.full_scale}};
    for (const MethodSpec& m : methods) bundle["config"]["methods"].push_back(m.name);
    bundle["warnings"] = res.warnings;
    json cells = json::array();
    for (const PhaseCell& c : res.cells)
        cells.push_back({{"rho", c.rho},
                         {"varrho", c.varrho},
                         {"method", c.method},
                         {"m", c.m},
                         {"d", c.d},
                         {"ell", c.ell},
                         {"counted", c.counted},
                         {"successes", c.successes},
                         {"solver_failures", c.solver_failures},
                         {"skipped", c.skipped},
                         {"mean_time_s", c.mean_time_s}});
    bundle["cells"] = std::move(cells);
    write_bundle(dir, "phase_bundle.json", std::move(bundle), {"phase.csv"});
    return 0;
}

// ---------------------------------------------------------------------------
// mri

struct MriArgs {
    int size = 64, lines = 24, levels = 4, max_iter = 300;
    double lambda = 0.0, tol = 1e-6, noise_sigma = 0.0;
    std::string methods = "zero_fill,l1,l1l2", out = ".";
    std::uint64_t seed = 42;
};

int run_mri(const MriArgs& a) {
    const fs::path dir = ensure_dir(a.out);
    const std::vector<MethodSpec> methods = parse_methods(a.methods, true);
    const Mat phantom = shepp_logan(a.size);
    const RadialMask mask = radial_mask(a.size, a.lines);
    const Sidwt2D frame(a.size, a.levels);

    SolverConfig cfg;
    cfg.lambda = a.lambda;
    cfg.max_iter = a.max_iter;
    cfg.tol = a.tol;

    std::vector<std::string> files;
    write_pgm16((dir / "truth.pgm").string(), phantom, 0.0, 1.0);
    files.push_back("truth.pgm");
    {
        Mat mk(mask.n, mask.n);
        for (std::size_t i = 0; i < mk.a.size(); ++i) mk.a[i] = mask.mask[i];
        write_pgm16((dir / "mask.pgm").string(), mk, 0.0, 1.0);
        files.push_back("mask.pgm");
    }

    json per_method;
    for (const MethodSpec& m : methods) {
        MriResult r = mri_reconstruct(phantom, mask, frame, m, cfg, a.noise_sigma,
                                      derive_seed(a.seed, 11));
        double lo = 0.0, hi = 1.0;
        for (double v : r.image.a) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        double dmax = 1e-300;
        for (double v : r.difference.a) dmax = std::max(dmax, std::abs(v));
        const std::string recon = "recon_" + m.name + ".pgm";
        const std::string diff = "diff_" + m.name + ".pgm";
        write_pgm16((dir / recon).string(), r.image, lo, hi);
        write_pgm16((dir / diff).string(), r.difference, -dmax, dmax);
        files.push_back(recon);
        files.push_back(diff);
        per_method[m.name] = {{"re", r.re},
                              {"wall_time_s", r.wall_time_s},
                              {"iterations", r.iterations},
                              {"lambda", r.lambda},
                              {"recon_file", recon},
                              {"recon_scale", {{"lo", lo}, {"hi", hi}}},
                              {"diff_file", diff},
                              {"diff_scale", {{"lo", -dmax}, {"hi", dmax}}}};
    }

    json bundle;
    bundle["command"] = "mri";
    bundle["seed"] = a.seed;
    bundle["config"] = {{"size", a.size},           {"lines", a.lines},
                        {"levels", a.levels},       {"max_iter", a.max_iter},
                        {"lambda", a.lambda},       {"tol", a.tol},
                        {"noise_sigma", a.noise_sigma},
                        {"sampling_rate", mask.sampling_rate}};
    bundle["methods"] = std::move(per_method);
    write_bundle(dir, "mri_metrics.json", std::move(bundle), files);
    return 0;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyArgs {
    int n = 6, d = 8, m = 24, s = 2, t = 2;
    double alpha = 1.0;
    std::string mode = "exhaustive", out = ".";
    long long samples = 100000;
    bool identity = false, lemma_check = false;
    std::uint64_t seed = 42;
};

json rip_json(const RipEstimate& r) {
    return {{"s", r.s},
            {"delta", r.delta},
            {"witness_support", r.witness_support},
            {"exhaustive", r.exhaustive},
            {"supports_checked", r.supports_checked}};
}

json roc_json(const RocEstimate& r) {
    return {{"s", r.s},
            {"t", r.t},
            {"theta", r.theta},
            {"witness_s", r.witness_s},
            {"witness_t", r.witness_t},
            {"exhaustive", r.exhaustive},
            {"pairs_checked", r.pairs_checked}};
}

int run_certify(const CertifyArgs& a) {
    const fs::path dir = ensure_dir(a.out);
    CertMode mode;
    if (a.mode == "exhaustive") {
        mode.exhaustive = true;
    } else if (a.mode == "sampled") {
        mode = sampled_mode(static_cast<std::int64_t>(a.samples), a.seed);
    } else {
        throw std::invalid_argument("certify: mode must be exhaustive or sampled");
    }

    Mat amat, dmat;
    if (a.identity) {
        amat = identity(a.n);
        dmat = identity(a.n);
    } else {
        amat = gaussian_matrix(a.m, a.n, a.seed);
        for (double& v : amat.a) v /= std::sqrt(static_cast<double>(a.m));
        dmat = *random_tight_frame(a.n, a.d, derive_seed(a.seed, 1)).dense();
    }

    const int dim = dmat.cols;
    if (a.s + a.t > dim)
        throw std::invalid_argument("certify: need s + t <= d for disjoint supports");

    RipEstimate rip = drip_delta(amat, dmat, a.s, mode);
    RocEstimate roc = droc_theta(amat, dmat, a.s, a.t, mode);
    ConditionReport cond = eval_conditions(amat, dmat, a.s, a.t, a.alpha, mode);

    json bundle;
    bundle["command"] = "certify";
    bundle["seed"] = a.seed;
    bundle["config"] = {{"n", amat.cols},   {"d", dim},       {"m", amat.rows},
                        {"s", a.s},         {"t", a.t},       {"alpha", a.alpha},
                        {"mode", a.mode},   {"samples", a.samples},
                        {"identity", a.identity}};
    bundle["rip"] = rip_json(rip);
    bundle["roc"] = roc_json(roc);
    bundle["conditions"] = {{"s", cond.s},
                            {"t", cond.t},
                            {"alpha", cond.alpha},
                            {"delta_order", cond.delta_order},
                            {"theta_rows", cond.theta_rows},
                            {"theta_cols", cond.theta_cols},
                            {"delta", cond.delta},
                            {"theta", cond.theta},
                            {"rho", cond.rho},
                            {"satisfied", cond.satisfied},
                            {"tau", cond.tau},
                            {"c", cond.c_const},
                            {"tau_bar", cond.tau_bar},
                            {"c_bar", cond.c_bar},
                            {"e1", cond.e1},
                            {"e2", cond.e2}};
    bundle["threshold"] = simple_rip_threshold(a.s, a.alpha);

    if (a.lemma_check) {
        if (a.s + 1 + a.t + 1 > dim)
            throw std::invalid_argument("certify: lemma check needs s + t + 2 <= d");
        RipEstimate rip_up = drip_delta(amat, dmat, a.s + 1, mode);
        RipEstimate rip_sum = drip_delta(amat, dmat, a.s + a.t, mode);
        RocEstimate roc_t = droc_theta(amat, dmat, a.s, a.t + 1, mode);
        RocEstimate roc_st = droc_theta(amat, dmat, a.s + 1, a.t + 1, mode);
        const double eps = 1e-12;
        bundle["lemma"] = {
            {"delta_monotone", rip.delta <= rip_up.delta + eps},
            {"theta_scaling",
             roc_t.theta <= std::sqrt((a.t + 1.0) / a.t) * roc.theta + eps},
            {"theta_monotone", roc.theta <= roc_st.theta + eps},
            {"theta_vs_delta", roc.theta <= rip_sum.delta + eps}};
    }
    write_bundle(dir, "certify_report.json", std::move(bundle), {});
    return 0;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    std::string what = "signal";
    int n = 64, d = 64, ell = 58, m = 48, size = 64, lines = 24;
    std::string out = ".";
    std::uint64_t seed = 42;
};

int run_gen(const GenArgs& a) {
    const fs::path dir = ensure_dir(a.out);
    std::vector<std::string> files;
    json extra;

    if (a.what == "frame") {
        const DenseFrame f = random_tight_frame(a.n, a.d, a.seed);
        write_matrix_csv((dir / "frame.csv").string(), *f.dense());
        files.push_back("frame.csv");
    } else if (a.what == "signal") {
        CosparseInstance inst = gen_cosparse(a.n, a.d, a.ell, a.seed);
        add_measurements(inst, a.m, derive_seed(a.seed, 6));
        write_matrix_csv((dir / "frame.csv").string(), inst.frame);
        write_vector_csv((dir / "x0.csv").string(), inst.x0);
        write_matrix_csv((dir / "a.csv").string(), inst.a);
        write_vector_csv((dir / "b.csv").string(), inst.b);
        Vec cosup(inst.cosupport.begin(), inst.cosupport.end());
        write_vector_csv((dir / "cosupport.csv").string(), cosup);
        files = {"frame.csv", "x0.csv", "a.csv", "b.csv", "cosupport.csv"};
    } else if (a.what == "matrix") {
        write_matrix_csv((dir / "a.csv").string(), gaussian_matrix(a.m, a.n, a.seed));
        files.push_back("a.csv");
    } else if (a.what == "mask") {
        const RadialMask mask = radial_mask(a.size, a.lines);
        Mat mk(mask.n, mask.n);
        for (std::size_t i = 0; i < mk.a.size(); ++i) mk.a[i] = mask.mask[i];
        write_pgm16((dir / "mask.pgm").string(), mk, 0.0, 1.0);
        files.push_back("mask.pgm");
        extra["sampling_rate"] = mask.sampling_rate;
        extra["sampled_cells"] = mask.count();
    } else if (a.what == "phantom") {
        write_pgm16((dir / "phantom.pgm").string(), shepp_logan(a.size), 0.0, 1.0);
        files.push_back("phantom.pgm");
    } else {
        throw std::invalid_argument("gen: unknown target '" + a.what + "'");
    }

    json bundle;
    bundle["command"] = "gen";
    bundle["seed"] = a.seed;
    bundle["config"] = {{"what", a.what}, {"n", a.n},       {"d", a.d},
                        {"ell", a.ell},   {"m", a.m},       {"size", a.size},
                        {"lines", a.lines}};
    if (!extra.is_null()) bundle["metrics"] = std::move(extra);
    write_bundle(dir, "gen_bundle.json", std::move(bundle), files);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse recovery over tight frames: solvers, phase diagrams, "
                 "MRI phantom studies, isometry certification"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SolveArgs sa;
    PhaseArgs pa;
    MriArgs ma;
    CertifyArgs ca;
    GenArgs ga;
    std::string solve_cfg, phase_cfg, mri_cfg, certify_cfg, gen_cfg;

    CLI::App* solve = app.add_subcommand("solve", "solve one recovery instance");
    Merger solve_merge(solve, &solve_cfg);
    solve->add_option("--config", solve_cfg, "JSON config file");
    solve_merge.bind("n", solve->add_option("--n", sa.n, "signal dimension"));
    solve_merge.bind("d", solve->add_option("--d", sa.d, "frame coefficient dimension"));
    solve_merge.bind("m", solve->add_option("--m", sa.m, "measurement count"));
    solve_merge.bind("ell", solve->add_option("--ell", sa.ell, "cosparsity"));
    solve_merge.bind("method", solve->add_option("--method", sa.method,
                                                 "l1 | l1l2[_alpha] | lp_<p>"));
    solve_merge.bind("lambda", solve->add_option("--lambda", sa.lambda,
                                                 "absolute weight (overrides lambda_rel)"));
    solve_merge.bind("lambda_rel",
                     solve->add_option("--lambda-rel", sa.lambda_rel,
                                       "weight relative to the data scale"));
    solve_merge.bind("gamma", solve->add_option("--gamma", sa.gamma, "step size (0: auto)"));
    solve_merge.bind("max_iter", solve->add_option("--max-iter", sa.max_iter, "iteration cap"));
    solve_merge.bind("tol", solve->add_option("--tol", sa.tol, "relative-change stop"));
    solve_merge.bind("toy", solve->add_flag("--toy", sa.toy, "identity-operator toy instance"));
    solve_merge.bind("init_zero", solve->add_flag("--init-zero", sa.init_zero, "start from 0"));
    solve_merge.bind("no_continuation",
                     solve->add_flag("--no-continuation", sa.no_continuation,
                                     "single-stage lambda"));
    solve_merge.bind("from", solve->add_option("--from", sa.from,
                                               "read instance files from this directory"));
    solve_merge.bind("out", solve->add_option("--out", sa.out, "output directory"));
    solve_merge.bind("seed", solve->add_option("--seed", sa.seed, "master seed"));

    CLI::App* phase = app.add_subcommand("phase", "success-rate grid over (rho, varrho)");
    Merger phase_merge(phase, &phase_cfg);
    phase->add_option("--config", phase_cfg, "JSON config file");
    phase_merge.bind("n", phase->add_option("--n", pa.n, "signal dimension"));
    phase_merge.bind("redundancy",
                     phase->add_option("--redundancy", pa.redundancy, "d / n ratio"));
    phase_merge.bind("step", phase->add_option("--step", pa.step, "ratio grid step"));
    phase_merge.bind("trials", phase->add_option("--trials", pa.trials, "trials per cell"));
    phase_merge.bind("eps", phase->add_option("--eps", pa.eps, "success threshold"));
    phase_merge.bind("lambda_rel",
                     phase->add_option("--lambda-rel", pa.lambda_rel, "relative weight"));
    phase_merge.bind("max_iter", phase->add_option("--max-iter", pa.max_iter, "iteration cap"));
    phase_merge.bind("tol", phase->add_option("--tol", pa.tol, "relative-change stop"));
    phase_merge.bind("methods", phase->add_option("--methods", pa.methods,
                                                  "comma-separated method list"));
    phase_merge.bind("full_scale",
                     phase->add_flag("--full-scale", pa.full_scale,
                                     "n=100, steps 0.05, 100 trials"));
    phase_merge.bind("serial", phase->add_flag("--serial", pa.serial, "disable parallelism"));
    phase_merge.bind("out", phase->add_option("--out", pa.out, "output directory"));
    phase_merge.bind("seed", phase->add_option("--seed", pa.seed, "master seed"));

    CLI::App* mri = app.add_subcommand("mri", "phantom reconstruction from radial k-space");
    Merger mri_merge(mri, &mri_cfg);
    mri->add_option("--config", mri_cfg, "JSON config file");
    mri_merge.bind("size", mri->add_option("--size", ma.size, "grid side (power of two)"));
    mri_merge.bind("lines", mri->add_option("--lines", ma.lines, "radial line count"));
    mri_merge.bind("levels", mri->add_option("--levels", ma.levels, "wavelet levels"));
    mri_merge.bind("max_iter", mri->add_option("--max-iter", ma.max_iter, "iteration cap"));
    mri_merge.bind("lambda", mri->add_option("--lambda", ma.lambda, "weight (0: auto)"));
    mri_merge.bind("tol", mri->add_option("--tol", ma.tol, "relative-change stop"));
    mri_merge.bind("noise_sigma",
                   mri->add_option("--noise-sigma", ma.noise_sigma,
                                   "k-space noise per component"));
    mri_merge.bind("methods", mri->add_option("--methods", ma.methods,
                                              "comma-separated, may include zero_fill"));
    mri_merge.bind("out", mri->add_option("--out", ma.out, "output directory"));
    mri_merge.bind("seed", mri->add_option("--seed", ma.seed, "master seed"));

    CLI::App* certify = app.add_subcommand("certify", "isometry constants and conditions");
    Merger certify_merge(certify, &certify_cfg);
    certify->add_option("--config", certify_cfg, "JSON config file");
    certify_merge.bind("n", certify->add_option("--n", ca.n, "signal dimension"));
    certify_merge.bind("d", certify->add_option("--d", ca.d, "frame coefficient dimension"));
    certify_merge.bind("m", certify->add_option("--m", ca.m, "measurement count"));
    certify_merge.bind("s", certify->add_option("--s", ca.s, "support size"));
    certify_merge.bind("t", certify->add_option("--t", ca.t, "second support size"));
    certify_merge.bind("alpha", certify->add_option("--alpha", ca.alpha, "metric weight"));
    certify_merge.bind("mode", certify->add_option("--mode", ca.mode, "exhaustive | sampled"));
    certify_merge.bind("samples",
                       certify->add_option("--samples", ca.samples, "draws in sampled mode"));
    certify_merge.bind("identity",
                       certify->add_flag("--identity", ca.identity,
                                         "identity operator and frame"));
    certify_merge.bind("lemma_check",
                       certify->add_flag("--lemma-check", ca.lemma_check,
                                         "verify the four ordering properties"));
    certify_merge.bind("out", certify->add_option("--out", ca.out, "output directory"));
    certify_merge.bind("seed", certify->add_option("--seed", ca.seed, "master seed"));

    CLI::App* gen = app.add_subcommand("gen", "write frames, instances, masks, phantoms");
    Merger gen_merge(gen, &gen_cfg);
    gen->add_option("--config", gen_cfg, "JSON config file");
    gen_merge.bind("what", gen->add_option("--what", ga.what,
                                           "frame | signal | matrix | mask | phantom"));
    gen_merge.bind("n", gen->add_option("--n", ga.n, "signal dimension"));
    gen_merge.bind("d", gen->add_option("--d", ga.d, "frame coefficient dimension"));
    gen_merge.bind("ell", gen->add_option("--ell", ga.ell, "cosparsity"));
    gen_merge.bind("m", gen->add_option("--m", ga.m, "measurement count"));
    gen_merge.bind("size", gen->add_option("--size", ga.size, "grid side"));
    gen_merge.bind("lines", gen->add_option("--lines", ga.lines, "radial line count"));
    gen_merge.bind("out", gen->add_option("--out", ga.out, "output directory"));
    gen_merge.bind("seed", gen->add_option("--seed", ga.seed, "master seed"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nRun with --help for usage.\n";
        return 2;
    }

    try {
        if (solve->parsed()) {
            solve_merge.apply();
            return run_solve(sa);
        }
        if (phase->parsed()) {
            phase_merge.apply();
            return run_phase(pa);
        }
        if (mri->parsed()) {
            mri_merge.apply();
            return run_mri(ma);
        }
        if (certify->parsed()) {
            certify_merge.apply();
            return run_certify(ca);
        }
        if (gen->parsed()) {
            gen_merge.apply();
            return run_gen(ga);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
