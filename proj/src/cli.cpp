#include "l1l2/cli.hpp"

#include "l1l2/bench.hpp"
#include "l1l2/construct.hpp"
#include "l1l2/matrix_io.hpp"
#include "l1l2/stationarity.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace l1l2 {

namespace {

std::string join(const Vec<double>& v)
{
    std::string s;
    for (Index i = 0; i < v.size(); ++i) {
        if (i)
            s += ',';
        s += format_9g(v(i) == 0 ? 0.0 : v(i));  // no "-0"
    }
    return s;
}

/// Reads `key=value` lines (blank lines and '#' comments allowed).
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

/// Expands `--config FILE`: every key=value becomes `--key=value` unless the flag is
/// already on the command line, so explicit flags win.
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    std::optional<std::string> path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + long(i));
            break;
        }
    }
    if (!path)
        return args;
    std::set<std::string> given;
    for (const auto& a : args)
        if (a.rfind("--", 0) == 0)
            given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    for (const auto& [k, v] : read_config_file(*path))
        if (!given.count(k))
            args.push_back("--" + k + "=" + v);
    return args;
}

struct GenOptions {
    std::string family = "gaussian";
    Index m = 64;
    Index n = 256;
    std::optional<double> F;
    std::uint64_t seed = 0;

    void add(CLI::App* app)
    {
        app->add_option("--family", family, "Matrix family: gaussian, dct (partial DCT) or odct (over-sampled DCT)")
            ->capture_default_str()
            ->check(CLI::IsMember({"gaussian", "dct", "odct"}));
        app->add_option("--m", m, "Rows of A")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--n", n, "Columns of A")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--F", F, "Over-sampling factor of odct (5 incoherent, 20 coherent); required for odct");
        app->add_option("--seed", seed, "Master seed")->capture_default_str();
    }
};

ScheduleSpec make_schedule(const std::string& kind, double value, double slope, double cap, double a, double r)
{
    if (kind == "constant")
        return ScheduleSpec::constant(value);
    if (kind == "linear")
        return ScheduleSpec::linear_capped(slope, cap);
    return ScheduleSpec::sigmoid(a, r);
}

Method parse_method(const std::string& s)
{
    if (s == "fbs")
        return Method::kFbs;
    if (s == "fbs_acc")
        return Method::kFbsAccelerated;
    if (s == "admm")
        return Method::kAdmm;
    if (s == "dca")
        return Method::kDca;
    throw std::invalid_argument("unknown method " + s);
}

std::vector<MethodSpec> filter_methods(std::vector<MethodSpec> all, const std::vector<std::string>& keep)
{
    if (keep.empty())
        return all;
    std::vector<MethodSpec> out;
    for (const auto& name : keep) {
        auto it = std::find_if(all.begin(), all.end(), [&](const MethodSpec& m) { return m.name == name; });
        if (it == all.end()) {
            std::string avail;
            for (const auto& m : all)
                avail += (avail.empty() ? "" : ", ") + m.name;
            throw std::invalid_argument("unknown method '" + name + "' (available: " + avail + ")");
        }
        out.push_back(*it);
    }
    return out;
}

struct BenchCommon {
    int trials = 100;
    int jobs = 1;
    std::string out = "results.csv";
    std::string meta;
    std::vector<std::string> methods;

    void add(CLI::App* app)
    {
        app->add_option("--trials", trials, "Random realizations per sweep point")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->add_option("--jobs", jobs, "Parallel worker threads")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--out", out, "Result CSV path")->capture_default_str();
        app->add_option("--meta", meta, "Metadata path (default: <out>.meta)");
        app->add_option("--methods", methods, "Comma-separated subset of the method names")->delimiter(',');
    }
};

int finish_bench(const ResultTable& t, const BenchCommon& c, std::ostream& out, std::ostream& err)
{
    write_csv(t, c.out);
    write_metadata(t, c.meta.empty() ? c.out + ".meta" : c.meta);
    for (const auto& d : t.discarded)
        err << "discarded sweep=" << format_9g(d.sweep) << " trial=" << d.trial << ": " << d.reason << '\n';
    for (const auto& f : t.failures)
        err << "failed sweep=" << format_9g(f.sweep) << " trial=" << f.trial << " method=" << f.method << ": "
            << f.reason << '\n';
    (void)out;
    return t.failures.empty() && t.discarded.empty() ? kExitOk : kExitPartial;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sparse recovery with the L1 - alpha*L2 penalty: prox evaluation, solvers, stationary-point "
                 "construction and seeded benchmark campaigns.", "l1l2"};
    app.set_help_all_flag("--help-all", "Help for every subcommand");
    app.require_subcommand(1);
    app.add_option("--config", "File of key=value lines giving flag defaults; explicit flags override it");

    // prox
    auto* prox = app.add_subcommand("prox", "Evaluate the closed-form proximal operator of ||x||_1 - alpha*||x||_2");
    std::vector<double> y;
    double p_lambda = 1, p_alpha = 1;
    std::string tie = "lowest";
    prox->add_option("--y", y, "Input vector, comma separated")->required()->delimiter(',');
    prox->add_option("--lambda", p_lambda, "Prox parameter lambda > 0")->capture_default_str();
    prox->add_option("--alpha", p_alpha, "Weight alpha >= 0 of the L2 term")->capture_default_str();
    prox->add_option("--tie", tie, "Tie rule when several |y_i| are maximal: lowest, highest, report-all-maxima")
        ->capture_default_str()
        ->check(CLI::IsMember({"lowest", "highest", "report-all-maxima"}));

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve min gamma*(||x||_1 - alpha*||x||_2) + 0.5*||Ax - b||^2");
    GenOptions s_gen;
    s_gen.add(solve_cmd);
    std::string a_path, b_path, xtrue_path, x0_path, x_out, trace_out;
    std::string method = "admm", init = "l1";
    std::optional<double> s_lambda, s_delta;
    double s_alpha = 1, s_gamma = 1e-6, s_tol = 1e-8, s_sigma = 0;
    Index s_sparsity = 10;
    int s_iter_factor = 10;
    std::string a_sched = "constant", g_sched = "constant";
    double a_slope = 0.5, a_cap = 1, a_a = 5, a_r = 0.05, g_a = -1, g_r = 0.02;
    solve_cmd->add_option("--A", a_path, "Matrix CSV (rows,cols header); omit to generate one from --family");
    solve_cmd->add_option("--b", b_path, "Measurement CSV (n,1); required with --A");
    solve_cmd->add_option("--x-true", xtrue_path, "Ground truth CSV for rel_err");
    solve_cmd->add_option("--sparsity", s_sparsity, "Nonzeros of the generated ground truth")->capture_default_str();
    solve_cmd->add_option("--sigma", s_sigma, "Noise standard deviation of generated data")->capture_default_str();
    solve_cmd->add_option("--method", method, "fbs, fbs_acc (monotone accelerated FBS), admm or dca")
        ->capture_default_str()
        ->check(CLI::IsMember({"fbs", "fbs_acc", "admm", "dca"}));
    solve_cmd->add_option("--alpha", s_alpha, "Weight alpha of the L2 term")->capture_default_str();
    solve_cmd->add_option("--gamma", s_gamma, "Regularization weight gamma")->capture_default_str();
    solve_cmd->add_option("--lambda", s_lambda, "FBS stepsize; default 0.99/L, must satisfy lambda < 1/L");
    solve_cmd->add_option("--delta", s_delta, "ADMM penalty; default 10*gamma, convergence guaranteed for delta > sqrt(2)*L");
    solve_cmd->add_option("--tol", s_tol, "Relative step tolerance")->capture_default_str();
    solve_cmd->add_option("--max-iter-factor", s_iter_factor, "Iteration cap as a multiple of N")->capture_default_str();
    solve_cmd->add_option("--alpha-schedule", a_sched, "constant, linear (min(cap, slope*k)) or sigmoid (1/(1+a e^{-rk}))")
        ->capture_default_str()
        ->check(CLI::IsMember({"constant", "linear", "sigmoid"}));
    solve_cmd->add_option("--alpha-slope", a_slope, "Slope of the linear alpha schedule")->capture_default_str();
    solve_cmd->add_option("--alpha-cap", a_cap, "Cap of the linear alpha schedule")->capture_default_str();
    solve_cmd->add_option("--alpha-a", a_a, "a of the sigmoid alpha schedule")->capture_default_str();
    solve_cmd->add_option("--alpha-r", a_r, "r of the sigmoid alpha schedule")->capture_default_str();
    solve_cmd->add_option("--gamma-schedule", g_sched, "constant or sigmoid")
        ->capture_default_str()
        ->check(CLI::IsMember({"constant", "sigmoid"}));
    solve_cmd->add_option("--gamma-a", g_a, "a of the sigmoid gamma schedule")->capture_default_str();
    solve_cmd->add_option("--gamma-r", g_r, "r of the sigmoid gamma schedule")->capture_default_str();
    solve_cmd->add_option("--init", init, "Start point: l1 (2N ADMM iterations on the L1 problem) or zero")
        ->capture_default_str()
        ->check(CLI::IsMember({"l1", "zero"}));
    solve_cmd->add_option("--x0", x0_path, "Start point CSV (overrides --init)");
    solve_cmd->add_option("--out", x_out, "Write the solution to this CSV");
    solve_cmd->add_option("--trace", trace_out, "Write the per-iteration trace to this CSV");

    // construct
    auto* construct_cmd =
        app.add_subcommand("construct", "Build b so that a random sparse x* is a stationary point (POCS certificate)");
    GenOptions c_gen;
    c_gen.add(construct_cmd);
    Index c_sparsity = 10;
    double c_gamma = 0.01;
    int c_trials = 1;
    std::string c_dir;
    construct_cmd->add_option("--sparsity", c_sparsity, "Nonzeros of x*")->capture_default_str();
    construct_cmd->add_option("--gamma", c_gamma, "Regularization weight gamma")->capture_default_str();
    construct_cmd->add_option("--trials", c_trials, "Independent constructions")->capture_default_str();
    construct_cmd->add_option("--out-dir", c_dir, "Write A_<t>.csv, b_<t>.csv and x_<t>.csv here");

    // bench
    auto* bench = app.add_subcommand("bench", "Seeded experiment campaigns writing CSV results");
    bench->require_subcommand(1);

    auto* b_success = bench->add_subcommand("success", "Noise-free success rates versus sparsity");
    GenOptions bs_gen;
    bs_gen.add(b_success);
    BenchCommon bs_common;
    bs_common.add(b_success);
    std::vector<double> bs_sparsity{5, 10, 15, 20, 25, 30, 35};
    std::optional<double> bs_gamma;
    b_success->add_option("--sparsity", bs_sparsity, "Sparsity levels to sweep")->delimiter(',')->capture_default_str();
    b_success->add_option("--gamma", bs_gamma, "Regularization weight; default 1e-6 (1e-7 for odct)");

    auto* b_constructed =
        bench->add_subcommand("constructed", "Convergence to constructed stationary points versus gamma");
    GenOptions bc_gen;
    bc_gen.add(b_constructed);
    BenchCommon bc_common;
    bc_common.trials = 20;
    bc_common.add(b_constructed);
    std::vector<double> bc_gammas{0.1, 0.01, 0.001};
    Index bc_sparsity = 10;
    std::string bc_traces;
    b_constructed->add_option("--gamma", bc_gammas, "Regularization weights to sweep")
        ->delimiter(',')
        ->capture_default_str();
    b_constructed->add_option("--sparsity", bc_sparsity, "Nonzeros of x*")->capture_default_str();
    b_constructed->add_option("--trace-dir", bc_traces, "Directory for trace_<method>_<gamma>_<trial>.csv files");

    auto* b_noisy = bench->add_subcommand("noisy", "MSE of noisy recovery versus the number of measurements");
    BenchCommon bn_common;
    bn_common.add(b_noisy);
    std::vector<double> bn_ms{238, 250, 276, 300};
    Index bn_n = 512, bn_k = 130;
    double bn_sigma = 0.1, bn_gamma = 0.8;
    std::uint64_t bn_seed = 0;
    std::string bn_columns = "unit-norm";
    b_noisy->add_option("--m", bn_ms, "Measurement counts to sweep")->delimiter(',')->capture_default_str();
    b_noisy->add_option("--n", bn_n, "Signal length")->capture_default_str();
    b_noisy->add_option("--sparsity", bn_k, "Nonzeros of the signal")->capture_default_str();
    b_noisy->add_option("--sigma", bn_sigma, "Noise standard deviation")->capture_default_str();
    b_noisy->add_option("--gamma", bn_gamma, "Fixed gamma of the ADMM run and of the L1 start")->capture_default_str();
    b_noisy->add_option("--seed", bn_seed, "Master seed")->capture_default_str();
    b_noisy->add_option("--columns", bn_columns, "Column scaling after centering: unit-norm or unit-variance")
        ->capture_default_str()
        ->check(CLI::IsMember({"unit-norm", "unit-variance"}));

    try {
        args = expand_config(std::move(args));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFatal;
    }

    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        // Subcommand help requests arrive as CallForHelp from the subcommand parser.
        if (e.get_exit_code() == 0) {
            const CLI::App* target = &app;
            for (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub;
                 sub = sub->get_subcommands().empty() ? nullptr : sub->get_subcommands().front())
                target = sub;
            out << target->help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitFatal;
    }

    try {
        if (*prox) {
            const Vec<double> yv = Eigen::Map<const Vec<double>>(y.data(), Index(y.size()));
            const TieRule rule = tie == "highest" ? TieRule::kHighestIndex : TieRule::kLowestIndex;
            const auto r = prox_l1_al2(yv, p_lambda, p_alpha, rule);
            out << "x=" << join(r.x) << " case=" << to_string(r.case_id) << " unique=" << (r.is_unique ? "true" : "false")
                << '\n';
            if (tie == "report-all-maxima" && !r.is_unique)
                for (const auto& c : prox_candidates(yv, p_lambda, p_alpha))
                    out << "candidate=" << join(c) << '\n';
            return kExitOk;
        }

        if (*solve_cmd) {
            ProblemInstance<double> p;
            if (!a_path.empty()) {
                if (b_path.empty())
                    throw std::invalid_argument("--A needs --b");
                p.A = read_matrix_csv(a_path);
                p.b = read_vector_csv(b_path);
                if (!xtrue_path.empty())
                    p.x_true = read_vector_csv(xtrue_path);
            } else {
                const auto seed = trial_seed(s_gen.seed, double(s_sparsity), 0);
                Mat<double> A =
                    make_matrix(parse_family(s_gen.family), s_gen.m, s_gen.n, s_gen.F, derive_seed(seed, Stream::kMatrix));
                const auto sig = gen_sparse_signal<double>(s_gen.n, s_sparsity, derive_seed(seed, Stream::kSignal));
                p = make_instance<double>(std::move(A), sig.x, s_sigma, {s_alpha, s_gamma},
                                          derive_seed(seed, Stream::kNoise));
            }
            p.penalty = {s_alpha, s_gamma};
            p.validate();

            SolverConfig<double> cfg;
            cfg.method = parse_method(method);
            cfg.lambda = s_lambda;
            cfg.delta = s_delta;
            cfg.tol = s_tol;
            cfg.max_iter_factor = s_iter_factor;
            cfg.alpha_schedule = make_schedule(a_sched, s_alpha, a_slope, a_cap, a_a, a_r);
            cfg.gamma_schedule = make_schedule(g_sched, s_gamma, 0, 0, g_a, g_r);

            Vec<double> x0;
            if (!x0_path.empty())
                x0 = read_vector_csv(x0_path);
            else if (init == "zero")
                x0 = Vec<double>::Zero(p.cols());
            else
                x0 = l1_init(p, s_gamma, s_delta);

            const auto trace = solve(p, cfg, x0);
            for (const auto& w : trace.warnings)
                err << "warning: " << w << '\n';
            if (!x_out.empty())
                write_vector_csv(x_out, trace.x);
            if (!trace_out.empty())
                write_trace_csv(trace, trace_out);
            out << "rel_err=" << format_9g(detail::rel_err(p, trace.x)) << " objective=" << format_9g(trace.final_objective)
                << " iterations=" << trace.iterations << " converged=" << (trace.converged ? "true" : "false")
                << " matvecs=" << trace.matvecs << '\n';
            return kExitOk;
        }

        if (*construct_cmd) {
            const auto family = parse_family(c_gen.family);
            if (!c_dir.empty())
                std::filesystem::create_directories(c_dir);
            int ok = 0, discarded = 0;
            double worst = 0;
            for (int t = 0; t < c_trials; ++t) {
                const auto seed = trial_seed(c_gen.seed, c_gamma, std::uint64_t(t));
                Mat<double> A = make_matrix(family, c_gen.m, c_gen.n, c_gen.F, derive_seed(seed, Stream::kMatrix));
                const auto sig = gen_sparse_signal<double>(c_gen.n, c_sparsity, derive_seed(seed, Stream::kSignal));
                ConstructionResult<double> cr;
                try {
                    cr = construct_stationary_instance<double>(A, sig.x, c_gamma);
                } catch (const RankDeficientError& e) {
                    err << "discarded trial " << t << ": " << e.what() << '\n';
                    ++discarded;
                    continue;
                }
                if (!cr.converged) {
                    err << "discarded trial " << t << ": POCS did not converge in " << cr.pocs_iterations
                        << " iterations\n";
                    ++discarded;
                    continue;
                }
                ++ok;
                ProblemInstance<double> p;
                p.A = A;
                p.b = cr.b;
                p.penalty = {1.0, c_gamma};
                worst = std::max(worst, stationarity_residual(p, sig.x));
                if (!c_dir.empty()) {
                    const auto base = std::filesystem::path(c_dir);
                    write_matrix_csv((base / ("A_" + std::to_string(t) + ".csv")).string(), A);
                    write_vector_csv((base / ("b_" + std::to_string(t) + ".csv")).string(), cr.b);
                    write_vector_csv((base / ("x_" + std::to_string(t) + ".csv")).string(), sig.x);
                }
            }
            out << "converged=" << ok << " discarded=" << discarded << " max_residual=" << format_9g(worst) << '\n';
            return discarded == 0 ? kExitOk : kExitPartial;
        }

        if (*b_success) {
            ExperimentSpec spec;
            spec.kind = ExperimentKind::kSuccess;
            spec.family = parse_family(bs_gen.family);
            spec.m = bs_gen.m;
            spec.n = bs_gen.n;
            spec.F = bs_gen.F;
            spec.master_seed = bs_gen.seed;
            spec.sweep = bs_sparsity;
            spec.trials = bs_common.trials;
            spec.jobs = bs_common.jobs;
            spec.gamma = bs_gamma;
            spec.methods = filter_methods(default_success_methods(spec.family, spec.F), bs_common.methods);
            const auto t = run_success_experiment(spec);
            int succ = 0;
            for (const auto& s : summarize(t)) {
                out << "sparsity=" << format_9g(s.sweep) << " method=" << s.method
                    << " success_rate=" << format_fixed(s.success_rate, 2) << " trials=" << s.trials
                    << " mean_matvecs=" << format_9g(s.mean_matvecs) << '\n';
                succ += s.successes;
            }
            const double rate = t.rows.empty() ? 0.0 : double(succ) / double(t.rows.size());
            out << "success_rate=" << format_fixed(rate, 2) << " runs=" << t.rows.size()
                << " failures=" << t.failures.size() << '\n';
            return finish_bench(t, bs_common, out, err);
        }

        if (*b_constructed) {
            ExperimentSpec spec;
            spec.kind = ExperimentKind::kConstructed;
            spec.family = parse_family(bc_gen.family);
            spec.m = bc_gen.m;
            spec.n = bc_gen.n;
            spec.F = bc_gen.F;
            spec.master_seed = bc_gen.seed;
            spec.sweep = bc_gammas;
            spec.sparsity = bc_sparsity;
            spec.trials = bc_common.trials;
            spec.jobs = bc_common.jobs;
            spec.success_threshold = 1e-6;
            if (!bc_traces.empty())
                spec.trace_dir = bc_traces;
            spec.methods = filter_methods(default_constructed_methods(), bc_common.methods);
            const auto t = run_constructed_experiment(spec);
            int succ = 0;
            for (const auto& s : summarize(t)) {
                out << "gamma=" << format_9g(s.sweep) << " method=" << s.method
                    << " success_rate=" << format_fixed(s.success_rate, 2) << " trials=" << s.trials
                    << " mean_matvecs=" << format_9g(s.mean_matvecs) << '\n';
                succ += s.successes;
            }
            const double rate = t.rows.empty() ? 0.0 : double(succ) / double(t.rows.size());
            out << "success_rate=" << format_fixed(rate, 2) << " runs=" << t.rows.size()
                << " discarded=" << t.discarded.size() << " failures=" << t.failures.size() << '\n';
            return finish_bench(t, bc_common, out, err);
        }

        if (*b_noisy) {
            ExperimentSpec spec;
            spec.kind = ExperimentKind::kNoisy;
            spec.n = bn_n;
            spec.sparsity = bn_k;
            spec.sigma = bn_sigma;
            spec.gamma = bn_gamma;
            spec.master_seed = bn_seed;
            spec.sweep = bn_ms;
            spec.trials = bn_common.trials;
            spec.jobs = bn_common.jobs;
            spec.noisy_normalization =
                bn_columns == "unit-norm" ? ColumnNormalization::kCenterUnitNorm : ColumnNormalization::kCenterUnitVariance;
            spec.methods = filter_methods(default_noisy_methods(), bn_common.methods);
            const auto t = run_noisy_experiment(spec);
            const auto cal = t.metadata.find("mse_calibration");
            const double scale = cal == t.metadata.end() ? 1.0 : parse_double(cal->second);
            for (const auto& s : summarize(t, scale))
                out << "m=" << format_9g(s.sweep) << " method=" << s.method << " mse=" << format_9g(s.mean_mse)
                    << " se=" << format_9g(s.se_mse) << " trials=" << s.trials << '\n';
            out << "mse_calibration=" << (cal == t.metadata.end() ? std::string("none") : cal->second)
                << " runs=" << t.rows.size() << " failures=" << t.failures.size() << '\n';
            return finish_bench(t, bn_common, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFatal;
    }
    return kExitFatal;
}

}  // namespace l1l2
