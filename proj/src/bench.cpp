#include "l1l2/bench.hpp"

#include "l1l2/construct.hpp"
#include "l1l2/matrix_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace l1l2 {

const char* to_string(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::kSuccess: return "success";
    case ExperimentKind::kConstructed: return "constructed";
    case ExperimentKind::kNoisy: return "noisy";
    }
    return "?";
}

const char* to_string(MatrixFamily f)
{
    switch (f) {
    case MatrixFamily::kGaussian: return "gaussian";
    case MatrixFamily::kPartialDct: return "dct";
    case MatrixFamily::kOversampledDct: return "odct";
    }
    return "?";
}

MatrixFamily parse_family(const std::string& s)
{
    if (s == "gaussian")
        return MatrixFamily::kGaussian;
    if (s == "dct")
        return MatrixFamily::kPartialDct;
    if (s == "odct")
        return MatrixFamily::kOversampledDct;
    throw std::invalid_argument("unknown matrix family '" + s + "' (expected gaussian, dct or odct)");
}

void ExperimentSpec::validate() const
{
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (sweep.empty())
        throw std::invalid_argument("sweep must be nonempty");
    if (m < 1 || n < 1)
        throw std::invalid_argument("matrix dimensions must be positive");
    if (family == MatrixFamily::kOversampledDct && !F)
        throw std::invalid_argument("over-sampled DCT needs F");
    if (jobs < 1)
        throw std::invalid_argument("jobs must be >= 1");
    if (!(sigma >= 0))
        throw std::invalid_argument("sigma must be >= 0");
    std::vector<std::string> names;
    for (const auto& ms : methods) {
        if (ms.name.empty() || ms.name == "oracle")
            throw std::invalid_argument("invalid method name '" + ms.name + "'");
        names.push_back(ms.name);
    }
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
        throw std::invalid_argument("duplicate method names");
}

void ResultTable::sort_rows()
{
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.sweep, a.method, a.trial) < std::tie(b.sweep, b.method, b.trial);
    });
}

std::vector<MethodSpec> default_success_methods(MatrixFamily family, std::optional<double> F)
{
    SolverConfig<double> admm;
    admm.method = Method::kAdmm;
    admm.trace_level = TraceLevel::kSummary;

    SolverConfig<double> l1 = admm;
    l1.alpha_schedule = ScheduleSpec::constant(0.0);

    // Coherent matrices get a smooth alpha ramp, incoherent ones a steep capped line.
    SolverConfig<double> weighted = admm;
    const bool coherent = family == MatrixFamily::kOversampledDct && F && *F >= 10;
    weighted.alpha_schedule = coherent ? ScheduleSpec::sigmoid(5.0, 0.05) : ScheduleSpec::linear_capped(0.5, 1.0);

    SolverConfig<double> dca = admm;
    dca.method = Method::kDca;

    return {{"admm", admm}, {"dca", dca}, {"l1_admm", l1}, {"weighted", weighted}};
}

std::vector<MethodSpec> default_constructed_methods()
{
    SolverConfig<double> fbs;
    fbs.method = Method::kFbsAccelerated;
    fbs.lambda = 1.0;
    fbs.trace_level = TraceLevel::kFull;

    SolverConfig<double> admm;
    admm.method = Method::kAdmm;
    admm.delta = 0.1;
    admm.trace_level = TraceLevel::kFull;

    SolverConfig<double> dca = admm;
    dca.method = Method::kDca;

    return {{"admm", admm}, {"dca", dca}, {"fbs", fbs}};
}

std::vector<MethodSpec> default_noisy_methods()
{
    SolverConfig<double> l1l2_fbs;
    l1l2_fbs.method = Method::kFbsAccelerated;
    l1l2_fbs.gamma_schedule = ScheduleSpec::sigmoid(-1.0, 0.02);
    l1l2_fbs.alpha_schedule = ScheduleSpec::constant(1.0);
    l1l2_fbs.trace_level = TraceLevel::kSummary;

    SolverConfig<double> l1_fbs = l1l2_fbs;
    l1_fbs.alpha_schedule = ScheduleSpec::constant(0.0);

    SolverConfig<double> admm;
    admm.method = Method::kAdmm;
    admm.gamma_schedule = ScheduleSpec::constant(0.8);
    admm.alpha_schedule = ScheduleSpec::constant(1.0);
    admm.trace_level = TraceLevel::kSummary;

    return {{"l1_fbs", l1_fbs}, {"l1l2_admm", admm}, {"l1l2_fbs", l1l2_fbs}};
}

Mat<double> make_matrix(MatrixFamily family, Index m, Index n, std::optional<double> F, std::uint64_t seed)
{
    switch (family) {
    case MatrixFamily::kGaussian: return spectral_normalize(gen_gaussian<double>(m, n, seed));
    case MatrixFamily::kPartialDct: return spectral_normalize(gen_partial_dct<double>(m, n, seed));
    case MatrixFamily::kOversampledDct:
        if (!F)
            throw std::invalid_argument("over-sampled DCT needs F");
        return spectral_normalize(gen_oversampled_dct<double>(m, n, *F, seed));
    }
    throw std::invalid_argument("unknown matrix family");
}

namespace {

using Clock = std::chrono::steady_clock;

struct PendingTrace {
    std::string file;
    SolverTrace<double> trace;
};

struct TrialOutcome {
    std::vector<ResultRow> rows;
    std::vector<TrialNote> discarded;
    std::vector<TrialNote> failures;
    std::vector<PendingTrace> traces;
};

/// Runs fn(task) for task in [0, count) on `jobs` threads; results are stored per task so the
/// aggregate never depends on scheduling.
std::vector<TrialOutcome> run_pool(std::size_t count, int jobs, const std::function<TrialOutcome(std::size_t)>& fn)
{
    std::vector<TrialOutcome> out(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < count; t = next++)
            out[t] = fn(t);
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
    }
    return out;
}

ResultTable collect(std::vector<TrialOutcome> outcomes, const std::optional<std::string>& trace_dir)
{
    ResultTable table;
    if (trace_dir)
        std::filesystem::create_directories(*trace_dir);
    for (auto& o : outcomes) {
        table.rows.insert(table.rows.end(), o.rows.begin(), o.rows.end());
        table.discarded.insert(table.discarded.end(), o.discarded.begin(), o.discarded.end());
        table.failures.insert(table.failures.end(), o.failures.begin(), o.failures.end());
        if (trace_dir)
            for (const auto& pt : o.traces)
                write_trace_csv(pt.trace, (std::filesystem::path(*trace_dir) / pt.file).string());
    }
    table.sort_rows();
    return table;
}

template <typename Fn>
std::vector<TrialOutcome> for_each_trial(const ExperimentSpec& spec, Fn&& body)
{
    const std::size_t trials = static_cast<std::size_t>(spec.trials);
    return run_pool(spec.sweep.size() * trials, spec.jobs, [&](std::size_t task) {
        const double sweep = spec.sweep[task / trials];
        const int trial = static_cast<int>(task % trials);
        TrialOutcome out;
        try {
            body(sweep, trial, trial_seed(spec.master_seed, sweep, static_cast<std::uint64_t>(trial)), out);
        } catch (const std::exception& e) {
            out.failures.push_back({sweep, trial, "", e.what()});
        }
        return out;
    });
}

/// Runs one method and fills the timing and counters of a row; failures become notes.
bool run_method(const MethodSpec& ms, const ProblemInstance<double>& p, const Vec<double>& x0, ResultRow& row,
                SolverTrace<double>& trace, TrialOutcome& out)
{
    const auto t0 = Clock::now();
    try {
        trace = solve(p, ms.config, x0);
    } catch (const std::exception& e) {
        out.failures.push_back({row.sweep, row.trial, ms.name, e.what()});
        return false;
    }
    row.time_sec = std::chrono::duration<double>(Clock::now() - t0).count();
    row.method = ms.name;
    row.iterations = trace.iterations;
    row.matvecs = trace.matvecs;
    row.rel_err = detail::rel_err(p, trace.x);
    row.mse = (trace.x - *p.x_true).squaredNorm();
    return true;
}

void put_common_metadata(ResultTable& t, const ExperimentSpec& spec)
{
    t.metadata["kind"] = to_string(spec.kind);
    t.metadata["family"] = to_string(spec.family);
    t.metadata["m"] = std::to_string(spec.m);
    t.metadata["n"] = std::to_string(spec.n);
    if (spec.F)
        t.metadata["F"] = format_9g(*spec.F);
    t.metadata["trials"] = std::to_string(spec.trials);
    t.metadata["master_seed"] = std::to_string(spec.master_seed);
    t.metadata["discarded_trials"] = std::to_string(t.discarded.size());
    t.metadata["failed_runs"] = std::to_string(t.failures.size());
}

}  // namespace

ResultTable run_success_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    if (spec.kind != ExperimentKind::kSuccess)
        throw std::invalid_argument("run_success_experiment: spec kind is not success");
    const double gamma = spec.gamma.value_or(spec.family == MatrixFamily::kOversampledDct ? 1e-7 : 1e-6);
    const auto methods = spec.methods.empty() ? default_success_methods(spec.family, spec.F) : spec.methods;

    auto outcomes = for_each_trial(spec, [&](double sweep, int trial, std::uint64_t seed, TrialOutcome& out) {
        const Index k = static_cast<Index>(std::llround(sweep));
        Mat<double> A = make_matrix(spec.family, spec.m, spec.n, spec.F, derive_seed(seed, Stream::kMatrix));
        const auto sig = gen_sparse_signal<double>(spec.n, k, derive_seed(seed, Stream::kSignal));
        const auto p = make_instance<double>(std::move(A), sig.x, 0.0, {1.0, gamma}, 0);
        const Vec<double> x0 = l1_init(p, gamma);
        for (const auto& ms : methods) {
            ResultRow row{sweep, ms.name, trial, seed};
            SolverTrace<double> trace;
            if (!run_method(ms, p, x0, row, trace, out))
                continue;
            row.success = row.rel_err < spec.success_threshold;
            out.rows.push_back(row);
        }
    });
    ResultTable t = collect(std::move(outcomes), std::nullopt);
    put_common_metadata(t, spec);
    t.metadata["gamma"] = format_9g(gamma);
    t.metadata["success_rule"] = "rel_err<" + format_9g(spec.success_threshold);
    return t;
}

std::string trace_file_name(const std::string& method, double sweep, int trial)
{
    return "trace_" + method + "_" + format_9g(sweep) + "_" + std::to_string(trial) + ".csv";
}

ResultTable run_constructed_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    if (spec.kind != ExperimentKind::kConstructed)
        throw std::invalid_argument("run_constructed_experiment: spec kind is not constructed");
    const auto methods = spec.methods.empty() ? default_constructed_methods() : spec.methods;
    const bool keep_traces = spec.trace_dir.has_value();

    auto outcomes = for_each_trial(spec, [&](double gamma, int trial, std::uint64_t seed, TrialOutcome& out) {
        Mat<double> A = make_matrix(spec.family, spec.m, spec.n, spec.F, derive_seed(seed, Stream::kMatrix));
        const auto sig = gen_sparse_signal<double>(spec.n, spec.sparsity, derive_seed(seed, Stream::kSignal));
        Mat<double> U;
        try {
            U = orthonormal_range_basis(A);
        } catch (const RankDeficientError& e) {
            out.discarded.push_back({gamma, trial, "", e.what()});
            return;
        }
        const auto pocs = pocs_sign_vector<double>(U, sig.x);
        if (!pocs.converged) {
            out.discarded.push_back({gamma, trial, "",
                                     "POCS did not converge in " + std::to_string(pocs.pocs_iterations) +
                                         " iterations (last step " + format_9g(pocs.step_norms.back()) + ")"});
            return;
        }
        ProblemInstance<double> p;
        p.b = construct_b<double>(A, sig.x, gamma, pocs.w);
        p.A = std::move(A);
        p.x_true = sig.x;
        p.penalty = {1.0, gamma};
        p.validate();
        const Vec<double> x0 = l1_init(p, gamma);
        for (const auto& ms : methods) {
            ResultRow row{gamma, ms.name, trial, seed};
            SolverTrace<double> trace;
            if (!run_method(ms, p, x0, row, trace, out))
                continue;
            row.success = row.rel_err < spec.success_threshold;
            out.rows.push_back(row);
            if (keep_traces)
                out.traces.push_back({trace_file_name(ms.name, gamma, trial), std::move(trace)});
        }
    });
    ResultTable t = collect(std::move(outcomes), spec.trace_dir);
    put_common_metadata(t, spec);
    t.metadata["sparsity"] = std::to_string(spec.sparsity);
    t.metadata["success_rule"] = "rel_err<" + format_9g(spec.success_threshold);
    return t;
}

ResultTable run_noisy_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    if (spec.kind != ExperimentKind::kNoisy)
        throw std::invalid_argument("run_noisy_experiment: spec kind is not noisy");
    const auto methods = spec.methods.empty() ? default_noisy_methods() : spec.methods;
    const double gamma = spec.gamma.value_or(0.8);

    auto outcomes = for_each_trial(spec, [&](double sweep, int trial, std::uint64_t seed, TrialOutcome& out) {
        const Index m = static_cast<Index>(std::llround(sweep));
        Mat<double> A = gen_gaussian<double>(m, spec.n, derive_seed(seed, Stream::kMatrix), spec.noisy_normalization);
        const auto sig = gen_sparse_signal<double>(spec.n, spec.sparsity, derive_seed(seed, Stream::kSignal));
        const double oracle = oracle_mse(A, sig.support, spec.sigma);
        const auto p = make_instance<double>(std::move(A), sig.x, spec.sigma, {1.0, gamma},
                                             derive_seed(seed, Stream::kNoise));
        ResultRow orow{sweep, "oracle", trial, seed};
        orow.success = true;
        orow.rel_err = std::numeric_limits<double>::quiet_NaN();
        orow.mse = oracle;
        out.rows.push_back(orow);

        const Vec<double> x0 = l1_init(p, gamma);
        for (const auto& ms : methods) {
            ResultRow row{sweep, ms.name, trial, seed};
            SolverTrace<double> trace;
            if (!run_method(ms, p, x0, row, trace, out))
                continue;
            row.success = trace.converged;
            out.rows.push_back(row);
        }
    });
    ResultTable t = collect(std::move(outcomes), std::nullopt);
    put_common_metadata(t, spec);
    t.metadata["sparsity"] = std::to_string(spec.sparsity);
    t.metadata["sigma"] = format_9g(spec.sigma);
    t.metadata["gamma"] = format_9g(gamma);
    t.metadata["column_normalization"] =
        spec.noisy_normalization == ColumnNormalization::kCenterUnitNorm ? "center_unit_norm" : "center_unit_variance";
    t.metadata["mse_definition"] = "sum of squared errors ||x_rec - x_true||^2";
    t.metadata["success_rule"] = "solver converged";
    if (std::find(spec.sweep.begin(), spec.sweep.end(), 250.0) != spec.sweep.end()) {
        t.metadata["mse_calibration"] = format_9g(oracle_calibration(t));
        t.metadata["mse_calibration_rule"] = "4.15 / mean oracle MSE at M=250";
    }
    return t;
}

ResultTable run_experiment(const ExperimentSpec& spec)
{
    switch (spec.kind) {
    case ExperimentKind::kSuccess: return run_success_experiment(spec);
    case ExperimentKind::kConstructed: return run_constructed_experiment(spec);
    case ExperimentKind::kNoisy: return run_noisy_experiment(spec);
    }
    throw std::invalid_argument("unknown experiment kind");
}

namespace {

constexpr const char* kHeader = "sweep,method,trial,seed,success,rel_err,mse,iterations,matvecs,time_sec";

}  // namespace

std::string to_csv(const ResultTable& table)
{
    ResultTable sorted = table;
    sorted.sort_rows();
    std::ostringstream os;
    os << kHeader << '\n';
    for (const auto& r : sorted.rows) {
        os << format_9g(r.sweep) << ',' << r.method << ',' << r.trial << ',' << r.seed << ',' << (r.success ? 1 : 0)
           << ',' << format_9g(r.rel_err) << ',' << format_9g(r.mse) << ',' << r.iterations << ',' << r.matvecs << ','
           << format_9g(r.time_sec) << '\n';
    }
    return os.str();
}

void write_csv(const ResultTable& table, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << to_csv(table);
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

ResultTable read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
        throw std::runtime_error(path + ": unexpected header");
    ResultTable t;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ','))
            f.push_back(tok);
        if (f.size() != 10)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 10 fields");
        try {
            ResultRow r;
            r.sweep = parse_double(f[0]);
            r.method = f[1];
            r.trial = std::stoi(f[2]);
            r.seed = std::stoull(f[3]);
            r.success = f[4] == "1";
            r.rel_err = parse_double(f[5]);
            r.mse = parse_double(f[6]);
            r.iterations = std::stol(f[7]);
            r.matvecs = std::stol(f[8]);
            r.time_sec = parse_double(f[9]);
            t.rows.push_back(r);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return t;
}

void write_metadata(const ResultTable& table, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    for (const auto& [k, v] : table.metadata)
        out << k << '=' << v << '\n';
    for (const auto& d : table.discarded)
        out << "discarded=" << format_9g(d.sweep) << ':' << d.trial << ": " << d.reason << '\n';
    for (const auto& f : table.failures)
        out << "failure=" << format_9g(f.sweep) << ':' << f.trial << ':' << f.method << ": " << f.reason << '\n';
}

void write_trace_csv(const SolverTrace<double>& trace, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "iter,matvecs,objective,rel_err\n";
    for (const auto& r : trace.records)
        out << r.iter << ',' << r.matvecs << ',' << format_9g(r.objective) << ',' << format_9g(r.rel_err) << '\n';
}

std::vector<SummaryRow> summarize(const ResultTable& table, double mse_scale)
{
    std::map<std::pair<double, std::string>, std::vector<const ResultRow*>> groups;
    for (const auto& r : table.rows)
        groups[{r.sweep, r.method}].push_back(&r);
    std::vector<SummaryRow> out;
    for (const auto& [key, rows] : groups) {
        SummaryRow s;
        s.sweep = key.first;
        s.method = key.second;
        s.trials = static_cast<int>(rows.size());
        double sum_mse = 0, sum_sq = 0, sum_rel = 0, sum_mv = 0;
        for (const auto* r : rows) {
            s.successes += r->success ? 1 : 0;
            const double mse = r->mse * mse_scale;
            sum_mse += mse;
            sum_sq += mse * mse;
            sum_rel += r->rel_err;
            sum_mv += double(r->matvecs);
        }
        const double n = double(s.trials);
        s.success_rate = s.successes / n;
        s.mean_mse = sum_mse / n;
        s.mean_rel_err = sum_rel / n;
        s.mean_matvecs = sum_mv / n;
        if (s.trials > 1) {
            const double var = std::max(0.0, (sum_sq - n * s.mean_mse * s.mean_mse) / (n - 1));
            s.se_mse = std::sqrt(var / n);
        }
        out.push_back(s);
    }
    return out;
}

double oracle_calibration(const ResultTable& table, double anchor_sweep, double anchor_value)
{
    double sum = 0;
    int count = 0;
    for (const auto& r : table.rows)
        if (r.method == "oracle" && r.sweep == anchor_sweep) {
            sum += r.mse;
            ++count;
        }
    if (count == 0 || !(sum > 0))
        throw std::invalid_argument("oracle_calibration: no oracle rows at the anchor sweep value");
    return anchor_value / (sum / count);
}

}  // namespace l1l2
