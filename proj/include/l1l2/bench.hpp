#pragma once

#include "l1l2/problems.hpp"
#include "l1l2/solvers.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace l1l2 {

enum class ExperimentKind { kSuccess, kConstructed, kNoisy };
enum class MatrixFamily { kGaussian, kPartialDct, kOversampledDct };

const char* to_string(ExperimentKind k);
const char* to_string(MatrixFamily f);
MatrixFamily parse_family(const std::string& s);

struct MethodSpec {
    std::string name;
    SolverConfig<double> config;
};

/// One seeded campaign. The sweep axis depends on the kind:
///   kSuccess      sparsity levels k
///   kConstructed  regularization weights gamma (sparsity fixed by `sparsity`)
///   kNoisy        measurement counts M (N and K from `n` and `sparsity`)
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::kSuccess;
    MatrixFamily family = MatrixFamily::kGaussian;
    Index m = 64;
    Index n = 256;
    std::optional<double> F;
    std::vector<double> sweep;
    int trials = 100;
    std::vector<MethodSpec> methods;
    std::uint64_t master_seed = 0;

    /// gamma for success runs; unset means 1e-6 (1e-7 for over-sampled DCT).
    std::optional<double> gamma;
    Index sparsity = 10;
    double sigma = 0.1;
    double success_threshold = 1e-3;
    ColumnNormalization noisy_normalization = ColumnNormalization::kCenterUnitNorm;
    /// Directory for per-trial trace files (constructed campaigns only).
    std::optional<std::string> trace_dir;
    int jobs = 1;

    void validate() const;
};

struct ResultRow {
    double sweep = 0;
    std::string method;
    int trial = 0;
    std::uint64_t seed = 0;
    bool success = false;
    double rel_err = 0;
    double mse = 0;
    long iterations = 0;
    long matvecs = 0;
    double time_sec = 0;
};

/// A trial that produced no rows, with the reason.
struct TrialNote {
    double sweep = 0;
    int trial = 0;
    std::string method;
    std::string reason;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<TrialNote> discarded;  // e.g. POCS did not converge
    std::vector<TrialNote> failures;   // exceptions from generators or solvers
    std::map<std::string, std::string> metadata;

    void sort_rows();
};

/// Default method lists; `F` selects the alpha schedule of the weighted model.
std::vector<MethodSpec> default_success_methods(MatrixFamily family, std::optional<double> F);
std::vector<MethodSpec> default_constructed_methods();
std::vector<MethodSpec> default_noisy_methods();

ResultTable run_success_experiment(const ExperimentSpec& spec);
ResultTable run_constructed_experiment(const ExperimentSpec& spec);
ResultTable run_noisy_experiment(const ExperimentSpec& spec);
ResultTable run_experiment(const ExperimentSpec& spec);

/// Builds the sensing matrix of one trial (spectrally normalized).
Mat<double> make_matrix(MatrixFamily family, Index m, Index n, std::optional<double> F, std::uint64_t seed);

/// Header `sweep,method,trial,seed,success,rel_err,mse,iterations,matvecs,time_sec`; 9 significant digits.
void write_csv(const ResultTable& table, const std::string& path);
std::string to_csv(const ResultTable& table);
ResultTable read_csv(const std::string& path);

/// `key=value` lines next to a result file (calibration, discard counts, parameters).
void write_metadata(const ResultTable& table, const std::string& path);

/// Trace file with columns `iter,matvecs,objective,rel_err`.
void write_trace_csv(const SolverTrace<double>& trace, const std::string& path);
std::string trace_file_name(const std::string& method, double sweep, int trial);

struct SummaryRow {
    double sweep = 0;
    std::string method;
    int trials = 0;
    int successes = 0;
    double success_rate = 0;
    double mean_rel_err = 0;
    double mean_mse = 0;
    double se_mse = 0;
    double mean_matvecs = 0;
};

/// Per (sweep, method) aggregates; `mse_scale` multiplies the MSE statistics.
std::vector<SummaryRow> summarize(const ResultTable& table, double mse_scale = 1.0);

/// anchor_value / mean oracle MSE at anchor_sweep. Throws if the table has no oracle rows there.
double oracle_calibration(const ResultTable& table, double anchor_sweep = 250, double anchor_value = 4.15);

}  // namespace l1l2
