#include "l1l2/bench.hpp"
#include "l1l2/matrix_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace l1l2;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "l1l2_tests";
    fs::create_directories(dir);
    return dir / name;
}

ExperimentSpec small_success()
{
    ExperimentSpec s;
    s.kind = ExperimentKind::kSuccess;
    s.m = 24;
    s.n = 64;
    s.sweep = {2, 8};
    s.trials = 4;
    s.master_seed = 17;
    s.methods = default_success_methods(MatrixFamily::kGaussian, std::nullopt);
    s.methods.erase(s.methods.begin() + 1);  // DCA is slow and adds nothing here
    return s;
}

/// The result columns that must not depend on timing or thread scheduling.
std::string deterministic_columns(const ResultTable& t)
{
    std::istringstream in(to_csv(t));
    std::string line, out;
    while (std::getline(in, line))
        out += line.substr(0, line.rfind(',')) + '\n';
    return out;
}

}  // namespace

TEST(MatrixIo, NumberFormatting)
{
    EXPECT_EQ(format_9g(0.1), "0.1");
    EXPECT_EQ(format_9g(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_fixed(0.125, 2), "0.12");
    EXPECT_EQ(format_exact(0.1), "0.1");
    EXPECT_EQ(parse_double(" +2.5 "), 2.5);
    EXPECT_EQ(parse_double_list("3,1,0"), (std::vector<double>{3, 1, 0}));
    EXPECT_THROW(parse_double("1,5"), std::invalid_argument);
    EXPECT_THROW(parse_double(""), std::invalid_argument);
}

TEST(MatrixIo, RoundTripIsExact)
{
    Mat<double> A(3, 4);
    A << 1.0 / 3, -2e-300, 5, 0, std::nextafter(1.0, 2.0), -0.0, 7.25, 1e10, 3, 2, 1, 0.1;
    const auto path = scratch("A.csv").string();
    write_matrix_csv(path, A);
    EXPECT_EQ(read_matrix_csv(path), A);

    Vec<double> v = Vec<double>::LinSpaced(5, -1, 1);
    write_vector_csv(path, v);
    EXPECT_EQ(read_vector_csv(path), v);
    EXPECT_THROW(read_vector_csv((write_matrix_csv(path, A), path)), std::runtime_error);
}

TEST(MatrixIo, MalformedFilesReportLocation)
{
    const auto path = scratch("bad.csv").string();
    std::ofstream(path) << "2,2\n1,2\n3\n";
    try {
        read_matrix_csv(path);
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
    }
    std::ofstream(path) << "1,2\n1,abc\n";
    EXPECT_THROW(read_matrix_csv(path), std::runtime_error);
    EXPECT_THROW(read_matrix_csv(scratch("missing.csv").string()), std::runtime_error);
}

TEST(Bench, FamilyNames)
{
    for (auto f : {MatrixFamily::kGaussian, MatrixFamily::kPartialDct, MatrixFamily::kOversampledDct})
        EXPECT_EQ(parse_family(to_string(f)), f);
    EXPECT_THROW(parse_family("hadamard"), std::invalid_argument);
}

TEST(Bench, SpecValidation)
{
    auto s = small_success();
    s.trials = 0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = small_success();
    s.family = MatrixFamily::kOversampledDct;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = small_success();
    s.methods.push_back(s.methods.front());
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Bench, WeightedMethodScheduleDependsOnCoherence)
{
    const auto coherent = default_success_methods(MatrixFamily::kOversampledDct, 20.0);
    const auto incoherent = default_success_methods(MatrixFamily::kOversampledDct, 5.0);
    auto weighted = [](const std::vector<MethodSpec>& ms) {
        for (const auto& m : ms)
            if (m.name == "weighted")
                return *m.config.alpha_schedule;
        throw std::runtime_error("no weighted method");
    };
    EXPECT_EQ(weighted(coherent).kind, ScheduleSpec::Kind::kSigmoid);
    EXPECT_EQ(weighted(incoherent).kind, ScheduleSpec::Kind::kLinearCapped);
}

TEST(Bench, MatricesAreSpectrallyNormalized)
{
    for (auto f : {MatrixFamily::kGaussian, MatrixFamily::kPartialDct, MatrixFamily::kOversampledDct})
        EXPECT_NEAR(spectral_norm(make_matrix(f, 16, 48, 10.0, 3)), 1.0, 1e-12);
}

TEST(Bench, SuccessCampaignIsDeterministicAcrossThreadCounts)
{
    auto s = small_success();
    const auto a = run_success_experiment(s);
    s.jobs = 3;
    const auto b = run_success_experiment(s);
    EXPECT_EQ(a.rows.size(), 2u * 4u * 3u);
    EXPECT_EQ(deterministic_columns(a), deterministic_columns(b));
    for (const auto& r : a.rows) {
        if (r.sweep == 2) {
            EXPECT_TRUE(r.success) << r.method << " trial " << r.trial;
        }
    }
}

TEST(Bench, CsvRoundTrip)
{
    const auto t = run_success_experiment(small_success());
    const auto path = scratch("results.csv").string();
    write_csv(t, path);
    const auto back = read_csv(path);
    EXPECT_EQ(to_csv(back), to_csv(t));
    write_metadata(t, path + ".meta");
    std::ifstream meta(path + ".meta");
    std::string all((std::istreambuf_iterator<char>(meta)), {});
    EXPECT_NE(all.find("master_seed=17"), std::string::npos);
}

TEST(Bench, SummaryStatistics)
{
    ResultTable t;
    for (int i = 0; i < 4; ++i) {
        ResultRow r;
        r.sweep = 1;
        r.method = "m";
        r.trial = i;
        r.success = i < 3;
        r.mse = double(i + 1);
        t.rows.push_back(r);
    }
    const auto s = summarize(t, 2.0);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s[0].success_rate, 0.75);
    EXPECT_DOUBLE_EQ(s[0].mean_mse, 5.0);
    // Sample sd of {2,4,6,8} is sqrt(20/3); se = sd / 2.
    EXPECT_NEAR(s[0].se_mse, std::sqrt(20.0 / 3.0) / 2, 1e-14);
}

TEST(Bench, OracleCalibrationAnchorsMean)
{
    ResultTable t;
    for (double mse : {2.0, 4.0}) {
        ResultRow r;
        r.sweep = 250;
        r.method = "oracle";
        r.mse = mse;
        t.rows.push_back(r);
    }
    EXPECT_DOUBLE_EQ(oracle_calibration(t), 4.15 / 3.0);
    EXPECT_THROW(oracle_calibration(t, 300), std::invalid_argument);
}

TEST(Bench, ConstructedCampaignWritesTraces)
{
    ExperimentSpec s;
    s.kind = ExperimentKind::kConstructed;
    s.m = 32;
    s.n = 96;
    s.sparsity = 4;
    s.sweep = {0.01};
    s.trials = 2;
    s.success_threshold = 1e-6;
    const auto dir = scratch("traces");
    fs::remove_all(dir);
    s.trace_dir = dir.string();
    const auto t = run_constructed_experiment(s);
    EXPECT_EQ(t.rows.size() + 3 * t.discarded.size(), 6u);
    for (const auto& r : t.rows)
        EXPECT_TRUE(fs::exists(dir / trace_file_name(r.method, r.sweep, r.trial)));
    EXPECT_EQ(trace_file_name("admm", 0.001, 3), "trace_admm_0.001_3.csv");
}

TEST(Bench, NoisyCampaignRecordsOracleAndCalibration)
{
    ExperimentSpec s;
    s.kind = ExperimentKind::kNoisy;
    s.n = 64;
    s.sparsity = 4;
    s.sweep = {250};
    s.trials = 1;
    s.methods = {default_noisy_methods()[1]};
    s.n = 300;
    const auto t = run_noisy_experiment(s);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].method, "l1l2_admm");
    EXPECT_EQ(t.rows[1].method, "oracle");
    EXPECT_TRUE(t.metadata.count("mse_calibration"));
}
