#include "l1l2/cli.hpp"
#include "l1l2/matrix_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace l1l2;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "l1l2");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "l1l2_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Cli, ProxPrintsPointCaseAndUniqueness)
{
    const auto r = cli({"prox", "--y", "3,1,0", "--lambda", "1", "--alpha", "1"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_EQ(r.out, "x=3,0,0 case=1 unique=true\n");
}

TEST(Cli, ProxTieReporting)
{
    auto r = cli({"prox", "--y", "0.3,-0.3", "--lambda", "1", "--tie", "report-all-maxima"});
    EXPECT_EQ(r.out, "x=0.3,0 case=3 unique=false\ncandidate=0.3,0\ncandidate=0,-0.3\n");
    r = cli({"prox", "--y", "0.3,-0.3", "--lambda", "1", "--tie", "highest"});
    EXPECT_EQ(r.out, "x=0,-0.3 case=3 unique=false\n");
}

TEST(Cli, UnknownFlagsAndBadValuesAreFatal)
{
    EXPECT_EQ(cli({"prox", "--y", "1", "--nope", "2"}).code, kExitFatal);
    EXPECT_EQ(cli({"prox", "--y", "1", "--lambda", "0"}).code, kExitFatal);
    EXPECT_EQ(cli({"prox", "--y", "1", "--tie", "random"}).code, kExitFatal);
    EXPECT_EQ(cli({}).code, kExitFatal);
}

TEST(Cli, HelpExitsCleanly)
{
    const auto r = cli({"solve", "--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("--delta"), std::string::npos);
}

TEST(Cli, SolveGeneratedProblem)
{
    const auto r = cli({"solve", "--m", "32", "--n", "64", "--sparsity", "3", "--gamma", "1e-4", "--delta", "1e-3"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("rel_err=", 0), 0u);
    EXPECT_NE(r.out.find("matvecs="), std::string::npos);
}

TEST(Cli, SolveStepsizeViolationIsFatal)
{
    const auto r = cli({"solve", "--m", "16", "--n", "32", "--method", "fbs", "--lambda", "2"});
    EXPECT_EQ(r.code, kExitFatal);
    EXPECT_NE(r.err.find("lambda < 1/L"), std::string::npos) << r.err;
}

TEST(Cli, SolveFromFilesWritesSolutionAndTrace)
{
    Mat<double> A(2, 3);
    A << 1, 1, 0, 0, 1, 1;
    Vec<double> b = Vec<double>::Constant(2, 1.2 - 1 / std::sqrt(2.0));
    write_matrix_csv(scratch("A.csv").string(), A);
    write_vector_csv(scratch("b.csv").string(), b);
    const auto r = cli({"solve", "--A", scratch("A.csv").string(), "--b", scratch("b.csv").string(), "--gamma", "1",
                        "--method", "fbs", "--init", "zero", "--tol", "1e-14", "--out", scratch("x.csv").string(),
                        "--trace", scratch("t.csv").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto x = read_vector_csv(scratch("x.csv").string());
    EXPECT_NEAR(x(1), 1.2 - 1 / std::sqrt(2.0), 1e-6);
    std::ifstream trace(scratch("t.csv"));
    std::string header;
    std::getline(trace, header);
    EXPECT_EQ(header, "iter,matvecs,objective,rel_err");
}

TEST(Cli, ConfigFileSuppliesDefaultsAndFlagsWin)
{
    const auto cfg = scratch("prox.cfg");
    std::ofstream(cfg) << "# defaults\nlambda=1\nalpha=1\ny=9,9\n";
    const auto r = cli({"prox", "--config", cfg.string(), "--y", "3,1,0"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, "x=3,0,0 case=1 unique=true\n");

    std::ofstream(cfg) << "bogus=1\n";
    EXPECT_EQ(cli({"prox", "--config", cfg.string(), "--y", "1"}).code, kExitFatal);
    EXPECT_EQ(cli({"prox", "--config", scratch("absent.cfg").string(), "--y", "1"}).code, kExitFatal);
}

TEST(Cli, ConstructReportsCounts)
{
    const auto dir = scratch("construct");
    fs::remove_all(dir);
    const auto r = cli({"construct", "--m", "20", "--n", "50", "--sparsity", "3", "--trials", "2", "--out-dir",
                        dir.string()});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("converged=2 discarded=0", 0), 0u) << r.out;
    EXPECT_TRUE(fs::exists(dir / "b_1.csv"));
}

TEST(Cli, BenchSuccessWritesCsvAndSummary)
{
    const auto out = scratch("bench.csv");
    const auto r = cli({"bench", "success", "--m", "24", "--n", "64", "--sparsity", "2", "--trials", "3", "--methods",
                        "admm,l1_admm", "--out", out.string(), "--jobs", "2"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("success_rate=1.00 runs=6"), std::string::npos) << r.out;
    EXPECT_TRUE(fs::exists(out));
    EXPECT_TRUE(fs::exists(out.string() + ".meta"));
    EXPECT_EQ(cli({"bench", "success", "--methods", "nope", "--out", out.string()}).code, kExitFatal);
}
