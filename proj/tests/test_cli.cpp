#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "support.hpp"

using namespace dltest;
namespace fs = std::filesystem;

namespace
{

int cli(const std::string& args)
{
    const std::string cmd = std::string(DLOEWNER_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("dloewner_cli_" + name);
    fs::remove_all(p);
    return p;
}

nlohmann::json report(const fs::path& dir)
{
    std::ifstream in(dir / "report.json");
    return nlohmann::json::parse(in);
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

} // namespace

TEST(Cli, VersionAndUsage)
{
    EXPECT_EQ(cli("--version"), 0);
    EXPECT_NE(cli("no-such-command"), 0);
    EXPECT_NE(cli("reduce"), 0);
}

TEST(Cli, TwoPoleWorkflow)
{
    const fs::path out = scratch("ex1");
    ASSERT_EQ(cli("interpolate --expr " + quoted(two_pole_expression) + " --tau 1 --shifts 0.1,1 --out " +
                  (out / "interp").string()),
              0);
    const nlohmann::json rep = report(out / "interp");
    EXPECT_EQ(rep["order"], 2);

    const std::string model = (out / "interp" / "model").string();
    ASSERT_EQ(cli("h2err --matrices " + model + " --ref-expr " + quoted(two_pole_expression) + " --out " +
                  (out / "h2").string()),
              0);
    EXPECT_LE(report(out / "h2")["h2_error"].get<double>(), 1e-6);

    ASSERT_EQ(cli("bode --matrices " + model + " --omega logspace:0.01:100:50 --out " + (out / "bode").string()), 0);
    std::ifstream csv(out / "bode" / "response.csv");
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    double worst = 0.0;
    for (; std::getline(csv, line); ++rows)
    {
        std::stringstream ss(line);
        std::string w, re, im;
        std::getline(ss, w, ',');
        std::getline(ss, re, ',');
        std::getline(ss, im, ',');
        const Complex h(std::stod(re), std::stod(im));
        const Complex want = two_pole_transfer(Complex(0.0, std::stod(w)));
        worst = std::max(worst, std::abs(h - want) / std::abs(want));
    }
    EXPECT_EQ(rows, 50);
    EXPECT_LE(worst, 1e-6);

    EXPECT_EQ(cli("check --matrices " + model + " --model " + model + " --branch -1 --branch 0 --branch 1 --out " +
                  (out / "check").string()),
              0);
    EXPECT_TRUE(report(out / "check")["satisfied"].get<bool>());
}

TEST(Cli, IdenticalModelsHaveZeroH2Distance)
{
    const fs::path out = scratch("same");
    write_model(out / "m", two_pole_model());
    const std::string m = (out / "m").string();
    ASSERT_EQ(cli("h2err --matrices " + m + " --ref-matrices " + m + " --out " + (out / "h2").string()), 0);
    EXPECT_EQ(report(out / "h2")["h2_error"].get<double>(), 0.0);
}

TEST(Cli, ReduceAndInjectDelay)
{
    const fs::path out = scratch("reduce");
    write_model(out / "plant", synthetic_plant(48, 12));
    ASSERT_EQ(cli("inject-delay --matrices " + (out / "plant").string() + " --tau 0.01 --out " +
                  (out / "delayed").string()),
              0);
    const std::string delayed = (out / "delayed" / "model").string();
    EXPECT_EQ(read_model(delayed).tau, 0.01);
    EXPECT_EQ(cli("inject-delay --matrices " + delayed + " --tau 0.5 --out " + (out / "again").string()), 1);

    ASSERT_EQ(cli("reduce --matrices " + delayed + " --order 2 --tau 0.01 --out " + (out / "red").string()), 0);
    const nlohmann::json rep = report(out / "red");
    EXPECT_TRUE(rep.contains("converged"));
    EXPECT_EQ(read_model(out / "red" / "model").order(), 2);
}

TEST(Cli, ErrorExitCodes)
{
    const fs::path out = scratch("errors");
    EXPECT_EQ(cli("interpolate --expr " + quoted("1/(s+") + " --shifts 1 --out " + (out / "parse").string()), 1);
    EXPECT_EQ(report(out / "parse")["status"], "invalid-input");
    EXPECT_EQ(cli("interpolate --expr " + quoted("1/(s-1)") + " --shifts 1 --out " + (out / "pole").string()), 2);
    EXPECT_EQ(report(out / "pole")["status"], "numerical-failure");
    EXPECT_EQ(cli("bode --matrices " + (out / "nothing").string() + " --out " + (out / "missing").string()), 1);
    EXPECT_EQ(cli("interpolate --expr '1/(s+1)' --tau 1 --shifts 0.5,0.5 --out " + (out / "dup").string()), 1);
}
