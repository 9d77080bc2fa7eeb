#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "ptffool/common.hpp"

using namespace ptffool::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "ptffool_cli_test";
  fs::create_directories(d);
  return d;
}

std::string write_product_poly() {
  const auto path = (scratch() / "x1x2.poly").string();
  std::ofstream(path) << "2\nC 0\nQ 1 2 1\n";
  return path;
}

int run_binary(const std::string& args) {
  const int status = std::system((std::string(PTFFOOL_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, FoolLpReportsDeviationOne) {
  const auto out = run(make_config("fool lp", {{"poly", write_product_poly()}, {"k", 1}}, 3));
  EXPECT_EQ(out.verdict, Verdict::pass);
  EXPECT_DOUBLE_EQ(out.report["result"]["deviation"].get<double>(), 1.0);
  EXPECT_EQ(out.report["seed"], 3);
  EXPECT_TRUE(out.report.contains("config_hash"));
  EXPECT_TRUE(out.report.contains("version"));
  EXPECT_EQ(out.report["config"]["command"], "fool lp");
}

TEST(Cli, ReplayIsIdentical) {
  const auto config = make_config("moments", {{"poly", write_product_poly()}, {"k", {2, 3}}, {"mode", "mc"}}, 11);
  const auto a = run(config);
  const auto b = run(config);
  EXPECT_TRUE(same_report(a.report, b.report));
  auto c = config;
  c["seed"] = 12;
  EXPECT_FALSE(same_report(a.report, run(c).report));
}

TEST(Cli, SchemaErrors) {
  const auto poly = write_product_poly();
  EXPECT_THROW(run(make_config("fool lp", {{"poly", poly}}, 0)), SchemaError);
  EXPECT_THROW(run(make_config("fool lp", {{"poly", poly}, {"k", 1}, {"kk", 2}}, 0)), SchemaError);
  EXPECT_THROW(run(make_config("fool lp", {{"poly", poly}, {"k", "one"}}, 0)), SchemaError);
  EXPECT_THROW(run(make_config("no such", json::object(), 0)), SchemaError);
  EXPECT_THROW(run(make_config("fool lp", {{"poly", poly}, {"k", 1}}, 0, {{"csv", "x.csv"}})), SchemaError);
  EXPECT_THROW(run(make_config("fool lp", {{"poly", poly}, {"k", 1}}, 0, json::object(), {{"bogus", 1.0}})),
               SchemaError);
  try {
    run(make_config("fool lp", {{"poly", poly}}, 0));
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "params.k");
  }
}

TEST(Cli, ToleranceOverrideIsScoped) {
  const auto before = ptffool::tolerances().lp_result_tol;
  run(make_config("fool lp", {{"poly", write_product_poly()}, {"k", 2}}, 0, json::object(),
                  {{"lp_result_tol", 1e-5}}));
  EXPECT_EQ(ptffool::tolerances().lp_result_tol, before);
}

TEST(Cli, BinaryExitCodes) {
  const auto poly = write_product_poly();
  const auto report = (scratch() / "r.json").string();
  EXPECT_EQ(run_binary("fool lp --poly " + poly + " --k 1 --report " + report), 0);
  EXPECT_EQ(run_binary("replay --config " + report + " --compare " + report), 0);
  EXPECT_EQ(run_binary("fool lp --poly " + poly), 64);
  EXPECT_EQ(run_binary("fool lp --poly " + poly + " --k 1 --tol nope=1"), 64);
  EXPECT_EQ(run_binary("kwise build --n 4 --k 9"), 64);
  EXPECT_EQ(run_binary("fool lp --poly /nonexistent.poly --k 1"), 64);
  const auto biased = (scratch() / "biased.space").string();
  std::ofstream(biased) << "3 3 4 0\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n";
  EXPECT_EQ(run_binary("kwise verify --space " + biased + " --k 2"), 0);
  EXPECT_EQ(run_binary("kwise verify --space " + biased + " --k 3"), 1);
  // An iteration cap of 1 leaves the solve unfinished.
  EXPECT_EQ(run_binary("fool lp --poly " + poly + " --k 1 --tol lp_max_iterations=1"), 2);
}

TEST(Cli, OutputsWritten) {
  const auto poly = write_product_poly();
  const auto csv = (scratch() / "sweep.csv").string();
  fs::remove(csv);
  const auto out = run(make_config("fool sweep", {{"poly", poly}, {"kmax", 2}}, 0, {{"csv", csv}}));
  EXPECT_EQ(out.verdict, Verdict::pass);
  std::ifstream is(csv);
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "k,lp_max,lp_min,uniform,deviation");
}

TEST(Cli, CommandTable) {
  const auto names = commands();
  EXPECT_EQ(names.size(), 12u);
  EXPECT_NE(std::find(names.begin(), names.end(), "gw round"), names.end());
}
