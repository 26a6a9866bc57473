#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI through the shell with stdout and stderr captured separately.
Run run(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("botl_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto err_path = dir / ("err" + std::to_string(counter++));
  const std::string cmd =
      env + " '" BOTL_CLI_PATH "' " + args + " 2>'" + err_path.string() + "'";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream e(err_path);
  std::stringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

std::string scenario(const std::string& name) {
  return std::string(BOTL_SCENARIO_DIR) + "/" + name + ".toml";
}

fs::path temp_file(const std::string& name, const std::string& content = "") {
  const fs::path p = fs::temp_directory_path() / ("botl_cli_" + std::to_string(::getpid()) + "_" + name);
  if (!content.empty()) std::ofstream(p) << content;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, ExperimentSmoke) {
  const auto out = temp_file("cmp.csv");
  const auto r = run("experiment estimator-comparison --seed 7 --trials 50 -o '" + out.string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto csv = slurp(out);
  for (const char* col : {"rmse_nls_m", "rmse_ov_m", "rmse_tls_m", "crlb_angular", "crlb_position_m"}) {
    EXPECT_NE(csv.find(col), std::string::npos) << col;
  }
  EXPECT_NE(csv.find("# meta: seed=7"), std::string::npos);
}

TEST(Cli, LocalizeColinearExitsTwo) {
  const auto in = temp_file("colinear.csv", "x_r_m,y_r_m,theta_rad\n0,0,0\n1000,0,0\n2000,0,0\n");
  const auto r = run("localize --method nls -i '" + in.string() + "'");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("assumption 2"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, LocalizeRecoversTarget) {
  const auto in = temp_file("cross.csv",
                            "x_r_m,y_r_m,theta_rad\n0,0,0.78539816339744828\n"
                            "10000,0,2.3561944901923448\n");
  for (const char* m : {"nls", "ov", "tls"}) {
    const auto r = run(std::string("localize -m ") + m + " -i '" + in.string() + "'");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line, last;
    while (std::getline(lines, line)) last = line;
    double x = 0, y = 0;
    ASSERT_EQ(std::sscanf(last.c_str(), "%*[^,],%lf,%lf", &x, &y), 2) << last;
    EXPECT_NEAR(x, 5000.0, 1e-6);
    EXPECT_NEAR(y, 5000.0, 1e-6);
  }
}

TEST(Cli, DeterministicOutput) {
  const std::string args = "simulate -s '" + scenario("two_targets") + "' --trials 2 --seed 11";
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run("simulate -s '" + scenario("two_targets") + "' --trials 2 --seed 12").out);
}

TEST(Cli, SeedFromEnvironment) {
  const std::string args = "simulate -s '" + scenario("single_target") + "'";
  const auto env = run(args, "BOTL_SEED=99");
  const auto flag = run(args + " --seed 99");
  EXPECT_EQ(env.out, flag.out);
  EXPECT_EQ(run(args, "BOTL_SEED=nope").exit_code, 1);
}

TEST(Cli, RevealLabelsColumn) {
  const std::string base = "simulate -s '" + scenario("two_targets") + "'";
  EXPECT_EQ(run(base).out.find("truth_label"), std::string::npos);
  EXPECT_NE(run(base + " --reveal-labels").out.find("truth_label"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  for (const std::string& args :
       {std::string(""), std::string("frobnicate"), std::string("experiment no-such-preset"),
        std::string("localize --method magic -i x"), std::string("crlb --bogus-flag")}) {
    const auto r = run(args);
    EXPECT_EQ(r.exit_code, 1) << args;
    EXPECT_TRUE(r.out.empty()) << args;
    EXPECT_FALSE(r.err.empty()) << args;
  }
}

TEST(Cli, BadScenarioKeyIsNamed) {
  const auto bad = temp_file("bad.toml", "[track]\nkind = \"linear\"\nstart_km = [0, 0]\n"
                                         "end_km = [30, 0]\n[[targets]]\nx_m = 1.0\ny_m = 2.0\n");
  const auto r = run("crlb -s '" + bad.string() + "' --sigma-deg 1");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("track.samples"), std::string::npos) << r.err;
}

TEST(Cli, HelpListsUnits) {
  for (const char* sub : {"simulate", "localize", "cluster", "experiment", "crlb"}) {
    const auto r = run(std::string(sub) + " --help");
    EXPECT_EQ(r.exit_code, 0) << sub;
    EXPECT_TRUE(r.err.empty()) << sub;
  }
  EXPECT_NE(run("--help").out.find("km"), std::string::npos);
  EXPECT_NE(run("experiment --help").out.find("(deg)"), std::string::npos);
  EXPECT_NE(run("simulate --help").out.find("(deg)"), std::string::npos);
}

TEST(Cli, ClusterWritesLabelsAndEstimates) {
  const auto est = temp_file("est.csv");
  const auto r = run("cluster -s '" + scenario("two_targets") +
                     "' -a polarization --estimates '" + est.string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("trial,step,slot,assigned_target,true_target"), std::string::npos);
  EXPECT_NE(slurp(est).find("clustering_error"), std::string::npos);
}

TEST(Cli, CrlbBothForms) {
  const auto a = run("crlb -s '" + scenario("single_target") + "'");
  const auto b = run("crlb -s '" + scenario("single_target") + "' --as-printed");
  ASSERT_EQ(a.exit_code, 0);
  ASSERT_EQ(b.exit_code, 0);
  EXPECT_NE(a.out, b.out);
  EXPECT_EQ(run("crlb -s '" + scenario("single_target") + "' --sigma-deg 0").exit_code, 1);
}

}  // namespace
