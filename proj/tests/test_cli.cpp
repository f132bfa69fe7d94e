#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "reap/cli.hpp"
#include "reap/errors.hpp"
#include "reap/pipeline.hpp"
#include "support/instances.hpp"

namespace reap {
namespace {

using testing_support::config_path;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "reap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string invalid(const std::string& name) {
  return config_path("invalid/" + name + ".json");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) {
    if (l == line) return true;
  }
  return false;
}

TEST(Config, LoadsDrone) {
  const RunConfig cfg = testing_support::load("drone.json");
  EXPECT_EQ(cfg.A.rows(), 6);
  EXPECT_EQ(cfg.B.cols(), 3);
  EXPECT_TRUE(cfg.continuous);
  EXPECT_TRUE(cfg.user_supplied);
  EXPECT_DOUBLE_EQ(cfg.dt, 0.2);
  EXPECT_EQ(cfg.Qu(0, 0), 35.0);
}

TEST(Config, InfinityLiteralsAreCaseInsensitive) {
  const RunConfig cfg = testing_support::load("f16.json");
  EXPECT_TRUE(std::isinf(cfg.X.upper()(0)));
  EXPECT_LT(cfg.X.lower()(1), 0.0);
  std::string text = slurp(config_path("f16.json"));
  const auto pos = text.find("\"Inf\"");
  text.replace(pos, 5, "\"iNF\"");
  EXPECT_TRUE(std::isinf(parse_config(text).X.upper()(0)));
}

TEST(Config, MissingFieldIsNamed) {
  try {
    load_config(invalid("missing_qu"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("weights.Qu"), std::string::npos);
  }
}

TEST(Config, ShortBoundIsDimensionError) {
  EXPECT_THROW(load_config(invalid("short_bounds")), ConfigError);
}

TEST(Config, ParseErrorReportsLine) {
  try {
    parse_config("{\n  \"system\": [1,\n}", "bad.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
        << e.what();
  }
}

TEST(Config, DefaultMethodFollowsObservability) {
  RunConfig cfg = testing_support::load("double_integrator.json");
  ValidationReport rep = validate(cfg);
  ASSERT_TRUE(rep.ok());
  EXPECT_EQ(rep.controller->method, TerminalMethod::kPrediction);
  cfg = testing_support::load("dual_target_reference.json");
  cfg.method.reset();
  rep = validate(cfg);
  ASSERT_TRUE(rep.ok()) << rep.message;
  EXPECT_EQ(rep.controller->method, TerminalMethod::kLyapunov);
}

TEST(Diagnostics, FailureMessagesAndExitCodes) {
  const struct {
    const char* name;
    int code;
    const char* message;
  } cases[] = {
      {"uncontrollable", kExitUncontrollable, kMsgUncontrollable},
      {"unobservable", kExitUnobservable, kMsgUnobservable},
      {"short_horizon", kExitHorizon, kMsgHorizon},
      {"outside_region", kExitRegion, kMsgRegion},
  };
  for (const auto& c : cases) {
    const CliResult r = cli({"check", invalid(c.name)});
    EXPECT_EQ(r.code, c.code) << c.name;
    EXPECT_TRUE(has_line(r.out, c.message)) << c.name << "\n" << r.out;
  }
  EXPECT_EQ(std::string(kMsgUncontrollable),
            "The pair (A,B) is not controllable. REAP-T cannot proceed with "
            "the specified system.");
  EXPECT_EQ(std::string(kMsgRegion),
            "The specified initial condition does not belong to the region of "
            "attraction. REAP-T cannot proceed.");
}

TEST(Diagnostics, OtherFailures) {
  EXPECT_EQ(cli({"check", invalid("boundary_target")}).code, kExitTarget);
  const CliResult cap = cli({"check", invalid("omega_cap")});
  EXPECT_EQ(cap.code, kExitTerminal);
  EXPECT_NE(cap.out.find("Lyapunov-based"), std::string::npos);
  EXPECT_EQ(cli({"check", invalid("missing_qu")}).code, kExitConfig);
  EXPECT_EQ(cli({"check", "/nonexistent.json"}).code, kExitConfig);
}

TEST(Cli, CheckHappyPath) {
  const CliResult r = cli({"check", config_path("double_integrator.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("State Constraints:\n", 0), 0u);
  EXPECT_NE(r.out.find("omega* = "), std::string::npos);
  EXPECT_TRUE(has_line(r.out, "Status: OK"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({"check", config_path("scalar.json"), "--bogus"}).code,
            kExitUsage);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", config_path("scalar.json"), "--budget", "1",
                 "--deadline-ms", "3"})
                .code,
            kExitUsage);
  EXPECT_EQ(cli({"run", config_path("scalar.json"), "--terminal", "magic"})
                .code,
            kExitUsage);
}

TEST(Cli, RunWritesTraceWithBudget) {
  const auto dir = std::filesystem::temp_directory_path() / "reap_cli_run";
  std::filesystem::remove_all(dir);
  const CliResult r = cli({"run", config_path("double_integrator.json"),
                           "--budget", "1", "--steps", "40", "--out",
                           dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(dir / "trace.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    // iterations column is third from the end
    std::vector<std::string> cells;
    std::istringstream f(line);
    std::string c;
    while (std::getline(f, c, ',')) cells.push_back(c);
    EXPECT_EQ(cells[cells.size() - 3], "1");
  }
  EXPECT_EQ(rows, 40);
  std::filesystem::remove_all(dir);
}

TEST(Cli, RunWithTerminalOverride) {
  const auto dir = std::filesystem::temp_directory_path() / "reap_cli_lyap";
  const CliResult r = cli({"run", config_path("double_integrator.json"),
                           "--terminal", "lyapunov", "--out", dir.string()});
  // N = 10 is too short for the quadratic set from the origin.
  EXPECT_EQ(r.code, kExitHorizon);
  EXPECT_TRUE(has_line(r.out, kMsgHorizon));
}

TEST(Cli, SweepWritesOneTracePerBudget) {
  const auto dir = std::filesystem::temp_directory_path() / "reap_cli_sweep";
  std::filesystem::remove_all(dir);
  const CliResult r = cli({"sweep", config_path("double_integrator.json"),
                           "--budgets", "1,50", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "budget_1" / "trace.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "budget_50" / "trace.csv"));
  EXPECT_NE(r.out.find("\n1,"), std::string::npos);
  EXPECT_NE(r.out.find("\n50,"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, CheckIsSideEffectFree) {
  const auto before = std::distance(
      std::filesystem::directory_iterator(std::filesystem::current_path()),
      std::filesystem::directory_iterator{});
  cli({"check", config_path("double_integrator.json")});
  const auto after = std::distance(
      std::filesystem::directory_iterator(std::filesystem::current_path()),
      std::filesystem::directory_iterator{});
  EXPECT_EQ(before, after);
}

}  // namespace
}  // namespace reap
