#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "reap/errors.hpp"
#include "reap/sim.hpp"
#include "support/instances.hpp"

namespace reap {
namespace {

using testing_support::controller;

SimConfig sim_config(int steps, long budget, const Vector& x0) {
  SimConfig s;
  s.steps = steps;
  s.budget.iterations = budget;
  s.x0 = x0;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

TEST(ClosedLoop, EquilibriumIsAFixedPoint) {
  const auto c = controller("double_integrator.json");
  for (long budget : {0L, 1L, 20L}) {
    const auto trace =
        run_closed_loop(c, sim_config(30, budget, c.target.xbar));
    for (const auto& r : trace.records) {
      EXPECT_LE((r.x - c.target.xbar).norm(), 1e-12);
      EXPECT_LE((r.u - c.target.ubar).norm(), 1e-12);
    }
  }
}

TEST(ClosedLoop, DoubleIntegratorSettles) {
  const auto c = controller("double_integrator.json");
  const auto trace = run_closed_loop(c, sim_config(300, 50, Vector::Zero(2)));
  ASSERT_EQ(trace.records.size(), 300u);
  EXPECT_NEAR(trace.records.back().y(0), 1.0, 0.02);
  for (const auto& r : trace.records) {
    EXPECT_TRUE(contains(c.X, r.x));
    EXPECT_TRUE(contains(c.U, r.u));
    EXPECT_EQ(r.iterations, 50);
  }
  EXPECT_EQ(trace.warm_start_fallbacks, 0);
}

TEST(ClosedLoop, InputIsDelayedByOneInstant) {
  const auto c = controller("double_integrator.json");
  ClosedLoop reference(c, Vector::Zero(2), Budget{5, {}});
  ClosedLoop perturbed(c, Vector::Zero(2), Budget{5, {}});
  for (int k = 0; k < 10; ++k) {
    reference.step();
    perturbed.step();
  }
  Vector bumped = perturbed.state();
  bumped(1) -= 0.2;
  perturbed.set_state(bumped);
  const SimRecord a = reference.step();
  const SimRecord b = perturbed.step();
  EXPECT_EQ(a.u, b.u);  // u(k) was computed before the perturbation
  EXPECT_NE(a.x, b.x);
  const SimRecord a1 = reference.step();
  const SimRecord b1 = perturbed.step();
  EXPECT_GT((a1.u - b1.u).norm(), 1e-6);  // u(k+1) sees it
}

TEST(ClosedLoop, ObserverSeesFeasibleIterates) {
  const auto c = controller("drone.json");
  ClosedLoop loop(c, testing_support::load("drone.json").x0, Budget{5, {}});
  long seen = 0;
  for (int k = 0; k < 20; ++k) {
    loop.step([&](const QpProblem& qp, const ReapIterate& it) {
      ++seen;
      EXPECT_TRUE(qp.feasible(it.u_hat));
      EXPECT_GE(it.lam_hat.minCoeff(), 0.0);
    });
  }
  EXPECT_EQ(seen, 20 * 6);
}

TEST(ClosedLoop, SafetyNetNamesTheRow) {
  const auto c = controller("double_integrator.json");
  ClosedLoop loop(c, Vector::Zero(2), Budget{1, {}});
  Vector outside(2);
  outside << 0.0, 0.7;
  loop.set_state(outside);
  try {
    loop.step();
    FAIL() << "expected SimulationError";
  } catch (const SimulationError& e) {
    EXPECT_NE(std::string(e.what()).find("k=0"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("x2 upper"), std::string::npos);
  }
}

TEST(ClosedLoop, BudgetHelpsOrTies) {
  const auto c = controller("double_integrator.json");
  const auto small = run_closed_loop(c, sim_config(100, 1, Vector::Zero(2)));
  const auto large = run_closed_loop(c, sim_config(100, 50, Vector::Zero(2)));
  const double e1 = std::abs(small.records.back().y(0) - 1.0);
  const double e50 = std::abs(large.records.back().y(0) - 1.0);
  EXPECT_LE(e50, e1 + 1e-9);
}

TEST(Trace, CsvHeaderAndPrecision) {
  const auto c = controller("double_integrator.json");
  const auto trace = run_closed_loop(c, sim_config(5, 3, Vector::Zero(2)));
  const std::string csv = trace_csv(trace);
  std::istringstream in(csv);
  std::string header, line, last;
  std::getline(in, header);
  EXPECT_EQ(header, "k,x_1,x_2,u_1,y_1,sigma,iterations,accepted,cost");
  int rows = 0;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, 5);
  // Final row round-trips exactly.
  std::istringstream fields(last);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(fields, cell, ',')) cells.push_back(cell);
  ASSERT_EQ(cells.size(), 9u);
  const auto& r = trace.records.back();
  EXPECT_EQ(std::stod(cells[1]), r.x(0));
  EXPECT_EQ(std::stod(cells[2]), r.x(1));
  EXPECT_EQ(std::stod(cells[3]), r.u(0));
  EXPECT_EQ(std::stod(cells[8]), r.cost);
  EXPECT_TRUE(cells[7] == "0" || cells[7] == "1");
}

TEST(Report, FilesAndEquilibriumSummary) {
  const auto c = controller("double_integrator.json");
  const auto trace = run_closed_loop(c, sim_config(12, 2, c.target.xbar));
  const auto dir = std::filesystem::temp_directory_path() / "reap_sim_report";
  std::filesystem::remove_all(dir);
  write_outputs(dir, trace, c.X, c.U);
  for (const char* f : {"trace.csv", "report.txt", "sigma.csv", "states.csv",
                        "inputs.csv", "outputs.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const std::string sigma = slurp(dir / "sigma.csv");
  EXPECT_EQ(std::count(sigma.begin(), sigma.end(), '\n'), 13);
  const std::string report = slurp(dir / "report.txt");
  // Constant signals: min = max = final.
  EXPECT_NE(report.find("x_1,1,1,1,1,3"), std::string::npos) << report;
  EXPECT_EQ(slurp(dir / "trace.csv"), trace_csv(trace));
  std::filesystem::remove_all(dir);
}

TEST(Sim, RejectsBadConfig) {
  const auto c = controller("double_integrator.json");
  EXPECT_THROW(run_closed_loop(c, sim_config(0, 1, Vector::Zero(2))),
               ConfigError);
  EXPECT_THROW(run_closed_loop(c, sim_config(3, 1, Vector::Zero(3))),
               ConfigError);
}

}  // namespace
}  // namespace reap
