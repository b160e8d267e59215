#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(PTCYCLE_BIN) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string run_stderr(const std::string& args) {
  const std::string cmd = std::string(PTCYCLE_BIN) + " " + args + " 2>&1 >/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell.empty() ? 0.0 : std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Cli, ThermoSweep) {
  const CliRun r = run("thermo --N 160 --nu 12 --lambda -24 --tmin 0.5 --tmax 10 --steps 100");
  ASSERT_EQ(r.status, 0);
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "T,Z,F,U,S,p");
  ASSERT_EQ(rows.size(), 100u);
  int crossings = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = rows[i - 1][4] + 2.51338, b = rows[i][4] + 2.51338;
    if (rows[i - 1][0] >= 5.4 && rows[i][0] <= 6.0 && a * b < 0) ++crossings;
  }
  EXPECT_EQ(crossings, 2);
}

TEST(Cli, ThermoSingleStep) {
  const CliRun r = run("thermo --tmin 2 --tmax 9 --steps 1");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][0], 2.0);
}

TEST(Cli, ThermoExceptionalPointRow) {
  const CliRun r = run("thermo --lambda 0 --nu 12 --tmin 3 --tmax 3 --steps 1 --precision 15");
  ASSERT_EQ(r.status, 0);
  const auto row = parse_csv(r.out).at(0);
  const double x = 12.0 / 3.0;
  EXPECT_NEAR(row[1], std::exp(x) / (4 * std::pow(std::sinh(x / 2), 2)), 1e-12);
  EXPECT_NEAR(row[3], 12.0 / std::tanh(x / 2) - 12.0, 1e-12);
  EXPECT_NEAR(row[5], 160.0 / (3.0 * (2 * std::cosh(x) - 2)), 1e-12);
}

TEST(Cli, ThermoOutputIsByteStable) {
  const std::string a = testing::TempDir() + "thermo_a.csv";
  const std::string b = testing::TempDir() + "thermo_b.csv";
  ASSERT_EQ(run("--out " + a + " thermo --steps 50").status, 0);
  ASSERT_EQ(run("--out " + b + " thermo --steps 50").status, 0);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(fa)), {});
  const std::string sb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(sa.find('\r'), std::string::npos);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  const CliRun one = run("thermo --steps 200");
  setenv("PTCYCLE_NUM_THREADS", "5", 1);
  const CliRun five = run("thermo --steps 200");
  unsetenv("PTCYCLE_NUM_THREADS");
  EXPECT_EQ(one.out, five.out);
}

TEST(Cli, CycleTLambda) {
  const CliRun r = run("cycle --kind tlambda");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["totals"]["work"].get<double>(), 2.3238, 1e-3);
  EXPECT_EQ(j["steps"].size(), 4u);
  for (const auto& s : j["steps"]) {
    for (const char* key : {"from", "to", "kind", "dQ", "dW", "dU"}) EXPECT_TRUE(s.contains(key));
  }
}

TEST(Cli, CycleCarnot) {
  const CliRun r = run("cycle --kind carnot");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["efficiency"].get<double>(), 0.06473, 5e-5);
}

TEST(Cli, SymmetricTwoLambdaCycleFails) {
  const CliRun r = run("cycle --kind tlambda --N 120 --nu 25 --lambda 4.5 --tmin 35.5489 --tmax 88.4576");
  EXPECT_EQ(r.status, 3);
  const std::string err = run_stderr("cycle --kind tlambda --N 120 --nu 25 --lambda 4.5 --tmin 35.5489 --tmax 88.4576");
  EXPECT_EQ(err.rfind("CycleInfeasible: ", 0), 0u) << err;
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1);
}

TEST(Cli, ContourTimePlaneHitsReferencePoints) {
  const CliRun r = run("contour --plane TimeT --c1 4.75 --level -2.51338 --tmin 5.53240 --tmax 5.91528 "
                    "--xmin 0.00225 --xmax 0.00240");
  ASSERT_EQ(r.status, 0);
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "polyline_id,x,y");
  bool hit1 = false, hit2 = false;
  for (const auto& row : rows) {
    if (std::abs(row[2] - 5.53240) < 1e-9 && std::abs(row[1] - 0.0023241) <= 5e-7) hit1 = true;
    if (std::abs(row[2] - 5.91528) < 1e-9 && std::abs(row[1] - 0.0023532) <= 5e-7) hit2 = true;
  }
  EXPECT_TRUE(hit1);
  EXPECT_TRUE(hit2);
}

TEST(Cli, ContourLambdaPlaneHasSeveralBranches) {
  const CliRun r = run("contour --plane LambdaT --level 3.16977 --tmin 5.53240 --tmax 5.91528");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_GE(rows.back()[0], 1.0);
}

TEST(Cli, ContourEmptyLevel) {
  const std::string path = testing::TempDir() + "empty_contour.csv";
  const CliRun r = run("--out " + path + " contour --level 1e6");
  EXPECT_EQ(r.status, 0);
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in.good());
  EXPECT_EQ(in.peek(), std::ifstream::traits_type::eof());
}

TEST(Cli, PhaseReferenceIsotherm) {
  const CliRun r = run("phase --T 5 --nu 12 --N 160 --branch 1");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["maxwell_pressure"].get<double>(), 0.0);
  const double b0 = j["binodal"][0], b1 = j["binodal"][1], s0 = j["spinodal"][0], s1 = j["spinodal"][1];
  EXPECT_LT(b0, s0);
  EXPECT_LT(s1, b1);
  const double unit = -4.0 * std::numbers::pi * std::numbers::pi * 25.0 / 160.0;
  EXPECT_NEAR(b1, unit, 1e-6);
  EXPECT_NEAR(b0, 4.0 * unit, 1e-6);
  EXPECT_TRUE(j.contains("F_het"));
  EXPECT_TRUE(j.contains("zeros"));
}

TEST(Cli, PhaseLowTemperatureScaling) {
  const auto a = nlohmann::json::parse(run("phase --T 1").out);
  const auto b = nlohmann::json::parse(run("phase --T 0.01").out);
  const double wa = a["binodal"][1].get<double>() - a["binodal"][0].get<double>();
  const double wb = b["binodal"][1].get<double>() - b["binodal"][0].get<double>();
  EXPECT_NEAR(wb / wa, 1e-4, 1e-4 * 1e-6);
}

TEST(Cli, IsentropeNuPath) {
  const CliRun r = run("isentrope --plane nu --level -2.51338 --lambda -24 --tmin 5.91528 --tmax 5.53240 --steps 16");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 17u);
  EXPECT_NEAR(rows.back()[1], 12.0, 1e-3);
}

TEST(Cli, ConfigFileAndOverrides) {
  const std::string path = testing::TempDir() + "run.json";
  {
    std::ofstream out(path);
    out << R"({"model": {"N": 160, "nu": 12, "lambda": 0.5}, "output": {"precision": 6}})";
  }
  const CliRun from_file = run("--config " + path + " thermo --tmin 1 --tmax 1 --steps 1");
  ASSERT_EQ(from_file.status, 0);
  const CliRun flags = run("--precision 6 thermo --lambda 0.5 --tmin 1 --tmax 1 --steps 1");
  EXPECT_EQ(from_file.out, flags.out);
  const CliRun overridden = run("--config " + path + " thermo --lambda -24 --tmin 1 --tmax 1 --steps 1");
  EXPECT_NE(overridden.out, from_file.out);
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run("thermo --precision 3").status, 2);
  EXPECT_EQ(run("--precision 3 thermo").status, 2);
  EXPECT_EQ(run("thermo --N 0").status, 2);
  EXPECT_EQ(run("thermo --tmin -1").status, 2);
  EXPECT_EQ(run("contour --plane xy --level 1").status, 2);
  EXPECT_EQ(run("nonsense").status, 2);
  const std::string err = run_stderr("thermo --nu -3");
  EXPECT_EQ(err.rfind("InvalidArgument: ", 0), 0u) << err;
}

TEST(Cli, NumericalFailureExitsThree) {
  // A real gap at nu makes Z diverge.
  const CliRun r = run("thermo --N 1 --nu 2 --lambda 4 --steps 3");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(run_stderr("thermo --N 1 --nu 2 --lambda 4 --steps 3").find("at T="), std::string::npos);
}

TEST(Cli, VerifyReportsLambdaTwo) {
  const CliRun r = run("verify");
  EXPECT_NE(r.out.find("derived lambda2 = -38.0000"), std::string::npos);
  EXPECT_NE(r.out.find("eta_Stirling"), std::string::npos);
  EXPECT_NE(r.out.find("common entropy"), std::string::npos);
  EXPECT_TRUE(r.status == 0 || r.status == 4);
}

TEST(Cli, VerifyPerturbedConstantFails) {
  const CliRun r = run("verify --perturb \"S(T1, lambda1)\" --perturb-amount 0.01");
  EXPECT_EQ(r.status, 4);
  EXPECT_NE(r.out.find("[FAIL] criterion  1"), std::string::npos);
}
