#include <cmath>
#include <numbers>

#include "ptcycle/phase.hpp"
#include "ptcycle/thermo.hpp"
#include "test_support.hpp"

using namespace ptcycle;

namespace {
constexpr double kNu = 12.0;
constexpr int kN = 160;
}  // namespace

TEST(Zeros, ClosedForm) {
  const auto z = pressure_zeros(5.0, kN, 4);
  ASSERT_EQ(z.size(), 4u);
  EXPECT_NEAR(z[0], -std::numbers::pi * std::numbers::pi * 25.0 / 160.0, 1e-14);
  EXPECT_NEAR(z[0], -1.5421, 1e-4);
  EXPECT_DOUBLE_EQ(z[1], 4.0 * z[0]);
  EXPECT_NEAR(pressure(5.0, {kN, kNu, z[0]}), 0.0, 1e-10);
  const auto z2 = pressure_zeros(10.0, kN, 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(z2[i], 4.0 * z[i], 1e-12 * std::abs(z2[i]));
}

TEST(Zeros, RefinedRootsMatch) {
  for (double T : {0.5, 5.0, 9.0}) {
    const auto z = pressure_zeros(T, kN, 6);
    for (int n = 1; n <= 6; ++n) {
      EXPECT_LE(rel_diff(refine_pressure_zero(T, kNu, kN, n), z[n - 1]), 1e-10);
    }
  }
}

TEST(Areas, AlternateAndCancel) {
  double total = 0.0;
  for (int n = 1; n <= 5; ++n) {
    EXPECT_NEAR(isotherm_area(n, 5.0, kNu, kN) + isotherm_area(n + 1, 5.0, kNu, kN), 0.0, 1e-9);
  }
  for (int n = 1; n <= 6; ++n) total += isotherm_area(n, 5.0, kNu, kN);
  EXPECT_NEAR(total, 0.0, 1e-9);
  EXPECT_LT(isotherm_area(2, 5.0, kNu, kN) * isotherm_area(3, 5.0, kNu, kN), 0.0);
}

TEST(Areas, QuadratureAgrees) {
  for (int n = 1; n <= 5; ++n) {
    const double a = isotherm_area(n, 5.0, kNu, kN);
    EXPECT_LE(rel_diff(isotherm_area_quadrature(n, 5.0, kNu, kN), a), 1e-6);
  }
}

TEST(Areas, VanishForLargeNu) {
  EXPECT_LT(std::abs(isotherm_area(2, 5.0, 500.0, kN)), 1e-30);
}

TEST(Lever, Fractions) {
  const auto a = lever_fractions(-6.0, -6.0, -24.0);
  EXPECT_DOUBLE_EQ(a.n1, 1.0);
  EXPECT_DOUBLE_EQ(a.n2, 0.0);
  const auto b = lever_fractions(-15.0, -6.0, -24.0);
  EXPECT_DOUBLE_EQ(b.n1, 0.5);
  EXPECT_DOUBLE_EQ(b.n2, 0.5);
  for (double l : {-7.0, -10.3, -23.9}) {
    const auto m = lever_fractions(l, -6.0, -24.0);
    EXPECT_EQ(m.n1 + m.n2, 1.0);
  }
  EXPECT_ERROR_CODE(lever_fractions(-30.0, -6.0, -24.0), ErrorCode::OutOfBinodal);
}

TEST(Binodal, EvenZeroPattern) {
  const double T = 5.0;
  for (int n = 1; n <= 3; ++n) {
    const Interval b = binodal_interval(T, kN, n);
    const double unit = -4.0 * std::numbers::pi * std::numbers::pi * T * T / kN;
    EXPECT_NEAR(b.hi, unit * n * n, 1e-12);
    EXPECT_NEAR(b.lo, unit * (n + 1) * (n + 1), 1e-12);
  }
}

TEST(Binodal, EndpointsAreMinimaOfF) {
  const Interval b = binodal_interval(5.0, kN, 1);
  for (double l : {b.lo, b.hi}) {
    EXPECT_NEAR(pressure(5.0, {kN, kNu, l}), 0.0, 1e-12);
    EXPECT_LT(pressure_slope(5.0, kNu, kN, l), 0.0);
  }
}

TEST(HeterogeneousF, CommonTangent) {
  const double T = 5.0;
  const Interval b = binodal_interval(T, kN, 1);
  const double f1 = free_energy_at(T, {kN, kNu, b.hi});
  EXPECT_NEAR(free_energy_at(T, {kN, kNu, b.lo}), f1, 1e-9);
  EXPECT_DOUBLE_EQ(heterogeneous_free_energy(b.hi, T, kNu, kN, 1), f1);
  for (int i = 0; i <= 100; ++i) {
    const double l = b.hi + (b.lo - b.hi) * i / 100.0;
    EXPECT_LE(heterogeneous_free_energy(l, T, kNu, kN, 1), free_energy_at(T, {kN, kNu, l}) + 1e-12);
  }
  EXPECT_ERROR_CODE(heterogeneous_free_energy(-1.0, T, kNu, kN, 1), ErrorCode::OutOfBinodal);
}

TEST(Spinodal, InsideBinodal) {
  const Interval b = binodal_interval(5.0, kN, 1);
  const Interval s = spinodal_interval(5.0, kNu, kN, 1);
  EXPECT_GT(s.lo, b.lo);
  EXPECT_LT(s.hi, b.hi);
  EXPECT_GT(pressure_slope(5.0, kNu, kN, 0.5 * (s.lo + s.hi)), 0.0);
  // Metastable bands between the two intervals.
  EXPECT_LT(pressure_slope(5.0, kNu, kN, 0.5 * (b.lo + s.lo)), 0.0);
  EXPECT_LT(pressure_slope(5.0, kNu, kN, 0.5 * (s.hi + b.hi)), 0.0);
}

TEST(Spinodal, RegionsRepeatAlongZeros) {
  for (int n = 1; n <= 3; ++n) {
    const Interval b = binodal_interval(5.0, kN, n);
    const Interval s = spinodal_interval(5.0, kNu, kN, n);
    EXPECT_TRUE(b.contains(s));
    EXPECT_LT(s.width(), b.width());
  }
}

TEST(Spinodal, WidthsAtTAndTwoTHaveRatioFour) {
  const double w1 = spinodal_interval(5.0, kNu, kN, 1).width();
  const double w2 = spinodal_interval(10.0, kNu, kN, 1).width();
  EXPECT_NEAR(w2 / w1, 4.0, 1e-6);
}

TEST(Spinodal, WidthRatioTendsToFourAsTemperatureDrops) {
  double prev_err = 1.0;
  for (double T : {2.0, 1.0, 0.5, 0.25}) {
    const double r = spinodal_interval(2 * T, kNu, kN, 1).width() / spinodal_interval(T, kNu, kN, 1).width();
    const double err = std::abs(r - 4.0);
    EXPECT_LT(err, prev_err) << "T=" << T;
    prev_err = err;
  }
  EXPECT_LT(prev_err, 1e-4);
}

TEST(CriticalScan, BinodalScalesAsTSquared) {
  const auto scan = critical_temperature_scan(kNu, kN, {10.0, 5.0, 2.5, 1.0, 0.5, 0.01});
  const double ref = scan.rows.front().binodal_width / 100.0;
  for (const auto& row : scan.rows) {
    EXPECT_LE(rel_diff(row.binodal_width / (row.T * row.T), ref), 1e-6);
    EXPECT_GT(row.spinodal_width, 0.0);
    EXPECT_GT(row.binodal_width, row.spinodal_width);
  }
  EXPECT_EQ(scan.extrapolated_T_crit, 0.0);
}

TEST(Analyze, ReferenceIsotherm) {
  const PhaseRegions r = analyze_phase(5.0, kNu, kN, 1);
  EXPECT_EQ(r.maxwell_pressure, 0.0);
  EXPECT_TRUE(r.binodal.contains(r.spinodal));
  EXPECT_NEAR(r.free_energy_het, free_energy_at(5.0, {kN, kNu, r.binodal.hi}), 1e-12);
  ASSERT_GE(r.zeros.size(), 4u);
  EXPECT_EQ(r.binodal.hi, r.zeros[1]);
  EXPECT_EQ(r.binodal.lo, r.zeros[3]);
}

TEST(Analyze, RejectsBadInput) {
  EXPECT_ERROR_CODE(analyze_phase(0.0, kNu, kN, 1), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(analyze_phase(5.0, kNu, kN, 0), ErrorCode::InvalidArgument);
}

TEST(HeterogeneousS, ConstantSoNoCycle) {
  for (double T : {0.5, 5.0, 50.0}) EXPECT_EQ(heterogeneous_entropy(T), 0.0);
}

TEST(Maxwell, RelationHolds) {
  const double dp = derivative_central([](double t) { return pressure(t, {kN, kNu, -10.0}); }, 5.0);
  EXPECT_LE(std::abs(maxwell_relation_residual(5.0, -10.0, kNu, kN)), 1e-6 * (1.0 + std::abs(dp)));
}
