#include <cmath>
#include <complex>
#include <numbers>

#include "ptcycle/numerics.hpp"
#include "ptcycle/thermo.hpp"
#include "ptcycle/verify.hpp"
#include "test_support.hpp"

using namespace ptcycle;
using cd = std::complex<double>;

namespace {

// Z from the two complex mode frequencies, no pairing applied.
cd z_complex(const SpectralSplit& s, double T) {
  return 1.0 / ((1.0 - std::exp(-s.w_plus() / T)) * (1.0 - std::exp(-s.w_minus() / T)));
}

}  // namespace

TEST(Partition, ExceptionalPointClosedForm) {
  for (double T : {0.5, 5.0, 40.0}) {
    const double nu = 12.0;
    const double expected = std::exp(nu / T) / (4.0 * std::pow(std::sinh(nu / (2 * T)), 2));
    EXPECT_LE(rel_diff(partition_function(static_domain(T, {160, nu, 0.0})), expected), 1e-13);
  }
}

TEST(Partition, SpectralSumOracle) {
  for (double lambda : {0.0, 0.25, 0.5, 0.85}) {
    const ModelParams p{160, 12.0, lambda};
    const auto s = static_split(p);
    const double z = partition_function(static_domain(5.0, p));
    EXPECT_LE(rel_diff(z, spectral_sum_partition(s.nu + s.gap, s.nu - s.gap, 5.0)), 1e-8);
  }
}

// sqrt(160 * 1) > 12 puts the lower mode below zero; the ladder sum diverges.
TEST(Partition, GapBeyondNuHasNoSpectralSum) {
  EXPECT_ERROR_CODE(partition_function(static_domain(5.0, {160, 12.0, 1.0})), ErrorCode::NonNormalizable);
}

TEST(Partition, BrokenRegimeRealAndPositive) {
  for (double T : {0.1, 1.0, 5.53240, 30.0}) {
    for (double nu : {0.5, 12.0, 40.0}) {
      for (double lambda : {-0.01, -24.0, -200.0}) {
        const EvalDomain d = static_domain(T, {160, nu, lambda});
        const double z = partition_function(d);
        EXPECT_GT(z, 0.0);
        const cd zc = z_complex(d.split, T);
        EXPECT_LE(std::abs(zc.imag()), 1e-12 * std::abs(zc));
        EXPECT_LE(rel_diff(z, zc.real()), 1e-10);
      }
    }
  }
}

TEST(Partition, RealGapAtNuIsNotNormalizable) {
  EXPECT_ERROR_CODE(partition_function(static_domain(1.0, {1, 2.0, 4.0})), ErrorCode::NonNormalizable);
  EXPECT_ERROR_CODE(partition_function(static_domain(1.0, {1, 2.0, 5.0})), ErrorCode::NonNormalizable);
}

TEST(FreeEnergy, ExceptionalPoint) {
  const double T = 3.0, nu = 12.0;
  EXPECT_NEAR(free_energy(static_domain(T, {160, nu, 0.0})),
              -nu + 2 * T * std::log(2 * std::sinh(nu / (2 * T))), 1e-12);
}

TEST(FreeEnergy, IdentityWithLogZ) {
  for (double lambda : {-24.0, 0.0, 0.5}) {
    const EvalDomain d = static_domain(5.0, {160, 12.0, lambda});
    EXPECT_NEAR(free_energy(d) + d.T * log_partition_function(d), 0.0, 1e-13);
  }
}

TEST(FreeEnergy, BrokenRegimeAgreesWithComplexOracle) {
  const EvalDomain d = static_domain(5.0, {160, 12.0, -24.0});
  EXPECT_LE(rel_diff(free_energy(d), -5.0 * std::log(z_complex(d.split, 5.0).real())), 1e-10);
}

TEST(Energy, CornerOne) {
  EXPECT_NEAR(energy_at(5.91528, {160, 12.0, -24.0}), -14.0513, 5e-4);
}

TEST(Energy, ExceptionalPoint) {
  const double T = 2.0, nu = 12.0;
  EXPECT_NEAR(energy_at(T, {160, nu, 0.0}), nu / std::tanh(nu / (2 * T)) - nu, 1e-12);
}

TEST(Energy, MatchesLogZDerivative) {
  for (double T : {1.0, 5.0, 9.0}) {
    for (double lambda : {-24.0, -1.0, 0.3}) {
      const ModelParams p{160, 12.0, lambda};
      const double u = energy_at(T, p);
      const double d = derivative_central([&](double t) { return log_partition_function(static_domain(t, p)); }, T);
      EXPECT_LE(std::abs(u - T * T * d), 1e-6 * (1.0 + std::abs(u)));
    }
  }
}

TEST(Entropy, ReferenceValues) {
  EXPECT_NEAR(entropy_at(5.53240, {160, 12.0, -24.0}), -2.51338, 5e-4);
  EXPECT_NEAR(entropy_at(5.91528, {160, 12.0, -24.0}), -2.51338, 5e-4);
}

TEST(Entropy, ThirdLawInSymmetricRegime) {
  EXPECT_LE(std::abs(entropy_at(0.05, {160, 12.0, 0.5})), 1e-8);
  EXPECT_NEAR(partition_function(static_domain(0.05, {160, 12.0, 0.5})), 1.0, 1e-8);
}

TEST(Entropy, MonotoneInSymmetricRegime) {
  const ModelParams p{160, 12.0, 0.5};
  double prev = entropy_at(0.2, p);
  for (int i = 1; i <= 200; ++i) {
    const double T = 0.2 + 0.1 * i;
    const double s = entropy_at(T, p);
    EXPECT_GT(s, prev) << "T=" << T;
    EXPECT_GT(heat_capacity(static_domain(T, p)), 0.0);
    prev = s;
  }
}

TEST(Entropy, HighTemperatureAsymptotics) {
  const ModelParams p{160, 12.0, 0.5};
  double prev_offset = 0.0;
  for (double k : {1e2, 1e3, 1e4}) {
    const double T = k * p.nu;
    const double offset = entropy_at(T, p) - 2.0 * std::log(T);
    if (k > 1e2) EXPECT_LT(std::abs(offset - prev_offset), 1e-2);
    prev_offset = offset;
  }
  EXPECT_NEAR(energy_at(1e4 * p.nu, p) / (2e4 * p.nu), 1.0, 1e-2);
}

TEST(Pressure, VanishesAtZeros) {
  const double T = 5.0;
  for (int n = 1; n <= 4; ++n) {
    const double lambda = -n * n * std::numbers::pi * std::numbers::pi * T * T / 160.0;
    EXPECT_NEAR(pressure(T, {160, 12.0, lambda}), 0.0, 1e-12);
  }
}

TEST(Pressure, ExceptionalPointLimit) {
  const double T = 5.0, nu = 12.0;
  const double expected = 160.0 / (T * (2 * std::cosh(nu / T) - 2));
  EXPECT_LE(rel_diff(pressure(T, {160, nu, 0.0}), expected), 1e-12);
  EXPECT_LE(rel_diff(pressure(T, {160, nu, 1e-10}), expected), 1e-8);
  EXPECT_LE(rel_diff(pressure(T, {160, nu, -1e-10}), expected), 1e-8);
}

TEST(Pressure, MatchesFreeEnergyDerivative) {
  const double T = 5.0, nu = 12.0;
  const double p = pressure(T, {160, nu, -10.0});
  const double dfdl = derivative_central([&](double l) { return free_energy_at(T, {160, nu, l}); }, -10.0);
  EXPECT_LE(std::abs(p + dfdl), 1e-6 * (1.0 + std::abs(p)));
}

TEST(HeatCapacity, EquipartitionLimit) {
  EXPECT_NEAR(heat_capacity(static_domain(1e5, {160, 12.0, 0.0})), 2.0, 1e-6);
}

TEST(HeatCapacity, MatchesEnergyDerivative) {
  for (double T : {1.0, 5.0, 8.0}) {
    for (double lambda : {-24.0, 0.5}) {
      const ModelParams p{160, 12.0, lambda};
      const double c = heat_capacity(static_domain(T, p));
      const double d = derivative_central([&](double t) { return energy_at(t, p); }, T);
      EXPECT_LE(std::abs(c - d), 1e-5 * (1.0 + std::abs(c)));
    }
  }
}

TEST(HeatCapacity, NegativeSomewhereInBrokenRegime) {
  bool found = false;
  for (int i = 1; i <= 600 && !found; ++i) found = heat_capacity(static_domain(0.01 * i, {160, 12.0, -24.0})) < 0;
  EXPECT_TRUE(found);
}

TEST(Evaluate, ExceptionalPointContinuity) {
  for (double T : {0.7, 5.0}) {
    for (int N : {1, 50, 160}) {
      const ThermoPoint a = evaluate(T, {N, 12.0, 1e-13});
      const ThermoPoint b = evaluate(T, {N, 12.0, -1e-13});
      EXPECT_LE(rel_diff(a.Z, b.Z), 1e-8);
      EXPECT_LE(rel_diff(a.U, b.U), 1e-8);
      EXPECT_LE(rel_diff(a.S, b.S), 1e-8);
      EXPECT_LE(rel_diff(*a.p, *b.p), 1e-8);
    }
  }
}

TEST(Evaluate, TimeDependentPointHasNoPressure) {
  const EvalDomain d{{12.0, GapKind::ImaginaryGap, 3.0}, 5.0};
  EXPECT_FALSE(evaluate(d).p.has_value());
}

TEST(Evaluate, RejectsNonPositiveTemperature) {
  EXPECT_ERROR_CODE(evaluate(0.0, {160, 12.0, 1.0}), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(evaluate(-1.0, {160, 12.0, 1.0}), ErrorCode::InvalidArgument);
}
