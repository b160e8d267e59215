#include "ptcycle/phase.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ptcycle/error.hpp"
#include "ptcycle/thermo.hpp"

namespace ptcycle {

namespace {

double zero_at(double T, int N, int n) {
  const double pi_t = std::numbers::pi * T;
  return -static_cast<double>(n) * n * pi_t * pi_t / N;
}

void check_branch(int branch) {
  if (branch < 1) throw Error(ErrorCode::InvalidArgument, "branch index must be >= 1");
}

}  // namespace

std::vector<double> pressure_zeros(double T, int N, int n_max) {
  if (!(T > 0) || n_max < 1 || N < 1) {
    throw Error(ErrorCode::InvalidArgument, "pressure zeros need T > 0, N >= 1, n_max >= 1");
  }
  std::vector<double> zeros;
  zeros.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) zeros.push_back(zero_at(T, N, n));
  return zeros;
}

double refine_pressure_zero(double T, double nu, int N, int n, const NumericsConfig& cfg) {
  // Half-way to the neighbouring zeros in sqrt(-lambda), i.e. z = (n +- 1/2) pi.
  const double lo = zero_at(T, N, 1) * (n + 0.5) * (n + 0.5);
  const double hi = zero_at(T, N, 1) * (n - 0.5) * (n - 0.5);
  return find_root_bracketed([&](double lambda) { return pressure(T, ModelParams{N, nu, lambda}); }, lo,
                             hi, cfg);
}

double isotherm_area(int n, double T, double nu, [[maybe_unused]] int N) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "area index must be >= 1");
  const double c_prev = (n - 1) % 2 == 0 ? 1.0 : -1.0;
  const double c_here = n % 2 == 0 ? 1.0 : -1.0;
  // log[(c_prev - cosh x)/(c_here - cosh x)] = log1p((c_here - c_prev)/(cosh x - c_here))
  const double ch = std::cosh(nu / T);
  return T * std::log1p((c_here - c_prev) / (ch - c_here));
}

double isotherm_area_quadrature(int n, double T, double nu, int N, const NumericsConfig& cfg) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "area index must be >= 1");
  const double a = n == 1 ? 0.0 : zero_at(T, N, n - 1);
  return integrate_adaptive([&](double lambda) { return pressure(T, ModelParams{N, nu, lambda}); }, a,
                            zero_at(T, N, n), cfg);
}

MixtureState lever_fractions(double lambda, double lambda1, double lambda2) {
  if (lambda1 == lambda2) throw Error(ErrorCode::InvalidArgument, "lever rule needs lambda1 != lambda2");
  if (lambda < std::min(lambda1, lambda2) || lambda > std::max(lambda1, lambda2)) {
    throw Error(ErrorCode::OutOfBinodal, "lambda " + std::to_string(lambda) + " outside [" +
                                             std::to_string(lambda1) + ", " + std::to_string(lambda2) + "]");
  }
  const double n1 = (lambda2 - lambda) / (lambda2 - lambda1);
  return {lambda, n1, 1.0 - n1};
}

Interval binodal_interval(double T, int N, int branch) {
  check_branch(branch);
  return {zero_at(T, N, 2 * branch + 2), zero_at(T, N, 2 * branch)};
}

double heterogeneous_free_energy(double lambda, double T, double nu, int N, int branch) {
  const Interval b = binodal_interval(T, N, branch);
  const MixtureState mix = lever_fractions(lambda, b.hi, b.lo);
  const double F1 = free_energy_at(T, ModelParams{N, nu, b.hi});
  const double F2 = free_energy_at(T, ModelParams{N, nu, b.lo});
  if (std::abs(F1 - F2) > 1e-9 * (1.0 + std::abs(F1))) {
    throw Error(ErrorCode::EvaluationFailed, "tangent endpoints differ: F1 = " + std::to_string(F1) +
                                                 ", F2 = " + std::to_string(F2));
  }
  return mix.n1 * F1 + mix.n2 * F2;
}

double pressure_slope(double T, double nu, int N, double lambda, const NumericsConfig& cfg) {
  return derivative_central([&](double l) { return pressure(T, ModelParams{N, nu, l}); }, lambda, cfg);
}

namespace {

// p * e^(nu/T) * T/N on the broken side. The factor does not depend on
// lambda, so the inflection points are unchanged, but it keeps p from
// underflowing at low T.
double reduced_pressure(double T, double nu, int N, double lambda) {
  const double x = nu / T;
  const double z = std::sqrt(N * std::abs(lambda)) / T;
  const double sinc = z == 0.0 ? 1.0 : std::sin(z) / z;
  const double em = std::expm1(-x);
  const double s = std::sin(0.5 * z);
  return sinc / (em * em + 4.0 * std::exp(-x) * s * s);
}

}  // namespace

Interval spinodal_interval(double T, double nu, int N, int branch, const NumericsConfig& cfg) {
  const Interval b = binodal_interval(T, N, branch);
  // Work in the unit coordinate u = (lambda - lo) / width so the difference
  // step follows the binodal as it shrinks with T.
  auto at = [&](double u) { return b.lo + u * b.width(); };
  auto slope = [&](double u) {
    return derivative_central([&](double v) { return reduced_pressure(T, nu, N, at(v)); }, u, cfg);
  };
  const double margin = 1e-9;
  const auto roots = find_all_roots(slope, margin, 1.0 - margin, cfg.scan_grid, cfg);
  if (roots.size() != 2) {
    throw Error(ErrorCode::RootNotBracketed,
                "expected two inflection points in the binodal, found " + std::to_string(roots.size()));
  }
  if (!(slope(0.5 * (roots[0] + roots[1])) > 0)) {
    throw Error(ErrorCode::RootNotBracketed, "pressure does not rise between the inflection points");
  }
  return {at(roots[0]), at(roots[1])};
}

PhaseRegions analyze_phase(double T, double nu, int N, int branch, const NumericsConfig& cfg) {
  check_branch(branch);
  PhaseRegions r;
  r.T = T;
  r.branch = branch;
  r.zeros = pressure_zeros(T, N, 2 * branch + 2);
  r.binodal = binodal_interval(T, N, branch);
  r.spinodal = spinodal_interval(T, nu, N, branch, cfg);
  r.maxwell_pressure = 0.0;
  r.free_energy_het = heterogeneous_free_energy(r.binodal.hi, T, nu, N, branch);
  return r;
}

CriticalScan critical_temperature_scan(double nu, int N, const std::vector<double>& T_list, int branch,
                                       const NumericsConfig& cfg) {
  CriticalScan scan;
  for (double T : T_list) {
    if (!(T > 0)) throw Error(ErrorCode::InvalidArgument, "scan temperatures must be positive");
    scan.rows.push_back({T, binodal_interval(T, N, branch).width(),
                         spinodal_interval(T, nu, N, branch, cfg).width()});
  }
  if (scan.rows.size() >= 2) {
    // Least squares gap(T) = a + b T^2; the bands merge where the gap vanishes.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : scan.rows) {
      const double x = row.T * row.T;
      const double y = row.binodal_width - row.spinodal_width;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(scan.rows.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    const double merge_sq = slope != 0 ? -intercept / slope : 0.0;
    scan.extrapolated_T_crit = merge_sq > 0 ? std::sqrt(merge_sq) : 0.0;
  }
  return scan;
}

double heterogeneous_entropy(double T) {
  if (!(T > 0)) throw Error(ErrorCode::InvalidArgument, "temperature must be positive");
  return 0.0;
}

double maxwell_relation_residual(double T, double lambda, double nu, int N, const NumericsConfig& cfg) {
  const double dS = derivative_central([&](double l) { return entropy_at(T, ModelParams{N, nu, l}); },
                                       lambda, cfg);
  const double dp = derivative_central([&](double t) { return pressure(t, ModelParams{N, nu, lambda}); },
                                       T, cfg);
  return dS - dp;
}

}  // namespace ptcycle
