#pragma once

#include <vector>

#include "ptcycle/numerics.hpp"

namespace ptcycle {

// Maxwell construction on one isotherm of the broken regime. Intervals are
// stored with lo < hi, so binodal = [lambda_0^(2n+2), lambda_0^(2n)].
struct PhaseRegions {
  double T = 0.0;
  int branch = 1;
  std::vector<double> zeros;  // lambda_0^(1), lambda_0^(2), ... (decreasing)
  Interval binodal;
  Interval spinodal;
  double maxwell_pressure = 0.0;
  double free_energy_het = 0.0;  // common tangent level F(lambda_1) = F(lambda_2)
};

struct MixtureState {
  double lambda = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
};

// lambda_0^(n) = -n^2 pi^2 T^2 / N for n = 1..n_max.
std::vector<double> pressure_zeros(double T, int N, int n_max);

// Refines the n-th zero as a sign change of the pressure.
double refine_pressure_zero(double T, double nu, int N, int n, const NumericsConfig& cfg = {});

// Closed-form integral of p over [lambda_0^(n-1), lambda_0^(n)], with
// lambda_0^(0) = 0.
double isotherm_area(int n, double T, double nu, int N);
double isotherm_area_quadrature(int n, double T, double nu, int N, const NumericsConfig& cfg = {});

// Lever rule between lambda1 and lambda2 (either order). OutOfBinodal when
// lambda lies outside.
MixtureState lever_fractions(double lambda, double lambda1, double lambda2);

Interval binodal_interval(double T, int N, int branch);

// F on the common tangent of the branch. OutOfBinodal outside the binodal.
double heterogeneous_free_energy(double lambda, double T, double nu, int N, int branch);

// Zeros of dp/dlambda inside the binodal; dp/dlambda > 0 between them.
Interval spinodal_interval(double T, double nu, int N, int branch, const NumericsConfig& cfg = {});

double pressure_slope(double T, double nu, int N, double lambda, const NumericsConfig& cfg = {});

PhaseRegions analyze_phase(double T, double nu, int N, int branch, const NumericsConfig& cfg = {});

struct WidthRow {
  double T = 0.0;
  double binodal_width = 0.0;
  double spinodal_width = 0.0;
};

struct CriticalScan {
  std::vector<WidthRow> rows;
  // Merge temperature from a least-squares fit of (binodal - spinodal) width
  // against T^2, clamped at zero.
  double extrapolated_T_crit = 0.0;
};

CriticalScan critical_temperature_scan(double nu, int N, const std::vector<double>& T_list,
                                       int branch = 1, const NumericsConfig& cfg = {});

// Entropy of the two-phase mixture. The Maxwell line p = 0 makes it
// lambda-independent; the constant is taken to be zero.
double heterogeneous_entropy(double T);

// dS/dlambda|_T - dp/dT|_lambda by central differences.
double maxwell_relation_residual(double T, double lambda, double nu, int N,
                                 const NumericsConfig& cfg = {});

}  // namespace ptcycle
