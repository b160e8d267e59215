#pragma once

#include <optional>

#include "ptcycle/spectrum.hpp"

namespace ptcycle {

// Canonical ensemble of the two decoupled ladders W+- at temperature T
// (k_B = hbar = 1). RealGap requires gap < nu.
struct EvalDomain {
  SpectralSplit split;
  double T = 1.0;

  void validate() const;
};

EvalDomain static_domain(double T, const ModelParams& p);

struct ThermoPoint {
  double T = 0.0;
  double Z = 0.0;
  double F = 0.0;
  double U = 0.0;
  double S = 0.0;
  std::optional<double> p;  // static-lambda evaluations only
};

// All quantities below are evaluated through the factorised forms
//   ln Z = -ln|1 - exp(-W+/T)| - ln|1 - exp(-W-/T)|
//   U    = W+/(exp(W+/T) - 1) + W-/(exp(W-/T) - 1)
// which stay real when W+- are complex conjugates and avoid overflow at
// low T. They are algebraically identical to the sinh/cosh closed forms.
double log_partition_function(const EvalDomain& d);
double partition_function(const EvalDomain& d);
double free_energy(const EvalDomain& d);
double internal_energy(const EvalDomain& d);
double entropy(const EvalDomain& d);

// dU/dT at fixed split, sum of (w / sinh w)^2 over both modes with w = W/2T.
double heat_capacity(const EvalDomain& d);

// p = -dF/dlambda at fixed T, nu. Continuous through lambda = 0.
double pressure(double T, const ModelParams& p);

ThermoPoint evaluate(const EvalDomain& d);
ThermoPoint evaluate(double T, const ModelParams& p);

// Shorthands for the static model.
inline double entropy_at(double T, const ModelParams& p) { return entropy(static_domain(T, p)); }
inline double energy_at(double T, const ModelParams& p) { return internal_energy(static_domain(T, p)); }
inline double free_energy_at(double T, const ModelParams& p) { return free_energy(static_domain(T, p)); }

}  // namespace ptcycle
