#include "ptcycle/thermo.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "ptcycle/error.hpp"

namespace ptcycle {

using cd = std::complex<double>;

void EvalDomain::validate() const {
  if (!(T > 0) || !std::isfinite(T)) {
    throw Error(ErrorCode::InvalidArgument, "temperature must be positive, got " + std::to_string(T));
  }
  if (!(split.nu > 0) || !std::isfinite(split.nu) || !(split.gap >= 0) || !std::isfinite(split.gap)) {
    throw Error(ErrorCode::InvalidArgument, "split needs nu > 0 and a finite gap >= 0");
  }
  if (split.kind == GapKind::RealGap && split.gap >= split.nu) {
    throw Error(ErrorCode::NonNormalizable, "real gap " + std::to_string(split.gap) +
                                                " >= nu " + std::to_string(split.nu));
  }
}

EvalDomain static_domain(double T, const ModelParams& p) { return {static_split(p), T}; }

namespace {

// |1 - exp(-W/T)|^2 for the conjugate pair, or the product of both real factors.
double denominator(const EvalDomain& d) {
  const double x = d.split.nu / d.T;
  const double th = d.split.gap / d.T;
  if (d.split.kind == GapKind::RealGap) return std::expm1(-(x + th)) * std::expm1(-(x - th));
  const double em = std::expm1(-x);
  const double s = std::sin(0.5 * th);
  return em * em + 4.0 * std::exp(-x) * s * s;
}

double bose_energy(double w, double T) { return w / std::expm1(w / T); }

// (w / sinh w)^2 for Re w > 0.
cd sinh_ratio_sq(cd w) {
  cd r;
  if (std::abs(w) < 1e-3) {
    const cd w2 = w * w;
    r = 1.0 - w2 / 6.0 + 7.0 * w2 * w2 / 360.0;
  } else {
    r = 2.0 * w * std::exp(-w) / (1.0 - std::exp(-2.0 * w));
  }
  return r * r;
}

double sinhc(double z) {
  if (z < 1e-3) {
    const double z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

double sinc(double z) {
  if (z < 1e-3) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

}  // namespace

double log_partition_function(const EvalDomain& d) {
  d.validate();
  return -std::log(denominator(d));
}

double partition_function(const EvalDomain& d) { return std::exp(log_partition_function(d)); }

double free_energy(const EvalDomain& d) { return -d.T * log_partition_function(d); }

double internal_energy(const EvalDomain& d) {
  d.validate();
  const double nu = d.split.nu;
  const double g = d.split.gap;
  if (d.split.kind == GapKind::RealGap) return bose_energy(nu + g, d.T) + bose_energy(nu - g, d.T);
  const double x = nu / d.T;
  const double th = g / d.T;
  const double ex = std::exp(-x);
  const double a = ex * std::cos(th) - ex * ex;
  const double b = ex * std::sin(th);
  return 2.0 * (nu * a + g * b) / denominator(d);
}

double entropy(const EvalDomain& d) { return log_partition_function(d) + internal_energy(d) / d.T; }

double heat_capacity(const EvalDomain& d) {
  d.validate();
  const double inv = 0.5 / d.T;
  if (d.split.kind == GapKind::RealGap) {
    return sinh_ratio_sq(cd((d.split.nu + d.split.gap) * inv, 0.0)).real() +
           sinh_ratio_sq(cd((d.split.nu - d.split.gap) * inv, 0.0)).real();
  }
  return 2.0 * sinh_ratio_sq(cd(d.split.nu * inv, d.split.gap * inv)).real();
}

double pressure(double T, const ModelParams& p) {
  const EvalDomain d = static_domain(T, p);
  d.validate();
  const double x = p.nu / T;
  const double z = std::sqrt(p.N * std::abs(p.lambda)) / T;
  double h;
  if (p.lambda >= 0) {
    h = z < 1e-3 ? std::exp(-x) * sinhc(z) : (std::exp(z - x) - std::exp(-z - x)) / (2.0 * z);
  } else {
    h = std::exp(-x) * sinc(z);
  }
  return p.N / T * h / denominator(d);
}

ThermoPoint evaluate(const EvalDomain& d) {
  ThermoPoint out;
  out.T = d.T;
  const double log_z = log_partition_function(d);
  out.Z = std::exp(log_z);
  out.F = -d.T * log_z;
  out.U = internal_energy(d);
  out.S = log_z + out.U / d.T;
  return out;
}

ThermoPoint evaluate(double T, const ModelParams& p) {
  ThermoPoint out = evaluate(static_domain(T, p));
  out.p = pressure(T, p);
  return out;
}

}  // namespace ptcycle
