#include "ptcycle/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ptcycle/error.hpp"
#include "ptcycle/numerics.hpp"

namespace ptcycle {

using cd = std::complex<double>;

void ModelParams::validate() const {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1, got " + std::to_string(N));
  if (!(nu > 0) || !std::isfinite(nu)) {
    throw Error(ErrorCode::InvalidArgument, "nu must be positive, got " + std::to_string(nu));
  }
  if (!std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be finite");
}

cd SpectralSplit::w_plus() const {
  return kind == GapKind::RealGap ? cd(nu + gap, 0.0) : cd(nu, gap);
}

cd SpectralSplit::w_minus() const {
  return kind == GapKind::RealGap ? cd(nu - gap, 0.0) : cd(nu, -gap);
}

double lambda_from_couplings(const CouplingParams& c) { return c.g * c.g - c.k * c.k; }

double dyson_gamma(const CouplingParams& c) {
  if (std::abs(c.k) >= std::abs(c.g)) {
    throw Error(ErrorCode::BrokenRegimeGamma,
                "|k| >= |g| (g=" + std::to_string(c.g) + ", k=" + std::to_string(c.k) + ")");
  }
  return 0.5 * std::atanh(-c.k / c.g);
}

SpectralSplit static_split(const ModelParams& p) {
  p.validate();
  if (p.lambda >= 0) return {p.nu, GapKind::RealGap, std::sqrt(p.N * p.lambda)};
  return {p.nu, GapKind::ImaginaryGap, std::sqrt(-p.N * p.lambda)};
}

cd phase_frequency(const ModelParams& p, const TimeDependence& td) {
  if (td.phase == PhaseConvention::LambdaScaled) return {2.0 * p.lambda * std::sqrt(double(p.N)), 0.0};
  return 2.0 * std::sqrt(cd(p.N * p.lambda, 0.0));
}

namespace {

void check_time_dependence(const TimeDependence& td) {
  if (td.c1 == 0.0 || !std::isfinite(td.c1) || !std::isfinite(td.c2)) {
    throw Error(ErrorCode::InvalidArgument, "c1 must be finite and non-zero");
  }
}

}  // namespace

cd mu_complex(double t, const ModelParams& p, const TimeDependence& td) {
  p.validate();
  check_time_dependence(td);
  const double sqrt_n = std::sqrt(double(p.N));
  const double tau = t + td.c2;
  const double c1sq = td.c1 * td.c1;
  if (p.lambda == 0.0) {
    // Removable singularity at the exceptional point.
    if (td.phase == PhaseConvention::LambdaScaled) return {0.5 * sqrt_n * std::abs(td.c1), 0.0};
    return {sqrt_n * std::abs(td.c1) / (2.0 + 8.0 * c1sq * p.N * tau * tau), 0.0};
  }
  const cd lam(p.lambda, 0.0);
  const cd s = std::sin(phase_frequency(p, td) * tau);
  const cd num = lam * sqrt_n * std::sqrt(cd(c1sq + p.lambda, 0.0));
  const cd den = 2.0 * lam + 2.0 * c1sq * s * s;
  return num / den;
}

MuValue mu(double t, const ModelParams& p, const TimeDependence& td) {
  const cd v = mu_complex(t, p, td);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw Error(ErrorCode::NonClassifiableMu, "mu is singular at t=" + std::to_string(t));
  }
  const double mag = std::abs(v);
  if (mag == 0.0) return {v, GapKind::RealGap, 0.0, 0.0};
  if (std::abs(v.imag()) <= kClassifyTol * mag) return {v, GapKind::RealGap, std::abs(v.real()), v.real()};
  if (std::abs(v.real()) <= kClassifyTol * mag) {
    return {v, GapKind::ImaginaryGap, std::abs(v.imag()), v.imag()};
  }
  throw Error(ErrorCode::NonClassifiableMu,
              "mu(" + std::to_string(t) + ") = " + std::to_string(v.real()) + " + " +
                  std::to_string(v.imag()) + "i is neither real nor imaginary");
}

double mu_imag(double t, const ModelParams& p, const TimeDependence& td) {
  p.validate();
  check_time_dependence(td);
  const double tau = t + td.c2;
  const double c1sq = td.c1 * td.c1;
  if (p.lambda == 0.0) {
    if (td.phase == PhaseConvention::LambdaScaled) return 0.0;
    return 0.5 * std::atan(2.0 * std::abs(td.c1) * std::sqrt(double(p.N)) * tau);
  }
  const cd ratio = std::sqrt(cd(c1sq + p.lambda, 0.0)) / std::sqrt(cd(p.lambda, 0.0));
  const cd angle = phase_frequency(p, td) * tau;
  const bool real_chain = std::abs(ratio.imag()) <= kClassifyTol * std::abs(ratio) &&
                          std::abs(angle.imag()) <= kClassifyTol * std::max(1.0, std::abs(angle));
  if (real_chain) {
    const double r = ratio.real();
    const double a = angle.real();
    // atan(r tan a) continued across branches: reduce a to [-pi, pi] and add
    // the full turns back, both from the same reduced angle.
    const double two_pi = 2.0 * std::numbers::pi;
    const double reduced = std::remainder(a, two_pi);
    const double turns = std::round((a - reduced) / two_pi);
    const double branch = std::atan2(r * std::sin(reduced), std::cos(reduced)) +
                          (r < 0 ? -1.0 : 1.0) * two_pi * turns;
    return 0.5 * branch;
  }
  const cd v = 0.5 * std::atan(ratio * std::tan(angle));
  if (std::isfinite(v.real()) && std::abs(v.imag()) <= kClassifyTol * std::max(std::abs(v), 1e-300)) {
    return v.real();
  }
  throw Error(ErrorCode::NonClassifiableMu, "mu_I(" + std::to_string(t) + ") is not real");
}

SpectralSplit split_at_time(double t, const ModelParams& p, const TimeDependence& td) {
  const MuValue m = mu(t, p, td);
  if (m.kind == GapKind::RealGap && m.gap >= p.nu) {
    throw Error(ErrorCode::RealGapUnbounded, "real gap " + std::to_string(m.gap) + " >= nu at t=" +
                                                 std::to_string(t));
  }
  return {p.nu, m.kind, m.gap};
}

CoincidenceTime coincidence_times(const ModelParams& p, const TimeDependence& td, int n) {
  p.validate();
  check_time_dependence(td);
  const double c1sq = td.c1 * td.c1;
  if (std::abs(p.lambda) > c1sq / 3.0) {
    throw Error(ErrorCode::OutsideRealityWindow,
                "|lambda| = " + std::to_string(std::abs(p.lambda)) + " exceeds c1^2/3");
  }
  if (p.lambda == 0.0) {
    throw Error(ErrorCode::NoCoincidence, "mu stays at sqrt(N)|c1|/2 at the exceptional point");
  }
  const double sqrt_n = std::sqrt(double(p.N));
  const double target = std::sqrt(p.N * std::abs(p.lambda));
  auto residual = [&](double t) { return std::abs(mu_complex(t, p, td)) - target; };

  CoincidenceTime out;
  const cd lam(p.lambda, 0.0);
  const cd arg = 1.0 + (2.0 * lam - std::sqrt(lam) * std::sqrt(cd(c1sq + p.lambda, 0.0))) / c1sq;
  const double omega = std::abs(phase_frequency(p, td));
  const double period = std::numbers::pi / omega;
  if (std::abs(arg.imag()) <= 1e-12 && arg.real() >= -1.0 && arg.real() <= 1.0) {
    out.closed_form_real = true;
    out.closed_form = std::acos(arg.real()) / (4.0 * p.lambda * sqrt_n) +
                      std::numbers::pi * n / (2.0 * p.lambda * sqrt_n) - td.c2;
  }

  NumericsConfig cfg;
  if (out.closed_form_real) {
    const double guess = out.closed_form;
    if (std::abs(residual(guess)) <= 1e-10 * target) {
      out.t = guess;
      return out;
    }
    for (double r = 1e-4 * period; r <= 0.5 * period; r *= 2.0) {
      const auto roots = find_all_roots(residual, guess - r, guess + r, 64, cfg);
      if (roots.empty()) continue;
      double best = roots.front();
      for (double x : roots) {
        if (std::abs(x - guess) < std::abs(best - guess)) best = x;
      }
      out.t = best;
      out.discrepancy = std::abs(best - guess);
      return out;
    }
  }
  const double lo = -td.c2 + n * period;
  const auto roots = find_all_roots(residual, lo, lo + period, cfg.scan_grid, cfg);
  if (roots.empty()) {
    throw Error(ErrorCode::NoCoincidence, "no coincidence in period " + std::to_string(n));
  }
  out.t = roots.front();
  if (out.closed_form_real) out.discrepancy = std::abs(out.t - out.closed_form);
  return out;
}

}  // namespace ptcycle
