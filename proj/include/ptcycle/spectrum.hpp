#pragma once

#include <complex>

namespace ptcycle {

// Raw couplings of the non-Hermitian boson/bath Hamiltonian.
struct CouplingParams {
  double g = 0.0;
  double k = 0.0;
};

// Bath size N, oscillator frequency nu and the effective coupling
// lambda = g^2 - k^2, which plays the role of a volume.
struct ModelParams {
  int N = 1;
  double nu = 1.0;
  double lambda = 0.0;

  // N >= 1, nu > 0, finite lambda.
  void validate() const;
};

// Frequency argument of the oscillating term in mu(t) and mu_I(t).
//   LambdaScaled: 2 * lambda * sqrt(N) * (t + c2)
//   SqrtScaled:   2 * sqrt(N * lambda) * (t + c2)
// LambdaScaled is the one for which the closed-form coincidence times are
// exact coincidences and is the default.
enum class PhaseConvention { LambdaScaled, SqrtScaled };

struct TimeDependence {
  double c1 = 1.0;
  double c2 = 0.0;
  PhaseConvention phase = PhaseConvention::LambdaScaled;
};

enum class GapKind { RealGap, ImaginaryGap };

// Mode frequencies W+- = nu +- gap (RealGap) or nu +- i*gap (ImaginaryGap).
struct SpectralSplit {
  double nu = 1.0;
  GapKind kind = GapKind::RealGap;
  double gap = 0.0;

  std::complex<double> w_plus() const;
  std::complex<double> w_minus() const;
};

double lambda_from_couplings(const CouplingParams& c);

// Dyson map parameter, tanh(2 gamma) = -k/g. Throws BrokenRegimeGamma when
// |k| >= |g|.
double dyson_gamma(const CouplingParams& c);

SpectralSplit static_split(const ModelParams& p);

// Classification threshold for time-dependent coefficient functions.
inline constexpr double kClassifyTol = 1e-9;

struct MuValue {
  std::complex<double> value;
  GapKind kind = GapKind::RealGap;
  double gap = 0.0;     // |mu|
  double signed_part = 0.0;  // Re mu for RealGap, Im mu for ImaginaryGap
};

// Time-dependent coupling of the Hermitian counterpart, evaluated in complex
// arithmetic with principal square roots and classified as real or imaginary.
// Throws NonClassifiableMu for genuinely complex or singular values.
MuValue mu(double t, const ModelParams& p, const TimeDependence& td);

// Unclassified complex value; lambda == 0 uses the analytic limit.
std::complex<double> mu_complex(double t, const ModelParams& p, const TimeDependence& td);

// Dyson-map phase mu_I(t) on the arctan branch that is continuous in t.
double mu_imag(double t, const ModelParams& p, const TimeDependence& td);

// SpectralSplit with W+-(t) = nu +- mu(t). Throws RealGapUnbounded when a real
// gap reaches nu.
SpectralSplit split_at_time(double t, const ModelParams& p, const TimeDependence& td);

// Angular frequency multiplying (t + c2); complex for SqrtScaled with lambda < 0.
std::complex<double> phase_frequency(const ModelParams& p, const TimeDependence& td);

struct CoincidenceTime {
  double t = 0.0;            // root of |mu(t)| = sqrt(N |lambda|)
  bool closed_form_real = false;
  double closed_form = 0.0;  // closed-form estimate, when real
  double discrepancy = 0.0;  // |t - closed_form|, when the closed form is real
};

// n-th instant at which the time-dependent spectrum coincides with the static
// one. Throws OutsideRealityWindow for |lambda| > c1^2/3 and NoCoincidence
// when no such instant exists (lambda == 0, or the search fails).
CoincidenceTime coincidence_times(const ModelParams& p, const TimeDependence& td, int n);

}  // namespace ptcycle
