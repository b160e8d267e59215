#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ptcycle/numerics.hpp"
#include "ptcycle/spectrum.hpp"

namespace ptcycle {

// Corner of a four-step cycle. Corners 1 and 2 sit on the hot isotherm T2,
// corners 3 and 4 on the cold isotherm T1.
struct CyclePoint {
  int label = 0;
  double T = 0.0;
  double lambda = 0.0;
  double nu = 0.0;
  double S = 0.0;
  double U = 0.0;
};

enum class StepKind { Isothermal, IsoLambda, IsentropeNu, IsentropeLambda, TimeEvolution };

struct CycleStep {
  int from = 0;
  int to = 0;
  StepKind kind = StepKind::Isothermal;
  double dQ = 0.0;  // heat absorbed by the system
  double dW = 0.0;  // work done by the system
  double dU = 0.0;
};

enum class PathLabel { Gamma1, Gamma2 };
enum class CycleKind { TLambda, CarnotBroken, CarnotSymmetric };

struct CycleReport {
  CycleKind kind = CycleKind::TLambda;
  PathLabel path_label = PathLabel::Gamma2;
  std::array<CyclePoint, 4> points{};
  std::array<CycleStep, 4> steps{};
  double loop_Q = 0.0;
  double loop_W = 0.0;
  double loop_U = 0.0;
  double heat_in = 0.0;  // sum of strictly positive step heats
  double efficiency = 0.0;
};

enum class VariedParameter { Nu, Lambda };

struct IsentropePath {
  VariedParameter varied = VariedParameter::Nu;
  double S_level = 0.0;
  std::vector<std::pair<double, double>> samples;  // (T, varied value)
};

std::string_view to_string(StepKind kind);
std::string_view to_string(CycleKind kind);
std::string_view to_string(PathLabel label);

struct EntropyMatch {
  double lambda = 0.0;
  double S = 0.0;  // common entropy S(T1, lambda) = S(T2, lambda)
};

// All lambda in the bracket with S(T1, lambda) = S(T2, lambda), increasing.
// Throws NoRootInBracket when there is none.
std::vector<EntropyMatch> entropy_match_lambda(double T1, double T2, double nu, int N,
                                               Interval bracket, const NumericsConfig& cfg = {});

// The match whose common entropy is closest to `target_S`.
EntropyMatch select_by_entropy(const std::vector<EntropyMatch>& matches, double target_S);

// Solves S(T, nu, lambda) = S_level for nu on an equispaced T grid by
// continuation from `nu_start`. steps + 1 samples (1 when T_from == T_to).
IsentropePath trace_isentrope_nu(double S_level, double lambda, int N, double T_from, double T_to,
                                 int steps, double nu_start, const NumericsConfig& cfg = {});

// Solves S(T, nu, lambda) = S_level for lambda on an equispaced T grid. Every
// sample must have exactly one root in `window`: MultiValued otherwise, or
// BranchLost when there is none.
IsentropePath trace_isentrope_lambda(double S_level, double nu, int N, double T_from, double T_to,
                                     int steps, Interval window, const NumericsConfig& cfg = {});

// Admissible lambda window for a given nu, N: [lower, nu^2/N) shrunk by a
// relative margin so the upper end stays normalizable.
Interval lambda_window(double nu, int N, double lower);

// Step heat/work/energy. `from` and `to` must carry consistent T, lambda, nu.
CycleStep isothermal_step(const CyclePoint& from, const CyclePoint& to, int N,
                          const NumericsConfig& cfg = {});
CycleStep iso_lambda_step(const CyclePoint& from, const CyclePoint& to, int N,
                          const NumericsConfig& cfg = {});
CycleStep isentrope_step(StepKind kind, const CyclePoint& from, const CyclePoint& to);
CycleStep time_evolution_step(const ModelParams& p, const TimeDependence& td, double T_from,
                              double t_from, double T_to, double t_to);

struct CycleSpec {
  int N = 160;
  double nu = 12.0;
  double T1 = 0.0;  // cold
  double T2 = 0.0;  // hot
  // Broken-regime cycles: lambda1 is given, lambda2 is either given or
  // derived by entropy matching inside lambda2_bracket (closest to target_S2,
  // or the first root if no target).
  double lambda1 = 0.0;
  std::optional<double> lambda2;
  std::optional<double> target_S2;
  Interval lambda2_bracket{-200.0, -0.01};
  // Symmetric Carnot: entropy levels and the admissible lambda window.
  double S1 = 0.0;
  double S2 = 0.0;
  std::optional<Interval> symmetric_window;
  int path_steps = 64;
  NumericsConfig numerics;
};

CycleReport build_cycle(CycleKind kind, const CycleSpec& spec);

// Ideal-gas Stirling efficiency with R = 1.
double stirling_reference_efficiency(double T1, double T2, double lambda1, double lambda2,
                                     double cv_over_R);

// c_v / R for which the Stirling expression equals `efficiency`.
double stirling_matching_cv(double efficiency, double T1, double T2, double lambda1,
                            double lambda2);

// Entropy on the static isotherm T after evolving to time t.
double entropy_at_time(double T, double t, const ModelParams& p, const TimeDependence& td);

// Roots in t of S(T, t) = S_level in the bracket, increasing.
std::vector<double> time_isentrope_roots(double S_level, double T, const ModelParams& p,
                                         const TimeDependence& td, Interval t_bracket,
                                         const NumericsConfig& cfg = {});

// First root of S(T, t) = S_level in the bracket; NoRootInBracket otherwise.
double time_isentrope_solve(double S_level, double T, const ModelParams& p,
                            const TimeDependence& td, Interval t_bracket,
                            const NumericsConfig& cfg = {});

}  // namespace ptcycle
