#include "ptcycle/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ptcycle/error.hpp"
#include "ptcycle/thermo.hpp"

namespace ptcycle {

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Isothermal: return "Isothermal";
    case StepKind::IsoLambda: return "IsoLambda";
    case StepKind::IsentropeNu: return "IsentropeNu";
    case StepKind::IsentropeLambda: return "IsentropeLambda";
    case StepKind::TimeEvolution: return "TimeEvolution";
  }
  return "Unknown";
}

std::string_view to_string(CycleKind kind) {
  switch (kind) {
    case CycleKind::TLambda: return "TLambda";
    case CycleKind::CarnotBroken: return "CarnotBroken";
    case CycleKind::CarnotSymmetric: return "CarnotSymmetric";
  }
  return "Unknown";
}

std::string_view to_string(PathLabel label) {
  return label == PathLabel::Gamma1 ? "Gamma1" : "Gamma2";
}

namespace {

double static_entropy(double T, double nu, double lambda, int N) {
  return entropy_at(T, ModelParams{N, nu, lambda});
}

CyclePoint make_point(int label, double T, double lambda, double nu, int N) {
  const EvalDomain d = static_domain(T, ModelParams{N, nu, lambda});
  return {label, T, lambda, nu, entropy(d), internal_energy(d)};
}

std::vector<double> temperature_grid(double T_from, double T_to, int steps) {
  if (T_from == T_to) return {T_from};
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "isentrope trace needs steps >= 1");
  std::vector<double> Ts(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    Ts[k] = (k == steps) ? T_to : T_from + (T_to - T_from) * static_cast<double>(k) / steps;
  }
  return Ts;
}

}  // namespace

std::vector<EntropyMatch> entropy_match_lambda(double T1, double T2, double nu, int N,
                                               Interval bracket, const NumericsConfig& cfg) {
  if (T1 == T2 || !(T1 > 0) || !(T2 > 0)) {
    throw Error(ErrorCode::InvalidArgument, "entropy matching needs two distinct positive temperatures");
  }
  auto f = [&](double lambda) {
    return static_entropy(T1, nu, lambda, N) - static_entropy(T2, nu, lambda, N);
  };
  std::vector<EntropyMatch> out;
  for (double lambda : find_all_roots(f, bracket.lo, bracket.hi, cfg.scan_grid, cfg)) {
    out.push_back({lambda, static_entropy(T1, nu, lambda, N)});
  }
  if (out.empty()) {
    throw Error(ErrorCode::NoRootInBracket, "no equal-entropy lambda in [" + std::to_string(bracket.lo) +
                                                ", " + std::to_string(bracket.hi) + "]");
  }
  return out;
}

EntropyMatch select_by_entropy(const std::vector<EntropyMatch>& matches, double target_S) {
  if (matches.empty()) throw Error(ErrorCode::NoRootInBracket, "no candidates to select from");
  return *std::min_element(matches.begin(), matches.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.S - target_S) < std::abs(b.S - target_S);
  });
}

IsentropePath trace_isentrope_nu(double S_level, double lambda, int N, double T_from, double T_to,
                                 int steps, double nu_start, const NumericsConfig& cfg) {
  IsentropePath path{VariedParameter::Nu, S_level, {}};
  const double nu_floor = lambda > 0 ? std::sqrt(N * lambda) * (1.0 + 1e-12) : 1e-9;
  double predictor = nu_start;
  for (double T : temperature_grid(T_from, T_to, steps)) {
    auto g = [&](double nu) { return static_entropy(T, nu, lambda, N) - S_level; };
    std::optional<double> found;
    double radius = 0.01 * std::max(predictor, 1.0);
    for (int attempt = 0; attempt <= 8 && !found; ++attempt, radius *= 2.0) {
      const double lo = std::max(nu_floor, predictor - radius);
      const double hi = predictor + radius;
      for (double root : find_all_roots(g, lo, hi, 32, cfg)) {
        if (!found || std::abs(root - predictor) < std::abs(*found - predictor)) found = root;
      }
    }
    if (!found) {
      throw Error(ErrorCode::BranchLost, "no nu with S = " + std::to_string(S_level) + " near " +
                                             std::to_string(predictor) + " at T = " + std::to_string(T));
    }
    path.samples.emplace_back(T, *found);
    predictor = *found;
  }
  return path;
}

Interval lambda_window(double nu, int N, double lower) {
  return {lower, nu * nu / N * (1.0 - 1e-9)};
}

IsentropePath trace_isentrope_lambda(double S_level, double nu, int N, double T_from, double T_to,
                                     int steps, Interval window, const NumericsConfig& cfg) {
  IsentropePath path{VariedParameter::Lambda, S_level, {}};
  for (double T : temperature_grid(T_from, T_to, steps)) {
    auto g = [&](double lambda) { return static_entropy(T, nu, lambda, N) - S_level; };
    const auto roots = find_all_roots(g, window.lo, window.hi, cfg.scan_grid, cfg);
    if (roots.size() > 1) {
      throw Error(ErrorCode::MultiValued, std::to_string(roots.size()) + " lambda roots for S = " +
                                              std::to_string(S_level) + " at T = " + std::to_string(T));
    }
    if (roots.empty()) {
      throw Error(ErrorCode::BranchLost, "no lambda with S = " + std::to_string(S_level) +
                                             " at T = " + std::to_string(T));
    }
    path.samples.emplace_back(T, roots.front());
  }
  return path;
}

CycleStep isothermal_step(const CyclePoint& from, const CyclePoint& to, int N,
                          const NumericsConfig& cfg) {
  if (from.T != to.T || from.nu != to.nu) {
    throw Error(ErrorCode::InvalidArgument, "isothermal step needs equal T and nu at both ends");
  }
  CycleStep step{from.label, to.label, StepKind::Isothermal, 0.0, 0.0, to.U - from.U};
  step.dQ = from.T * (to.S - from.S);
  const double T = from.T;
  const double nu = from.nu;
  step.dW = integrate_adaptive([&](double lambda) { return pressure(T, ModelParams{N, nu, lambda}); },
                               from.lambda, to.lambda, cfg);
  const double expected = step.dQ - step.dU;
  if (std::abs(step.dW - expected) > 1e-6 * (1.0 + std::abs(step.dW))) {
    throw Error(ErrorCode::QuadratureNotConverged,
                "isothermal work " + std::to_string(step.dW) + " disagrees with dQ - dU = " +
                    std::to_string(expected));
  }
  return step;
}

CycleStep iso_lambda_step(const CyclePoint& from, const CyclePoint& to, int N,
                          const NumericsConfig& cfg) {
  if (from.lambda != to.lambda || from.nu != to.nu) {
    throw Error(ErrorCode::InvalidArgument, "iso-lambda step needs equal lambda and nu at both ends");
  }
  const ModelParams p{N, from.nu, from.lambda};
  CycleStep step{from.label, to.label, StepKind::IsoLambda, 0.0, 0.0, to.U - from.U};
  // T dS = C dT along fixed (lambda, nu).
  step.dQ = integrate_adaptive([&](double T) { return heat_capacity(static_domain(T, p)); }, from.T,
                               to.T, cfg);
  return step;
}

CycleStep isentrope_step(StepKind kind, const CyclePoint& from, const CyclePoint& to) {
  const double dU = to.U - from.U;
  return {from.label, to.label, kind, 0.0, -dU, dU};
}

CycleStep time_evolution_step(const ModelParams& p, const TimeDependence& td, double T_from,
                              double t_from, double T_to, double t_to) {
  const double U_from = internal_energy({split_at_time(t_from, p, td), T_from});
  const double U_to = internal_energy({split_at_time(t_to, p, td), T_to});
  return {0, 0, StepKind::TimeEvolution, 0.0, -(U_to - U_from), U_to - U_from};
}

namespace {

void finish(CycleReport& r) {
  r.loop_Q = r.loop_W = r.loop_U = r.heat_in = 0.0;
  for (const auto& s : r.steps) {
    r.loop_Q += s.dQ;
    r.loop_W += s.dW;
    r.loop_U += s.dU;
    if (s.dQ > 0) r.heat_in += s.dQ;
  }
  r.efficiency = r.heat_in > 0 ? r.loop_W / r.heat_in : 0.0;
}

constexpr double kEndpointTol = 1e-4;

void check_endpoint(const IsentropePath& path, double expected, const char* what) {
  const double got = path.samples.back().second;
  if (std::abs(got - expected) > kEndpointTol * std::max(1.0, std::abs(expected))) {
    throw Error(ErrorCode::CycleInfeasible, std::string(what) + " isentrope ends at " +
                                                std::to_string(got) + ", corner has " +
                                                std::to_string(expected));
  }
}

CycleReport build_broken(CycleKind kind, const CycleSpec& s) {
  const NumericsConfig& cfg = s.numerics;
  const double S_a = static_entropy(s.T1, s.nu, s.lambda1, s.N);
  const double S_b = static_entropy(s.T2, s.nu, s.lambda1, s.N);
  if (std::abs(S_a - S_b) > 1e-4 * (1.0 + std::abs(S_a))) {
    throw Error(ErrorCode::CycleInfeasible, "S(T1, lambda1) = " + std::to_string(S_a) +
                                                " differs from S(T2, lambda1) = " + std::to_string(S_b));
  }
  double lambda2;
  if (s.lambda2) {
    lambda2 = *s.lambda2;
  } else {
    const auto matches = entropy_match_lambda(s.T1, s.T2, s.nu, s.N, s.lambda2_bracket, cfg);
    std::vector<EntropyMatch> others;
    for (const auto& m : matches) {
      if (std::abs(m.lambda - s.lambda1) > 1e-6 * std::max(1.0, std::abs(s.lambda1))) others.push_back(m);
    }
    if (others.empty()) throw Error(ErrorCode::NoRootInBracket, "only lambda1 matches in the bracket");
    lambda2 = s.target_S2 ? select_by_entropy(others, *s.target_S2).lambda : others.front().lambda;
  }

  CycleReport r;
  r.kind = kind;
  r.points = {make_point(1, s.T2, s.lambda1, s.nu, s.N), make_point(2, s.T2, lambda2, s.nu, s.N),
              make_point(3, s.T1, lambda2, s.nu, s.N), make_point(4, s.T1, s.lambda1, s.nu, s.N)};
  const auto& [p1, p2, p3, p4] = r.points;
  if (std::abs(p2.S - p3.S) > 1e-4 * (1.0 + std::abs(p2.S))) {
    throw Error(ErrorCode::CycleInfeasible, "S(T1, lambda2) differs from S(T2, lambda2)");
  }
  r.steps[0] = isothermal_step(p1, p2, s.N, cfg);
  r.steps[2] = isothermal_step(p3, p4, s.N, cfg);
  if (kind == CycleKind::TLambda) {
    r.path_label = PathLabel::Gamma2;
    r.steps[1] = iso_lambda_step(p2, p3, s.N, cfg);
    r.steps[3] = iso_lambda_step(p4, p1, s.N, cfg);
  } else {
    r.path_label = PathLabel::Gamma1;
    const auto down = trace_isentrope_nu(p2.S, lambda2, s.N, s.T2, s.T1, s.path_steps, s.nu, cfg);
    check_endpoint(down, s.nu, "2->3");
    const auto up = trace_isentrope_nu(p4.S, s.lambda1, s.N, s.T1, s.T2, s.path_steps, s.nu, cfg);
    check_endpoint(up, s.nu, "4->1");
    r.steps[1] = isentrope_step(StepKind::IsentropeNu, p2, p3);
    r.steps[3] = isentrope_step(StepKind::IsentropeNu, p4, p1);
  }
  finish(r);
  return r;
}

CycleReport build_symmetric(const CycleSpec& s) {
  const NumericsConfig& cfg = s.numerics;
  const Interval window = s.symmetric_window.value_or(lambda_window(s.nu, s.N, 0.0));
  auto corner_lambda = [&](double T, double S) {
    return trace_isentrope_lambda(S, s.nu, s.N, T, T, 1, window, cfg).samples.front().second;
  };
  CycleReport r;
  r.kind = CycleKind::CarnotSymmetric;
  r.path_label = PathLabel::Gamma1;
  r.points = {make_point(1, s.T2, corner_lambda(s.T2, s.S1), s.nu, s.N),
              make_point(2, s.T2, corner_lambda(s.T2, s.S2), s.nu, s.N),
              make_point(3, s.T1, corner_lambda(s.T1, s.S2), s.nu, s.N),
              make_point(4, s.T1, corner_lambda(s.T1, s.S1), s.nu, s.N)};
  const auto& [p1, p2, p3, p4] = r.points;
  const auto down = trace_isentrope_lambda(s.S2, s.nu, s.N, s.T2, s.T1, s.path_steps, window, cfg);
  check_endpoint(down, p3.lambda, "2->3");
  const auto up = trace_isentrope_lambda(s.S1, s.nu, s.N, s.T1, s.T2, s.path_steps, window, cfg);
  check_endpoint(up, p1.lambda, "4->1");
  r.steps[0] = isothermal_step(p1, p2, s.N, cfg);
  r.steps[1] = isentrope_step(StepKind::IsentropeLambda, p2, p3);
  r.steps[2] = isothermal_step(p3, p4, s.N, cfg);
  r.steps[3] = isentrope_step(StepKind::IsentropeLambda, p4, p1);
  finish(r);
  return r;
}

}  // namespace

CycleReport build_cycle(CycleKind kind, const CycleSpec& spec) {
  spec.numerics.validate();
  if (!(spec.T1 > 0) || !(spec.T2 > spec.T1)) {
    throw Error(ErrorCode::InvalidArgument, "cycle needs 0 < T1 < T2");
  }
  try {
    if (kind == CycleKind::CarnotSymmetric) return build_symmetric(spec);
    return build_broken(kind, spec);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::CycleInfeasible) throw;
    throw Error(ErrorCode::CycleInfeasible, e.what());
  }
}

double stirling_reference_efficiency(double T1, double T2, double lambda1, double lambda2,
                                     double cv_over_R) {
  if (T2 == T1) return 0.0;
  const double ratio = lambda2 / lambda1;
  if (!(ratio > 0) || ratio == 1.0 || !std::isfinite(ratio)) {
    throw Error(ErrorCode::InvalidRatio, "lambda2/lambda1 = " + std::to_string(ratio));
  }
  const double dT = T2 - T1;
  return dT / (T2 + cv_over_R * dT / std::log(ratio));
}

double stirling_matching_cv(double efficiency, double T1, double T2, double lambda1, double lambda2) {
  const double ratio = lambda2 / lambda1;
  if (!(ratio > 0) || ratio == 1.0 || !std::isfinite(ratio)) {
    throw Error(ErrorCode::InvalidRatio, "lambda2/lambda1 = " + std::to_string(ratio));
  }
  if (efficiency == 0.0 || T2 == T1) {
    throw Error(ErrorCode::InvalidArgument, "matching c_v needs a non-zero efficiency and T2 != T1");
  }
  const double dT = T2 - T1;
  return (dT / efficiency - T2) * std::log(ratio) / dT;
}

double entropy_at_time(double T, double t, const ModelParams& p, const TimeDependence& td) {
  return entropy({split_at_time(t, p, td), T});
}

std::vector<double> time_isentrope_roots(double S_level, double T, const ModelParams& p,
                                         const TimeDependence& td, Interval t_bracket,
                                         const NumericsConfig& cfg) {
  auto g = [&](double t) { return entropy_at_time(T, t, p, td) - S_level; };
  return find_all_roots(g, t_bracket.lo, t_bracket.hi, cfg.scan_grid, cfg);
}

double time_isentrope_solve(double S_level, double T, const ModelParams& p, const TimeDependence& td,
                            Interval t_bracket, const NumericsConfig& cfg) {
  const auto roots = time_isentrope_roots(S_level, T, p, td, t_bracket, cfg);
  if (roots.empty()) {
    throw Error(ErrorCode::NoRootInBracket, "S(T=" + std::to_string(T) + ", t) never reaches " +
                                                std::to_string(S_level) + " in the bracket");
  }
  return roots.front();
}

}  // namespace ptcycle
