// ptcycle: thermodynamic sweeps, cycles, contours and phase analysis.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ptcycle/cycles.hpp"
#include "ptcycle/error.hpp"
#include "ptcycle/io.hpp"
#include "ptcycle/phase.hpp"
#include "ptcycle/thermo.hpp"
#include "ptcycle/verify.hpp"

using namespace ptcycle;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitMismatch = 4;

struct Flags {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> precision;
  std::optional<int> N;
  std::optional<double> nu;
  std::optional<double> lambda;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<std::string> phase_convention;

  double tmin = 0.5;
  double tmax = 10.0;
  int steps = 100;
  std::optional<double> time;

  std::string kind = "tlambda";
  std::optional<double> lambda2;
  std::optional<double> target_S2;
  double s1 = 4.7726;
  double s2 = 6.0;

  std::optional<double> level;
  std::string plane = "LambdaT";
  std::optional<double> xmin;
  std::optional<double> xmax;
  int nx = 200;
  int ny = 100;

  double T = 5.0;
  int branch = 1;

  std::optional<double> start;

  std::string perturb_check;
  double perturb_amount = 0.0;
};

RunConfig load_config(const Flags& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config '" + f.config_path + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
    }
    cfg = parse_run_config(doc, cfg);
  }
  if (f.N) cfg.model.N = *f.N;
  if (f.nu) cfg.model.nu = *f.nu;
  if (f.lambda) cfg.model.lambda = *f.lambda;
  if (f.c1 || f.c2 || f.phase_convention) {
    TimeDependence td = cfg.time.value_or(TimeDependence{});
    if (f.c1) td.c1 = *f.c1;
    if (f.c2) td.c2 = *f.c2;
    if (f.phase_convention) {
      if (*f.phase_convention == "lambda") td.phase = PhaseConvention::LambdaScaled;
      else if (*f.phase_convention == "sqrt") td.phase = PhaseConvention::SqrtScaled;
      else throw Error(ErrorCode::InvalidArgument, "--phase must be lambda or sqrt");
    }
    cfg.time = td;
  }
  if (f.out) cfg.output.path = *f.out;
  if (f.format) {
    if (*f.format == "csv") cfg.output.format = OutputFormat::Csv;
    else if (*f.format == "json") cfg.output.format = OutputFormat::Json;
    else throw Error(ErrorCode::InvalidArgument, "--format must be csv or json");
  }
  if (f.precision) cfg.output.precision = *f.precision;
  cfg.validate();
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& body) {
  if (cfg.output.path.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.output.path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + cfg.output.path + "'");
  out << body;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::vector<double> grid(double lo, double hi, int steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "--steps must be at least 1");
  std::vector<double> xs(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) xs[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  return xs;
}

int cmd_thermo(const Flags& f) {
  const RunConfig cfg = load_config(f);
  if (!(f.tmin > 0) || f.tmax < f.tmin) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < tmin <= tmax");
  }
  if (f.time && !cfg.time) throw Error(ErrorCode::InvalidArgument, "--t needs time parameters (--c1)");
  const auto Ts = grid(f.tmin, f.tmax, f.steps);
  std::vector<ThermoPoint> rows(Ts.size());
  parallel_for(Ts.size(), default_workers(), [&](std::size_t i) {
    try {
      if (f.time) {
        rows[i] = evaluate(EvalDomain{split_at_time(*f.time, cfg.model, *cfg.time), Ts[i]});
      } else {
        rows[i] = evaluate(Ts[i], cfg.model);
      }
    } catch (const Error& e) {
      throw Error(e.code(), "at T=" + format_number(Ts[i], 9) + ": " + e.detail());
    }
  });
  std::ostringstream os;
  if (cfg.output.format == OutputFormat::Csv) {
    write_thermo_csv(os, rows, cfg.output.precision);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    const int p = cfg.output.precision;
    for (const auto& r : rows) {
      nlohmann::json row = {{"T", round_significant(r.T, p)}, {"Z", round_significant(r.Z, p)},
                            {"F", round_significant(r.F, p)}, {"U", round_significant(r.U, p)},
                            {"S", round_significant(r.S, p)}};
      row["p"] = r.p ? nlohmann::json(round_significant(*r.p, p)) : nlohmann::json(nullptr);
      arr.push_back(row);
    }
    os << dump(arr);
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_cycle(const Flags& f, bool tmin_set, bool tmax_set) {
  const CycleKind kind = parse_cycle_kind(f.kind);
  Flags g = f;
  // Reference corners when the temperatures are not given.
  if (kind == CycleKind::CarnotSymmetric) {
    if (!g.N) g.N = 120;
    if (!g.nu) g.nu = 25.0;
    if (!tmin_set) g.tmin = 35.5489;
    if (!tmax_set) g.tmax = 88.4576;
  } else {
    if (!tmin_set) g.tmin = 5.53240;
    if (!tmax_set) g.tmax = 5.91528;
    if (!g.target_S2 && !g.lambda2) g.target_S2 = 3.16977;
  }
  const RunConfig cfg = load_config(g);
  CycleSpec spec;
  spec.N = cfg.model.N;
  spec.nu = cfg.model.nu;
  spec.T1 = g.tmin;
  spec.T2 = g.tmax;
  spec.lambda1 = cfg.model.lambda;
  spec.lambda2 = g.lambda2;
  spec.target_S2 = g.target_S2;
  if (spec.lambda1 >= 0) spec.lambda2_bracket = lambda_window(spec.nu, spec.N, 0.0);
  spec.S1 = g.s1;
  spec.S2 = g.s2;
  spec.numerics = cfg.numerics;
  const CycleReport report = build_cycle(kind, spec);
  const int p = cfg.output.precision;
  std::ostringstream os;
  if (cfg.output.format == OutputFormat::Json || !f.format) {
    os << dump(to_json(report, p));
  } else {
    os << "from,to,kind,dQ,dW,dU\n";
    for (const auto& s : report.steps) {
      os << s.from << ',' << s.to << ',' << to_string(s.kind) << ',' << format_number(s.dQ, p) << ','
         << format_number(s.dW, p) << ',' << format_number(s.dU, p) << '\n';
    }
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_contour(const Flags& f, bool tmin_set, bool tmax_set) {
  const RunConfig cfg = load_config(f);
  if (!f.level) throw Error(ErrorCode::InvalidArgument, "--level is required");
  const ContourPlane plane = parse_plane(f.plane);
  Window w;
  w.y = {tmin_set ? f.tmin : 5.0, tmax_set ? f.tmax : 6.5};
  PlaneFn fn;
  const ModelParams m = cfg.model;
  switch (plane) {
    case ContourPlane::LambdaT:
      w.x = {f.xmin.value_or(-60.0), f.xmax.value_or(lambda_window(m.nu, m.N, 0.0).hi)};
      fn = [m](double lambda, double T) { return entropy_at(T, ModelParams{m.N, m.nu, lambda}); };
      break;
    case ContourPlane::NuT:
      w.x = {f.xmin.value_or(1.0), f.xmax.value_or(40.0)};
      fn = [m](double nu, double T) { return entropy_at(T, ModelParams{m.N, nu, m.lambda}); };
      break;
    case ContourPlane::TimeT: {
      if (!cfg.time) throw Error(ErrorCode::InvalidArgument, "TimeT plane needs time parameters (--c1)");
      w.x = {f.xmin.value_or(0.0022), f.xmax.value_or(0.0024)};
      const TimeDependence td = *cfg.time;
      fn = [m, td](double t, double T) { return entropy_at_time(T, t, m, td); };
      break;
    }
  }
  if (!(w.x.hi > w.x.lo) || !(w.y.hi > w.y.lo)) throw Error(ErrorCode::InvalidArgument, "empty window");
  const Contour c = trace_level_set(fn, *f.level, w, {f.nx, f.ny}, ScanAxis::AlongX, cfg.numerics,
                                    default_workers());
  if (c.empty()) {
    std::fprintf(stderr, "warning: contour S = %s is empty in the window\n",
                 format_number(*f.level, cfg.output.precision).c_str());
    emit(cfg, "");
    return 0;
  }
  std::ostringstream os;
  write_contour_csv(os, c, cfg.output.precision);
  emit(cfg, os.str());
  return 0;
}

int cmd_phase(const Flags& f) {
  const RunConfig cfg = load_config(f);
  if (!(f.T > 0)) throw Error(ErrorCode::InvalidArgument, "--T must be positive");
  if (f.format && cfg.output.format != OutputFormat::Json) {
    throw Error(ErrorCode::InvalidArgument, "phase output is JSON only");
  }
  const PhaseRegions r = analyze_phase(f.T, cfg.model.nu, cfg.model.N, f.branch, cfg.numerics);
  emit(cfg, dump(to_json(r, cfg.output.precision)));
  return 0;
}

int cmd_isentrope(const Flags& f) {
  const RunConfig cfg = load_config(f);
  if (!f.level) throw Error(ErrorCode::InvalidArgument, "--level is required");
  const ContourPlane plane = parse_plane(f.plane);
  IsentropePath path;
  const ModelParams& m = cfg.model;
  if (plane == ContourPlane::NuT) {
    path = trace_isentrope_nu(*f.level, m.lambda, m.N, f.tmin, f.tmax, f.steps,
                              f.start.value_or(m.nu), cfg.numerics);
  } else if (plane == ContourPlane::LambdaT) {
    const Interval window{f.xmin.value_or(0.0), f.xmax.value_or(lambda_window(m.nu, m.N, 0.0).hi)};
    path = trace_isentrope_lambda(*f.level, m.nu, m.N, f.tmin, f.tmax, f.steps, window, cfg.numerics);
  } else {
    throw Error(ErrorCode::InvalidArgument, "isentrope plane must be nu or lambda");
  }
  std::ostringstream os;
  if (cfg.output.format == OutputFormat::Json) os << dump(to_json(path, cfg.output.precision));
  else write_path_csv(os, path, cfg.output.precision);
  emit(cfg, os.str());
  return 0;
}

int cmd_verify(const Flags& f) {
  VerifyOptions opt;
  opt.perturb_check = f.perturb_check;
  opt.perturb_amount = f.perturb_amount;
  const VerificationReport report = run_verification(opt);
  print_report(std::cout, report);
  return report.all_pass() ? 0 : kExitMismatch;
}

void add_model(CLI::App* cmd, Flags& f) {
  cmd->add_option("--N", f.N, "number of particles");
  cmd->add_option("--nu", f.nu, "oscillator frequency");
  cmd->add_option("--lambda", f.lambda, "non-Hermitian coupling");
}

void add_time(CLI::App* cmd, Flags& f) {
  cmd->add_option("--c1", f.c1, "time-dependence amplitude");
  cmd->add_option("--c2", f.c2, "time offset");
  cmd->add_option("--phase", f.phase_convention, "phase convention: lambda or sqrt");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamics and heat engines of the PT-symmetric oscillator ensemble"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", f.out, "output file (default stdout)");
  app.add_option("--format", f.format, "csv or json");
  app.add_option("--precision", f.precision, "significant digits");
  app.fallthrough();

  auto* thermo = app.add_subcommand("thermo", "Z, F, U, S, p on a temperature grid");
  add_model(thermo, f);
  add_time(thermo, f);
  thermo->add_option("--tmin", f.tmin);
  thermo->add_option("--tmax", f.tmax);
  thermo->add_option("--steps", f.steps, "number of grid points");
  thermo->add_option("--t", f.time, "evaluate after time evolution to t");

  auto* cycle = app.add_subcommand("cycle", "build a four-step cycle");
  add_model(cycle, f);
  cycle->add_option("--kind", f.kind, "tlambda, carnot or carnot-symmetric");
  auto* cycle_tmin = cycle->add_option("--tmin", f.tmin, "cold temperature T1");
  auto* cycle_tmax = cycle->add_option("--tmax", f.tmax, "hot temperature T2");
  cycle->add_option("--lambda2", f.lambda2, "second coupling (derived when absent)");
  cycle->add_option("--target-s", f.target_S2, "entropy used to pick lambda2");
  cycle->add_option("--s1", f.s1, "lower entropy (symmetric cycle)");
  cycle->add_option("--s2", f.s2, "upper entropy (symmetric cycle)");

  auto* contour = app.add_subcommand("contour", "entropy level set in a parameter plane");
  add_model(contour, f);
  add_time(contour, f);
  contour->add_option("--level", f.level, "entropy level");
  contour->add_option("--plane", f.plane, "LambdaT, NuT or TimeT");
  auto* contour_tmin = contour->add_option("--tmin", f.tmin);
  auto* contour_tmax = contour->add_option("--tmax", f.tmax);
  contour->add_option("--xmin", f.xmin);
  contour->add_option("--xmax", f.xmax);
  contour->add_option("--nx", f.nx);
  contour->add_option("--ny", f.ny);

  auto* phase = app.add_subcommand("phase", "Maxwell construction on one isotherm");
  add_model(phase, f);
  phase->add_option("--T", f.T, "temperature");
  phase->add_option("--branch", f.branch, "pressure-zero branch n");

  auto* isentrope = app.add_subcommand("isentrope", "trace S = level over a temperature range");
  add_model(isentrope, f);
  isentrope->add_option("--level", f.level, "entropy level");
  isentrope->add_option("--plane", f.plane, "nu or lambda (the varied parameter)");
  isentrope->add_option("--tmin", f.tmin);
  isentrope->add_option("--tmax", f.tmax);
  isentrope->add_option("--steps", f.steps);
  isentrope->add_option("--start", f.start, "continuation start for nu");
  isentrope->add_option("--xmin", f.xmin, "lambda window lower end");
  isentrope->add_option("--xmax", f.xmax, "lambda window upper end");

  auto* verify = app.add_subcommand("verify", "run the reproduction checks");
  verify->add_option("--perturb", f.perturb_check)->group("");
  verify->add_option("--perturb-amount", f.perturb_amount)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (thermo->parsed()) return cmd_thermo(f);
    if (cycle->parsed()) return cmd_cycle(f, cycle_tmin->count() > 0, cycle_tmax->count() > 0);
    if (contour->parsed()) return cmd_contour(f, contour_tmin->count() > 0, contour_tmax->count() > 0);
    if (phase->parsed()) return cmd_phase(f);
    if (isentrope->parsed()) return cmd_isentrope(f);
    if (verify->parsed()) return cmd_verify(f);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kExitConfig : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "EvaluationFailed: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
