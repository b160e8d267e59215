#include "ptcycle/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "ptcycle/error.hpp"

namespace ptcycle {

using nlohmann::json;

void RunConfig::validate() const {
  model.validate();
  numerics.validate();
  if (time && (time->c1 == 0.0 || !std::isfinite(time->c1))) {
    throw Error(ErrorCode::InvalidArgument, "time.c1 must be finite and non-zero");
  }
  if (output.precision < 6 || output.precision > 17) {
    throw Error(ErrorCode::InvalidArgument, "precision must be in [6, 17]");
  }
}

RunConfig parse_run_config(const json& doc, RunConfig base) {
  try {
    if (const auto it = doc.find("model"); it != doc.end()) {
      base.model.N = it->value("N", base.model.N);
      base.model.nu = it->value("nu", base.model.nu);
      base.model.lambda = it->value("lambda", base.model.lambda);
    }
    if (const auto it = doc.find("time"); it != doc.end() && !it->is_null()) {
      TimeDependence td = base.time.value_or(TimeDependence{});
      td.c1 = it->value("c1", td.c1);
      td.c2 = it->value("c2", td.c2);
      if (it->contains("phase")) {
        const auto name = (*it)["phase"].get<std::string>();
        if (name == "lambda") td.phase = PhaseConvention::LambdaScaled;
        else if (name == "sqrt") td.phase = PhaseConvention::SqrtScaled;
        else throw Error(ErrorCode::InvalidArgument, "time.phase must be 'lambda' or 'sqrt'");
      }
      base.time = td;
    }
    if (const auto it = doc.find("numerics"); it != doc.end()) {
      auto& n = base.numerics;
      n.root_tol = it->value("root_tol", n.root_tol);
      n.quad_tol = it->value("quad_tol", n.quad_tol);
      n.fd_step_scale = it->value("fd_step_scale", n.fd_step_scale);
      n.scan_grid = it->value("scan_grid", n.scan_grid);
      n.max_iters = it->value("max_iters", n.max_iters);
    }
    if (const auto it = doc.find("output"); it != doc.end()) {
      auto& o = base.output;
      if (it->contains("format")) {
        const auto f = (*it)["format"].get<std::string>();
        if (f == "csv") o.format = OutputFormat::Csv;
        else if (f == "json") o.format = OutputFormat::Json;
        else throw Error(ErrorCode::InvalidArgument, "output.format must be csv or json");
      }
      o.path = it->value("path", o.path);
      o.precision = it->value("precision", o.precision);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  return base;
}

std::string format_number(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, value);
  return buf;
}

double round_significant(double value, int precision) {
  return std::strtod(format_number(value, precision).c_str(), nullptr);
}

void write_thermo_csv(std::ostream& os, const std::vector<ThermoPoint>& rows, int precision) {
  os << "T,Z,F,U,S,p\n";
  for (const auto& r : rows) {
    os << format_number(r.T, precision) << ',' << format_number(r.Z, precision) << ','
       << format_number(r.F, precision) << ',' << format_number(r.U, precision) << ','
       << format_number(r.S, precision) << ',' << (r.p ? format_number(*r.p, precision) : "") << '\n';
  }
}

void write_contour_csv(std::ostream& os, const Contour& contour, int precision) {
  os << "polyline_id,x,y\n";
  for (std::size_t id = 0; id < contour.polylines.size(); ++id) {
    for (const auto& [x, y] : contour.polylines[id]) {
      os << id << ',' << format_number(x, precision) << ',' << format_number(y, precision) << '\n';
    }
  }
}

void write_path_csv(std::ostream& os, const IsentropePath& path, int precision) {
  os << "T," << (path.varied == VariedParameter::Nu ? "nu" : "lambda") << '\n';
  for (const auto& [T, v] : path.samples) {
    os << format_number(T, precision) << ',' << format_number(v, precision) << '\n';
  }
}

json to_json(const CycleReport& r, int precision) {
  auto num = [precision](double v) { return round_significant(v, precision); };
  json points = json::array();
  for (const auto& p : r.points) {
    points.push_back({{"label", p.label}, {"T", num(p.T)}, {"lambda", num(p.lambda)}, {"nu", num(p.nu)},
                      {"S", num(p.S)}, {"U", num(p.U)}});
  }
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"from", s.from}, {"to", s.to}, {"kind", std::string(to_string(s.kind))},
                     {"dQ", num(s.dQ)}, {"dW", num(s.dW)}, {"dU", num(s.dU)}});
  }
  return {{"kind", std::string(to_string(r.kind))},
          {"path", std::string(to_string(r.path_label))},
          {"points", points},
          {"steps", steps},
          {"totals", {{"heat", num(r.loop_Q)}, {"work", num(r.loop_W)}, {"energy", num(r.loop_U)},
                      {"heat_in", num(r.heat_in)}}},
          {"efficiency", num(r.efficiency)}};
}

json to_json(const PhaseRegions& r, int precision) {
  auto num = [precision](double v) { return round_significant(v, precision); };
  json zeros = json::array();
  for (double z : r.zeros) zeros.push_back(num(z));
  return {{"T", num(r.T)},
          {"branch", r.branch},
          {"zeros", zeros},
          {"binodal", {num(r.binodal.lo), num(r.binodal.hi)}},
          {"spinodal", {num(r.spinodal.lo), num(r.spinodal.hi)}},
          {"maxwell_pressure", num(r.maxwell_pressure)},
          {"F_het", num(r.free_energy_het)}};
}

json to_json(const IsentropePath& path, int precision) {
  json samples = json::array();
  for (const auto& [T, v] : path.samples) {
    samples.push_back({round_significant(T, precision), round_significant(v, precision)});
  }
  return {{"varied", path.varied == VariedParameter::Nu ? "nu" : "lambda"},
          {"S_level", round_significant(path.S_level, precision)},
          {"samples", samples}};
}

std::string_view to_string(ContourPlane plane) {
  switch (plane) {
    case ContourPlane::LambdaT: return "LambdaT";
    case ContourPlane::NuT: return "NuT";
    case ContourPlane::TimeT: return "TimeT";
  }
  return "Unknown";
}

ContourPlane parse_plane(const std::string& name) {
  if (name == "LambdaT" || name == "lambda") return ContourPlane::LambdaT;
  if (name == "NuT" || name == "nu") return ContourPlane::NuT;
  if (name == "TimeT" || name == "time") return ContourPlane::TimeT;
  throw Error(ErrorCode::InvalidArgument, "unknown plane '" + name + "'");
}

CycleKind parse_cycle_kind(const std::string& name) {
  if (name == "TLambda" || name == "tlambda") return CycleKind::TLambda;
  if (name == "CarnotBroken" || name == "carnot") return CycleKind::CarnotBroken;
  if (name == "CarnotSymmetric" || name == "carnot-symmetric") return CycleKind::CarnotSymmetric;
  throw Error(ErrorCode::InvalidArgument, "unknown cycle kind '" + name + "'");
}

}  // namespace ptcycle
