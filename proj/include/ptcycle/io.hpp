#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptcycle/cycles.hpp"
#include "ptcycle/numerics.hpp"
#include "ptcycle/phase.hpp"
#include "ptcycle/spectrum.hpp"
#include "ptcycle/thermo.hpp"

namespace ptcycle {

enum class OutputFormat { Csv, Json };

struct OutputConfig {
  OutputFormat format = OutputFormat::Csv;
  std::string path;  // empty -> stdout
  int precision = 9;
};

struct RunConfig {
  ModelParams model{160, 12.0, -24.0};
  std::optional<TimeDependence> time;
  NumericsConfig numerics;
  OutputConfig output;

  void validate() const;
};

// Reads a JSON document mirroring RunConfig; absent fields keep defaults.
RunConfig parse_run_config(const nlohmann::json& doc, RunConfig base = {});

// "%.*g" with the given number of significant digits.
std::string format_number(double value, int precision);

// Value that prints identically to format_number(value, precision).
double round_significant(double value, int precision);

void write_thermo_csv(std::ostream& os, const std::vector<ThermoPoint>& rows, int precision);
void write_contour_csv(std::ostream& os, const Contour& contour, int precision);
void write_path_csv(std::ostream& os, const IsentropePath& path, int precision);

nlohmann::json to_json(const CycleReport& report, int precision);
nlohmann::json to_json(const PhaseRegions& regions, int precision);
nlohmann::json to_json(const IsentropePath& path, int precision);

std::string_view to_string(ContourPlane plane);
ContourPlane parse_plane(const std::string& name);
CycleKind parse_cycle_kind(const std::string& name);

}  // namespace ptcycle
