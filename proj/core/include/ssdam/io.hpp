#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssdam/drivers.hpp"
#include "ssdam/material.hpp"

namespace ssdam {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& name);

/// Parsed run configuration: material constants plus the raw command blocks.
struct RunConfig {
  MaterialParams material;
  nlohmann::json path;   ///< simulate block (may be null)
  nlohmann::json sweep;  ///< yield-surface / locus block (may be null)
  nlohmann::json fit;    ///< calibrate block (may be null)
  std::string output;    ///< default output path ("" = stdout)
  OutputFormat format = OutputFormat::Csv;
  std::vector<std::string> notices;  ///< missing-key fallback messages
};

/// Loads a JSON config file. Unknown keys are rejected; missing material
/// keys fall back to the calibrated defaults with a notice.
RunConfig load_config(const std::string& file);
RunConfig config_from_json(const nlohmann::json& j);

MaterialParams material_from_json(const nlohmann::json& j,
                                  std::vector<std::string>& notices);

/// 17-significant-digit decimal rendering; round-trips a double exactly.
std::string format_g17(double v);

/// The reproducibility comment line echoing the full parameter set.
std::string param_echo(const MaterialParams& p);

PathSpec path_from_json(const nlohmann::json& j);

void write_records_csv(std::ostream& os, const std::vector<SimRecord>& records,
                       const MaterialParams& p,
                       const std::string& truncation_note = "");
void write_records_json(std::ostream& os, const std::vector<SimRecord>& records,
                        const MaterialParams& p,
                        const std::string& truncation_note = "");
std::vector<SimRecord> records_from_csv(std::istream& is);

void write_yield_surface_csv(std::ostream& os,
                             const std::vector<YieldSurfacePoint>& points,
                             const MaterialParams& p);
void write_yield_surface_json(std::ostream& os,
                              const std::vector<YieldSurfacePoint>& points,
                              const MaterialParams& p);

void write_locus_csv(std::ostream& os, const LocusTable& table,
                     const MaterialParams& p);
void write_locus_json(std::ostream& os, const LocusTable& table,
                      const MaterialParams& p);

/// One CSV row of stress-state descriptors for `invariants`.
std::string stress_state_row(const SymTensor& sigma, bool with_header);

}  // namespace ssdam
