#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cherry/classify.hpp"
#include "cherry/dimension.hpp"
#include "cherry/ratios.hpp"

namespace cherry {

/// Writes via a temp file in the same directory plus rename, so readers
/// never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Map descriptor: {"ell1","ell2","u_left","u_length","c","precision_bits",
/// "rho_target","tuned_depth"}; all reals as decimal strings.
std::string map_to_json(const FlatCircleMap& m);
/// Reads a descriptor; `override_precision` reparses the same decimals at a
/// different working precision (used by precision escalation).
FlatCircleMap map_from_json(const std::string& json_text,
                            std::optional<long> override_precision = std::nullopt);

std::string ratios_to_csv(const RatioSeries& s);
/// Per-level partition export: kind in {marked,long,short}, index, left, length.
std::string partition_to_csv(const DynamicalPartition& p);
std::string checks_to_json(const std::vector<CheckRecord>& records, long hard_failures,
                           long precision_bits, long tuned_depth);
std::string verdict_to_json(const GeometryVerdict& v);
std::string curve_to_csv(const std::vector<CurvePoint>& pts);
std::string dimension_to_csv(const DimensionEstimate& est);
std::string dimension_to_json(const DimensionEstimate& est, long precision_bits,
                              long tuned_depth);
std::string dichotomy_to_json(const DichotomyReport& rep);

struct RunManifest {
  std::string tool_version;
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  long precision_bits = 0;
  std::string precision_audit;
  double wall_time_ms = 0;
  long checks_pass = 0;
  long checks_fail = 0;
};

std::string manifest_to_json(const RunManifest& m);

}  // namespace cherry
