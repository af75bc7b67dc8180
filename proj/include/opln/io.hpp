#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "opln/designer.hpp"

namespace opln {

/// Columnar CSV with one header line; numeric payload written as %.17g so
/// files round-trip losslessly through read_csv.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Poling profile <-> CSV (`period_index, z_start_um, duty_cycle`).
void write_profile_csv(const std::filesystem::path& path, const PolingProfile& profile);
PolingProfile read_profile_csv(const std::filesystem::path& path);

/// Cost history CSV (`iteration, best_cost`).
void write_cost_history_csv(const std::filesystem::path& path,
                            const std::vector<double>& history);

/// Temperature sweep CSV (`temperature_c, pump_um, signal_um, idler_um, period_um`).
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<PhaseMatchPoint>& points);

/// JSA exports: |f|^2 matrix CSV, two sidecar axis files, and a combined
/// JSON with real/imaginary parts.
void export_jsa(const std::filesystem::path& stem, const JsaGrid& grid);
void write_projection_csv(const std::filesystem::path& path,
                          const std::vector<double>& axis,
                          const std::vector<double>& value);

/// Frozen design artifact (pump + profile + provenance) as JSON.
void write_design_json(const std::filesystem::path& path, const DesignResult& result);
struct StoredDesign {
  PumpSpec pump;
  PolingProfile profile{1.0, 10.0, std::vector<double>(100, 0.5)};
  double purity = 0.0;
  PhaseMatchPoint design_point;
};
StoredDesign read_design_json(const std::filesystem::path& path);

/// Design job config (strict JSON: unknown keys are errors).
DesignProblem read_design_config(const std::filesystem::path& path);
void write_design_config(const std::filesystem::path& path, const DesignProblem& p);

}  // namespace opln
