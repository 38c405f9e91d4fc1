#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coil/datagen.hpp"
#include "coil/domain.hpp"
#include "coil/evaluator.hpp"
#include "coil/ga.hpp"
#include "coil/records.hpp"
#include "coil/scheduler.hpp"
#include "coil/vae.hpp"

/// Text readers and writers for every artifact. All files are LF-terminated
/// text; reals are written in shortest round-trip form so load(save(v)) == v.
namespace coil::io {

namespace fs = std::filesystem;

std::string format_real(double v);
double parse_real(std::string_view s);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const fs::path& path);

std::string read_file(const fs::path& path);
/// Writes via a temporary file and rename so readers never see a partial file.
void write_file(const fs::path& path, std::string_view contents);

// Request sets: header `duration_min`.
void save_requests(const fs::path& path, const RequestSet& requests);
RequestSet load_requests(const fs::path& path);

// Schedules: header `robot,start_slot,run_slots`.
void save_schedule(const fs::path& path, const FleetSchedule& schedule);
FleetSchedule load_schedule(const fs::path& path);

// Allocation: header `request,assigned_robot,duration_min`, -1 for unmet.
std::string allocation_csv(const RequestSet& requests, const AllocationResult& result);

// Evaluations: header `run,objective,violating_slots,peak_excess,mode`.
struct EvaluationRow {
  int run = 0;
  Evaluation evaluation;
};
std::string evaluations_csv(const std::vector<EvaluationRow>& rows);
std::vector<EvaluationRow> parse_evaluations_csv(std::string_view text);

// GA trace: header `generation,best_objective,best_constraint,utilization`.
std::string trace_csv(const std::vector<TracePoint>& trace);
std::vector<TracePoint> parse_trace_csv(std::string_view text);

/// Dataset: CSV with header g0..g{n-1}, plus `<path>.meta` key=value
/// sidecar carrying the CSV's sha256. Loading verifies the hash.
void save_dataset(const fs::path& path, const Dataset& dataset);
Dataset load_dataset(const fs::path& path);

/// VAE model text format; see README for the byte layout.
std::string model_text(const VaeModel& model);
VaeModel parse_model(std::string_view text);
void save_model(const fs::path& path, const VaeModel& model);
VaeModel load_model(const fs::path& path);

// Run records: header
// `experiment,setting,algorithm,run,seed,objective,violating_slots,peak_excess,utilization,wall_time_s`.
std::string run_records_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_run_records_csv(std::string_view text);

struct ArtifactEntry {
  std::string name;
  std::string path;  // relative to the manifest's directory
  std::string sha256;
};

/// Flat key=value run-directory manifest.
struct Manifest {
  std::string tool_version;
  std::string command;
  std::uint64_t seed = 0;
  std::string created_utc;
  std::map<std::string, std::string> config;  // spec echo
  std::vector<ArtifactEntry> artifacts;

  /// Hashes `path` (relative to base_dir) and records it.
  void add_artifact(const fs::path& base_dir, const std::string& name, const std::string& path);
  const ArtifactEntry* find(const std::string& name) const;
};

std::string manifest_text(const Manifest& manifest);
Manifest parse_manifest(std::string_view text);
void save_manifest(const fs::path& path, const Manifest& manifest);
/// Loads and verifies every artifact hash against files next to the manifest.
Manifest load_manifest(const fs::path& path);
void verify_manifest(const Manifest& manifest, const fs::path& base_dir);

std::string utc_timestamp();

}  // namespace coil::io
