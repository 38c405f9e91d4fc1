#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coil/datagen.hpp"
#include "coil/domain.hpp"
#include "coil/evaluator.hpp"
#include "coil/ga.hpp"
#include "coil/io.hpp"
#include "coil/records.hpp"
#include "coil/stats.hpp"
#include "coil/vae.hpp"

namespace coil {

enum class Profile { kDesk, kPaper };
Profile profile_from_string(std::string_view s);
std::string to_string(Profile p);

/// One point of a parameter sweep.
struct Setting {
  std::string label;
  ProblemConfig problem;
  std::size_t ds = 1000;
  int maxlv = 30;  // latent width is 2 * maxlv

  friend bool operator==(const Setting&, const Setting&) = default;
};

struct ExperimentSpec {
  std::string id = "custom";  // E1.1 .. E2.2 or custom
  std::vector<Setting> settings;
  int runs_per_setting = 20;
  bool run_baseline = true;
  bool run_coil = true;
  GaConfig ga;
  DatagenConfig datagen;
  TrainConfig train;
  int hidden_dim = 128;
  ConstraintMeasure measure = ConstraintMeasure::kViolatingSlots;
  /// Worker threads for runs, mining and training. Results do not depend on it.
  int threads = 1;
  /// Where per-setting datasets and models are cached; empty keeps them in
  /// memory only.
  std::filesystem::path artifact_dir;
  /// When false, missing artifacts are an error instead of being built.
  bool build_artifacts = true;

  /// Throws InvalidConfigError (off-grid sweep values for named experiments).
  void validate() const;
};

/// The named experiment at desk or paper scale. Desk: 20 runs per setting,
/// ds = 1000 (E2.1 sizes scaled by 1/10), 3 VAE restarts. Paper: 100 runs,
/// ds = 10000, 10 restarts. GA settings are 20 x 50 in both.
ExperimentSpec make_experiment(std::string_view id, Profile profile);

/// Lossless key/value echo of a spec, stored in manifests.
std::map<std::string, std::string> spec_to_config(const ExperimentSpec& spec);
ExperimentSpec spec_from_config(const std::map<std::string, std::string>& config);

struct BuildStats {
  std::string setting;
  std::size_t ds = 0;
  int latent_dim = 0;
  double datagen_wall_s = 0.0;
  int datagen_restarts = 0;
  double train_wall_s = 0.0;
  int train_restarts = 0;
  double vae_final_loss = 0.0;
};

/// A setting's COIL artifacts.
struct SettingArtifacts {
  Dataset dataset;
  VaeModel model;
  BuildStats stats;
};

struct SummaryRow {
  std::string experiment;
  std::string setting;
  Algorithm algorithm = Algorithm::kBaseline;
  stats::Summary objective;
  stats::Summary constraint;  // post-schedule violating slots
  int valid_runs = 0;
  double avg_utilization = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::vector<std::vector<TracePoint>> traces;  // parallel to records
  std::vector<SummaryRow> summary;
  std::vector<BuildStats> build_stats;
};

/// Seed of run `run` in setting `setting_index` under master stream `master`.
std::uint64_t run_seed(const Rng& master, std::size_t setting_index, int run);

/// Mines the dataset and trains the VAE for one setting, or loads them from
/// spec.artifact_dir when present there.
SettingArtifacts prepare_artifacts(const ExperimentSpec& spec, std::size_t setting_index,
                                   const Rng& master);

/// One algorithm on one fresh request set, reproducible from `seed` alone.
RunRecord execute_run(const ExperimentSpec& spec, const Setting& setting, Algorithm algorithm,
                      int run, std::uint64_t seed, const VaeModel* model,
                      std::vector<TracePoint>* trace = nullptr);

/// Every setting x run x algorithm. COIL settings build (or load) their
/// artifacts first; the same model serves every run of the setting.
ExperimentResult run_experiment(const ExperimentSpec& spec, Rng& master);

std::vector<SummaryRow> summarize_records(const std::vector<RunRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(std::string_view text);
/// Human-readable table: avg objective (stdv), min, max, avg constraint ...
std::string format_summary_table(const std::vector<SummaryRow>& rows);

/// Best-of-run (objective, constraint) points; constraint 0 flagged valid.
std::string fig6_scatter(const std::vector<RunRecord>& records);

struct TimingRow {
  std::string setting;
  std::size_t ds = 0;
  int latent_dim = 0;
  double datagen_hours = 0.0;
  double vae_train_minutes = 0.0;
  double vae_minutes_per_restart = 0.0;
  double vae_final_loss = 0.0;
  double baseline_minutes_per_100_runs = 0.0;
  double coil_minutes_per_100_runs = 0.0;
};

std::vector<TimingRow> timing_report(const std::vector<RunRecord>& records,
                                     const std::vector<BuildStats>& build_stats);
std::string timing_csv(const std::vector<TimingRow>& rows);

std::string build_stats_csv(const std::vector<BuildStats>& stats);
std::vector<BuildStats> parse_build_stats_csv(std::string_view text);

/// Writes records, summary, scatter, timing, traces and a manifest (with
/// every file hashed) under `dir`.
void write_run_directory(const std::filesystem::path& dir, const ExperimentSpec& spec,
                         std::uint64_t seed, const ExperimentResult& result);

}  // namespace coil
