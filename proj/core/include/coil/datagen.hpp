#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coil/domain.hpp"
#include "coil/errors.hpp"
#include "coil/ga.hpp"

namespace coil {

struct DatagenConfig {
  int population_size = 200;
  int generations = 200;
  /// GA restarts allowed before giving up with PartialDatasetError.
  int max_restarts = 1'000'000;
  /// Restarts run concurrently in batches of this size; results do not
  /// depend on it.
  int threads = 1;
  double crossover_prob = 0.7;
  double mutation_prob_per_gene = -1.0;
  double creep_sigma = 5.0;
};

struct DatasetMeta {
  int rb = 0;
  int rt = 0;
  std::uint64_t seed = 0;
  int restarts = 0;          // GA runs performed
  long evaluations = 0;      // fitness calls across all runs
  double wall_time_s = 0.0;  // mining wall time

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

/// Constraint-valid schedules, each normalized to [0, 1]^(2 rb) as
/// gene / 66 in [st1, rt1, st2, rt2, ...] order.
struct Dataset {
  std::vector<std::vector<double>> rows;
  DatasetMeta meta;

  std::size_t size() const noexcept { return rows.size(); }
  std::size_t dim() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
};

class PartialDatasetError : public Error {
 public:
  PartialDatasetError(const std::string& what, Dataset partial)
      : Error(what), partial_(std::move(partial)) {}
  const Dataset& partial() const noexcept { return partial_; }

 private:
  Dataset partial_;
};

/// Violating slots of the corrected schedule plus 100 / max(1, sum of
/// run-time genes). Minimized; the second term rewards long shifts.
double datagen_fitness(std::span<const double> genome, int rt);

std::vector<double> normalize_schedule(const FleetSchedule& schedule);
/// round(row * 66), clamped to [0, 66]. Not corrected.
FleetSchedule denormalize_row(std::span<const double> row);

/// Mines `ds` distinct valid schedules. Each GA run minimizes
/// datagen_fitness; at the first generation containing valid individuals
/// all of them are harvested (corrected, normalized, deduplicated) and the
/// GA restarts from a fresh population.
Dataset generate_dataset(const ProblemConfig& config, std::size_t ds,
                         const DatagenConfig& datagen, Rng& rng);

}  // namespace coil
