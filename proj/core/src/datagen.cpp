#include "coil/datagen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>

#include "coil/evaluator.hpp"

namespace coil {

namespace {

struct RestartOutcome {
  std::vector<std::vector<int>> valid;  // corrected integer genomes, in discovery order
  long evaluations = 0;
};

std::vector<int> corrected_genes(const FleetSchedule& corrected) {
  std::vector<int> out;
  out.reserve(corrected.size() * 2);
  for (const auto& s : corrected.entries) {
    out.push_back(s.start_slot);
    out.push_back(s.run_slots);
  }
  return out;
}

RestartOutcome run_restart(const ProblemConfig& config, const DatagenConfig& datagen, Rng rng) {
  GaConfig ga;
  ga.population_size = datagen.population_size;
  ga.generations = datagen.generations;
  ga.crossover_prob = datagen.crossover_prob;
  ga.mutation_prob_per_gene = datagen.mutation_prob_per_gene;
  ga.creep_sigma = datagen.creep_sigma;
  ga.genome_kind = GenomeKind::kInteger;
  ga.selection = SelectionScheme::kScalar;

  RestartOutcome out;
  const int rt = config.rt;
  const EvalFn fitness = [rt, &out](std::span<const double> g) {
    ++out.evaluations;
    return Score{0.0, datagen_fitness(g, rt), 0.0};
  };
  const GenerationObserver harvest = [&out, rt](int, std::span<const Individual> pop) {
    for (const auto& ind : pop) {
      const FleetSchedule corrected = correct_schedule(schedule_from_genome(ind.genome));
      if (score_constraint(build_timeline(corrected), rt).valid())
        out.valid.push_back(corrected_genes(corrected));
    }
    return !out.valid.empty();
  };
  run_ga(fitness, 2 * static_cast<std::size_t>(config.rb), ga, rng, harvest);
  return out;
}

}  // namespace

double datagen_fitness(std::span<const double> genome, int rt) {
  const FleetSchedule corrected = correct_schedule(schedule_from_genome(genome));
  const int violations = score_constraint(build_timeline(corrected), rt).violating_slots;
  double run_sum = 0.0;
  for (std::size_t i = 1; i < genome.size(); i += 2) run_sum += genome[i];
  return violations + 100.0 / std::max(1.0, run_sum);
}

std::vector<double> normalize_schedule(const FleetSchedule& schedule) {
  std::vector<double> row;
  row.reserve(schedule.size() * 2);
  for (const auto& s : schedule.entries) {
    row.push_back(static_cast<double>(s.start_slot) / kSlotMax);
    row.push_back(static_cast<double>(s.run_slots) / kSlotMax);
  }
  return row;
}

FleetSchedule denormalize_row(std::span<const double> row) {
  if (row.size() % 2 != 0) throw ShapeError("dataset row must have even length");
  auto to_slot = [](double v) {
    if (!std::isfinite(v)) throw BoundsError("non-finite dataset value");
    return static_cast<int>(std::clamp(std::round(v * kSlotMax), 0.0, double{kSlotMax}));
  };
  FleetSchedule out;
  out.entries.reserve(row.size() / 2);
  for (std::size_t i = 0; i < row.size(); i += 2)
    out.entries.push_back({to_slot(row[i]), to_slot(row[i + 1])});
  return out;
}

Dataset generate_dataset(const ProblemConfig& config, std::size_t ds,
                         const DatagenConfig& datagen, Rng& rng) {
  config.validate();
  if (ds < 1) throw InvalidConfigError("ds must be >= 1");
  if (datagen.threads < 1) throw InvalidConfigError("threads must be >= 1");

  const auto started = std::chrono::steady_clock::now();
  Dataset out;
  out.meta.rb = config.rb;
  out.meta.rt = config.rt;
  out.meta.seed = rng.seed();

  std::set<std::vector<int>> seen;
  int next_restart = 0;
  while (out.rows.size() < ds) {
    if (next_restart >= datagen.max_restarts) {
      out.meta.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      throw PartialDatasetError("restart budget of " + std::to_string(datagen.max_restarts) +
                                    " exhausted with " + std::to_string(out.rows.size()) +
                                    " of " + std::to_string(ds) + " rows mined",
                                std::move(out));
    }
    const int batch = std::min(datagen.threads, datagen.max_restarts - next_restart);
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(batch));
    if (batch == 1) {
      outcomes[0] = run_restart(config, datagen, rng.split(static_cast<std::uint64_t>(next_restart)));
    } else {
      std::vector<std::jthread> workers;
      for (int b = 0; b < batch; ++b) {
        workers.emplace_back([&, b] {
          outcomes[static_cast<std::size_t>(b)] = run_restart(
              config, datagen, rng.split(static_cast<std::uint64_t>(next_restart + b)));
        });
      }
    }
    // Merge in restart order so the result is independent of batching.
    for (auto& outcome : outcomes) {
      if (out.rows.size() >= ds) break;
      ++out.meta.restarts;
      out.meta.evaluations += outcome.evaluations;
      for (auto& genes : outcome.valid) {
        if (out.rows.size() >= ds) break;
        if (!seen.insert(genes).second) continue;
        std::vector<double> row(genes.size());
        std::transform(genes.begin(), genes.end(), row.begin(),
                       [](int g) { return static_cast<double>(g) / kSlotMax; });
        out.rows.push_back(std::move(row));
      }
    }
    next_restart += batch;
  }
  out.meta.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace coil
