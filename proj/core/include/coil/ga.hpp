#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "coil/rng.hpp"

namespace coil {

enum class GenomeKind {
  kInteger,  // genes are integral values in [0, 66]
  kReal,     // genes are reals in [-2, 2]
};

enum class SelectionScheme {
  /// Fitness is the number of wins, on constraint and on objective
  /// separately, across random 3-member subgroups.
  kTournamentFitness,
  /// Plain size-3 tournament on the constraint value alone (minimized).
  kScalar,
};

struct GaConfig {
  int population_size = 20;
  int generations = 50;
  int tournament_size = 3;
  int tournaments_per_eval = 10;
  double crossover_prob = 0.7;
  /// Negative means 1 / genome_length.
  double mutation_prob_per_gene = -1.0;
  /// Non-positive means the kind's default (5.0 integer, 0.2 real).
  double creep_sigma = 0.0;
  GenomeKind genome_kind = GenomeKind::kInteger;
  SelectionScheme selection = SelectionScheme::kTournamentFitness;

  double lower_bound() const noexcept;
  double upper_bound() const noexcept;
  double effective_sigma() const noexcept;
  double effective_mutation_prob(std::size_t genome_length) const noexcept;
  /// Throws InvalidConfigError.
  void validate() const;
};

using Genome = std::vector<double>;

/// What an evaluation callback reports for one genome. The objective is
/// maximized, the constraint minimized; utilization rides along for traces.
struct Score {
  double objective = 0.0;
  double constraint = 0.0;
  double utilization = 0.0;

  friend bool operator==(const Score&, const Score&) = default;
};

struct Individual {
  Genome genome;
  Score score;
  int wins = 0;
};

/// Lower constraint first, then higher objective. Strict.
bool lexicographically_better(const Score& a, const Score& b) noexcept;

struct TracePoint {
  int generation = 0;
  double best_objective = 0.0;
  double best_constraint = 0.0;
  double utilization = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct GaResult {
  Individual best;
  std::vector<TracePoint> trace;
  int generations_run = 0;
  bool stopped_early = false;
};

using EvalFn = std::function<Score(std::span<const double>)>;
/// Called once per generation after evaluation; return true to stop.
using GenerationObserver = std::function<bool(int, std::span<const Individual>)>;

/// Tournament-fitness tally. For each individual and each of `rounds`
/// rounds, two distinct others are drawn; the focal individual gains a win
/// if its constraint is strictly the lowest of the three and another if its
/// objective is strictly the highest. Throws InvalidConfigError for fewer
/// than 3 individuals.
std::vector<int> tournament_fitness(std::span<const Individual> population, int rounds, Rng& rng);

/// Gaussian creep: each gene, with the configured probability, gains a
/// Normal(0, sigma) step (rounded for integer genomes) and is clamped.
void mutate(Genome& genome, const GaConfig& config, Rng& rng);

/// Two-point crossover with probability crossover_prob, else clones.
std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, const GaConfig& config,
                                    Rng& rng);
/// Swaps the segment [cut_lo, cut_hi) between the parents.
std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b,
                                              std::size_t cut_lo, std::size_t cut_hi);

Genome random_genome(std::size_t length, const GaConfig& config, Rng& rng);

/// Generational GA with elitism of one. Returns the lexicographically best
/// individual ever evaluated and the per-generation best trace.
GaResult run_ga(const EvalFn& evaluate, std::size_t genome_length, const GaConfig& config,
                Rng& rng, const GenerationObserver& observer = {});

}  // namespace coil
