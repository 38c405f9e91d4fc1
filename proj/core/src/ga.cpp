#include "coil/ga.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "coil/domain.hpp"
#include "coil/errors.hpp"

namespace coil {

namespace {

constexpr double kLatentBound = 2.0;

// Stream ids within one generation's stream.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kGenerationStreamBase = 1;

std::size_t pick_parent(std::span<const Individual> pop, std::span<const int> wins,
                        const GaConfig& config, Rng& rng) {
  std::size_t best = rng.index(pop.size());
  for (int t = 1; t < config.tournament_size; ++t) {
    const std::size_t c = rng.index(pop.size());
    const bool better = config.selection == SelectionScheme::kTournamentFitness
                            ? wins[c] > wins[best]
                            : pop[c].score.constraint < pop[best].score.constraint;
    if (better) best = c;
  }
  return best;
}

std::size_t best_index(std::span<const Individual> pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (lexicographically_better(pop[i].score, pop[best].score)) best = i;
  return best;
}

Score checked_eval(const EvalFn& evaluate, const Genome& g, int generation, std::size_t index) {
  try {
    return evaluate(g);
  } catch (const std::exception& e) {
    throw EvaluationError("evaluation failed at generation " + std::to_string(generation) +
                          ", individual " + std::to_string(index) + ": " + e.what());
  }
}

}  // namespace

double GaConfig::lower_bound() const noexcept {
  return genome_kind == GenomeKind::kInteger ? 0.0 : -kLatentBound;
}

double GaConfig::upper_bound() const noexcept {
  return genome_kind == GenomeKind::kInteger ? static_cast<double>(kSlotMax) : kLatentBound;
}

double GaConfig::effective_sigma() const noexcept {
  if (creep_sigma > 0.0) return creep_sigma;
  return genome_kind == GenomeKind::kInteger ? 5.0 : 0.2;
}

double GaConfig::effective_mutation_prob(std::size_t genome_length) const noexcept {
  if (mutation_prob_per_gene >= 0.0) return mutation_prob_per_gene;
  return genome_length == 0 ? 0.0 : 1.0 / static_cast<double>(genome_length);
}

void GaConfig::validate() const {
  if (tournament_size != 3) throw InvalidConfigError("tournament_size is fixed at 3");
  if (population_size < tournament_size)
    throw InvalidConfigError("population_size must be >= tournament_size");
  if (generations < 0) throw InvalidConfigError("generations must be >= 0");
  if (tournaments_per_eval < 1) throw InvalidConfigError("tournaments_per_eval must be >= 1");
  if (crossover_prob < 0.0 || crossover_prob > 1.0)
    throw InvalidConfigError("crossover_prob must be in [0, 1]");
  if (mutation_prob_per_gene > 1.0)
    throw InvalidConfigError("mutation_prob_per_gene must be <= 1");
}

bool lexicographically_better(const Score& a, const Score& b) noexcept {
  if (a.constraint != b.constraint) return a.constraint < b.constraint;
  return a.objective > b.objective;
}

std::vector<int> tournament_fitness(std::span<const Individual> population, int rounds,
                                    Rng& rng) {
  const std::size_t n = population.size();
  if (n < 3) throw InvalidConfigError("tournament fitness needs at least 3 individuals");
  std::vector<int> wins(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Score& me = population[i].score;
    for (int r = 0; r < rounds; ++r) {
      // Two distinct others, drawn from the n - 1 non-focal indices.
      std::size_t a = rng.index(n - 1);
      std::size_t b = rng.index(n - 2);
      if (b >= a) ++b;
      if (a >= i) ++a;
      if (b >= i) ++b;
      const Score& sa = population[a].score;
      const Score& sb = population[b].score;
      if (me.constraint < sa.constraint && me.constraint < sb.constraint) ++wins[i];
      if (me.objective > sa.objective && me.objective > sb.objective) ++wins[i];
    }
  }
  return wins;
}

void mutate(Genome& genome, const GaConfig& config, Rng& rng) {
  const double p = config.effective_mutation_prob(genome.size());
  const double sigma = config.effective_sigma();
  const double lo = config.lower_bound();
  const double hi = config.upper_bound();
  for (double& g : genome) {
    if (!rng.bernoulli(p)) continue;
    double step = rng.normal(0.0, sigma);
    if (config.genome_kind == GenomeKind::kInteger) step = std::round(step);
    g = std::clamp(g + step, lo, hi);
  }
}

std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b,
                                              std::size_t cut_lo, std::size_t cut_hi) {
  if (a.size() != b.size()) throw ShapeError("crossover: parent lengths differ");
  if (cut_lo > cut_hi || cut_hi > a.size()) throw BoundsError("crossover: bad cut points");
  Genome ca = a;
  Genome cb = b;
  for (std::size_t k = cut_lo; k < cut_hi; ++k) std::swap(ca[k], cb[k]);
  return {std::move(ca), std::move(cb)};
}

std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, const GaConfig& config,
                                    Rng& rng) {
  if (a.size() != b.size()) throw ShapeError("crossover: parent lengths differ");
  if (a.size() < 2 || !rng.bernoulli(config.crossover_prob)) return {a, b};
  // Cut points are distinct positions in [1, n]; the segment between swaps.
  std::size_t c1 = 1 + rng.index(a.size());
  std::size_t c2 = 1 + rng.index(a.size() - 1);
  if (c2 >= c1) ++c2;
  if (c1 > c2) std::swap(c1, c2);
  return two_point_crossover(a, b, c1, c2);
}

Genome random_genome(std::size_t length, const GaConfig& config, Rng& rng) {
  Genome g(length);
  for (double& x : g) {
    if (config.genome_kind == GenomeKind::kInteger)
      x = rng.uniform_int(0, kSlotMax);
    else
      x = rng.uniform(config.lower_bound(), config.upper_bound());
  }
  return g;
}

GaResult run_ga(const EvalFn& evaluate, std::size_t genome_length, const GaConfig& config,
                Rng& rng, const GenerationObserver& observer) {
  config.validate();
  const auto pop_size = static_cast<std::size_t>(config.population_size);

  std::vector<Individual> pop(pop_size);
  {
    Rng init = rng.split(kInitStream);
    for (std::size_t i = 0; i < pop_size; ++i) {
      pop[i].genome = random_genome(genome_length, config, init);
      pop[i].score = checked_eval(evaluate, pop[i].genome, 0, i);
    }
  }

  GaResult result;
  result.best = pop[best_index(pop)];

  for (int gen = 0;; ++gen) {
    const std::size_t elite = best_index(pop);
    if (lexicographically_better(pop[elite].score, result.best.score)) result.best = pop[elite];
    result.trace.push_back({gen, result.best.score.objective, result.best.score.constraint,
                            result.best.score.utilization});
    result.generations_run = gen;

    if (observer && observer(gen, pop)) {
      result.stopped_early = true;
      break;
    }
    if (gen == config.generations) break;

    Rng grng = rng.split(kGenerationStreamBase + static_cast<std::uint64_t>(gen));
    std::vector<int> wins(pop_size, 0);
    if (config.selection == SelectionScheme::kTournamentFitness)
      wins = tournament_fitness(pop, config.tournaments_per_eval, grng);
    for (std::size_t i = 0; i < pop_size; ++i) pop[i].wins = wins[i];

    std::vector<Individual> next;
    next.reserve(pop_size);
    next.push_back(pop[elite]);
    while (next.size() < pop_size) {
      const Individual& pa = pop[pick_parent(pop, wins, config, grng)];
      const Individual& pb = pop[pick_parent(pop, wins, config, grng)];
      auto [ca, cb] = crossover(pa.genome, pb.genome, config, grng);
      mutate(ca, config, grng);
      mutate(cb, config, grng);
      next.push_back({std::move(ca), {}, 0});
      if (next.size() < pop_size) next.push_back({std::move(cb), {}, 0});
    }
    for (std::size_t i = 1; i < pop_size; ++i)
      next[i].score = checked_eval(evaluate, next[i].genome, gen + 1, i);
    pop = std::move(next);
  }
  return result;
}

}  // namespace coil
