#include "coil/optimize.hpp"

#include <utility>

namespace coil {

EvalFn make_schedule_objective(const RequestSet& requests, const ProblemConfig& config,
                               ScheduleDecoder decoder, ConstraintMeasure measure) {
  return [&requests, config, decoder = std::move(decoder),
          measure](std::span<const double> genome) {
    const Evaluation e = evaluate(requests, decoder(genome), config, EvalMode::kWorstCase);
    return Score{static_cast<double>(e.objective),
                 static_cast<double>(e.constraint_value(measure)), e.utilization};
  };
}

OptimizeResult optimize_schedule(const RequestSet& requests, const ProblemConfig& config,
                                 const ScheduleDecoder& decoder, std::size_t genome_length,
                                 const GaConfig& ga, ConstraintMeasure measure, Rng& rng) {
  const EvalFn objective = make_schedule_objective(requests, config, decoder, measure);
  GaResult ga_result = run_ga(objective, genome_length, ga, rng);

  OptimizeResult out;
  out.best_genome = std::move(ga_result.best.genome);
  const FleetSchedule raw = decoder(out.best_genome);
  out.schedule = correct_schedule(raw);
  out.worst_case = evaluate(requests, raw, config, EvalMode::kWorstCase);
  out.reported = evaluate(requests, raw, config, EvalMode::kPostSchedule);
  out.trace = std::move(ga_result.trace);
  return out;
}

OptimizeResult run_baseline(const RequestSet& requests, const ProblemConfig& config,
                            GaConfig ga, Rng& rng, ConstraintMeasure measure) {
  ga.genome_kind = GenomeKind::kInteger;
  ga.selection = SelectionScheme::kTournamentFitness;
  const ScheduleDecoder decoder = [](std::span<const double> g) {
    return schedule_from_genome(g);
  };
  return optimize_schedule(requests, config, decoder,
                           2 * static_cast<std::size_t>(config.rb), ga, measure, rng);
}

}  // namespace coil
