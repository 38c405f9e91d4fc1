#pragma once

#include <functional>
#include <span>
#include <vector>

#include "coil/domain.hpp"
#include "coil/evaluator.hpp"
#include "coil/ga.hpp"

namespace coil {

/// Maps a genome to a raw schedule.
using ScheduleDecoder = std::function<FleetSchedule(std::span<const double>)>;

/// Outcome of one optimizer run on one request set.
struct OptimizeResult {
  Genome best_genome;
  FleetSchedule schedule;   // corrected, as evaluated during evolution
  Evaluation worst_case;    // what selection saw
  Evaluation reported;      // post-schedule re-score of the best
  std::vector<TracePoint> trace;
};

/// Evaluation callback shared by every optimizer: decode, then worst-case
/// evaluate. The selected constraint scalar becomes Score::constraint.
EvalFn make_schedule_objective(const RequestSet& requests, const ProblemConfig& config,
                               ScheduleDecoder decoder, ConstraintMeasure measure);

/// Runs the GA over an arbitrary genome space through `decoder`.
OptimizeResult optimize_schedule(const RequestSet& requests, const ProblemConfig& config,
                                 const ScheduleDecoder& decoder, std::size_t genome_length,
                                 const GaConfig& ga, ConstraintMeasure measure, Rng& rng);

/// Baseline: the GA searches [st1, rt1, ...] directly in integer space.
OptimizeResult run_baseline(const RequestSet& requests, const ProblemConfig& config,
                            GaConfig ga, Rng& rng,
                            ConstraintMeasure measure = ConstraintMeasure::kViolatingSlots);

}  // namespace coil
