#include "coil/evaluator.hpp"

#include <algorithm>
#include <string>

#include "coil/errors.hpp"

namespace coil {

int OccupancyTimeline::peak() const noexcept {
  return *std::max_element(counts.begin(), counts.end());
}

std::string_view to_string(EvalMode mode) {
  return mode == EvalMode::kWorstCase ? "worst-case" : "post-schedule";
}

EvalMode eval_mode_from_string(std::string_view s) {
  if (s == "worst-case") return EvalMode::kWorstCase;
  if (s == "post-schedule") return EvalMode::kPostSchedule;
  throw FormatError("unknown evaluation mode: " + std::string(s));
}

std::string_view to_string(ConstraintMeasure m) {
  return m == ConstraintMeasure::kViolatingSlots ? "violating_slots" : "peak_excess";
}

ConstraintMeasure constraint_measure_from_string(std::string_view s) {
  if (s == "violating_slots") return ConstraintMeasure::kViolatingSlots;
  if (s == "peak_excess") return ConstraintMeasure::kPeakExcess;
  throw InvalidConfigError("unknown constraint measure: " + std::string(s));
}

OccupancyTimeline build_timeline(std::span<const SlotInterval> intervals) {
  // Difference array: +1 at begin, -1 at end, then prefix sum.
  std::array<int, kSlotsPerDay + 1> delta{};
  for (const auto& iv : intervals) {
    const int b = std::clamp(iv.begin, 0, kSlotsPerDay);
    const int e = std::clamp(iv.end, 0, kSlotsPerDay);
    if (b >= e) continue;
    ++delta[static_cast<std::size_t>(b)];
    --delta[static_cast<std::size_t>(e)];
  }
  OccupancyTimeline out;
  int running = 0;
  for (std::size_t t = 0; t < out.counts.size(); ++t) {
    running += delta[t];
    out.counts[t] = running;
  }
  return out;
}

OccupancyTimeline build_timeline(const FleetSchedule& schedule) {
  if (!schedule.is_corrected())
    throw PreconditionError("build_timeline: schedule is not corrected");
  std::vector<SlotInterval> intervals;
  intervals.reserve(schedule.size());
  for (const auto& s : schedule.entries) intervals.push_back({s.start_slot, s.end_slot()});
  return build_timeline(intervals);
}

ConstraintScore score_constraint(const OccupancyTimeline& timeline, int rt) {
  if (rt < 1) throw InvalidConfigError("rt must be >= 1");
  ConstraintScore out;
  for (int c : timeline.counts) {
    if (c > rt) ++out.violating_slots;
    out.peak_excess = std::max(out.peak_excess, c - rt);
  }
  return out;
}

Evaluation evaluate(const RequestSet& requests, const FleetSchedule& raw,
                    const ProblemConfig& config, EvalMode mode) {
  if (!raw.in_bounds()) throw BoundsError("evaluate: schedule component outside [0, 66]");
  const FleetSchedule corrected = correct_schedule(raw);
  const AllocationResult alloc = allocate(requests, corrected);

  Evaluation out;
  out.objective = alloc.total_requests_met;
  out.mode = mode;
  out.utilization = utilization(corrected, alloc);
  if (mode == EvalMode::kWorstCase) {
    out.constraint = score_constraint(build_timeline(corrected), config.rt);
  } else {
    out.constraint = score_constraint(build_timeline(update_durations(corrected, alloc)), config.rt);
  }
  return out;
}

}  // namespace coil
