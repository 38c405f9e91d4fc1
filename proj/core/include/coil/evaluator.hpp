#pragma once

#include <array>
#include <span>
#include <string_view>

#include "coil/domain.hpp"
#include "coil/scheduler.hpp"

namespace coil {

/// Number of robots occupying each slot of the day.
struct OccupancyTimeline {
  std::array<int, kSlotsPerDay> counts{};

  /// Peak simultaneous robot count.
  int peak() const noexcept;
  friend bool operator==(const OccupancyTimeline&, const OccupancyTimeline&) = default;
};

struct ConstraintScore {
  int violating_slots = 0;  // slots with more than rt robots
  int peak_excess = 0;      // max(0, peak - rt)

  bool valid() const noexcept { return violating_slots == 0; }
  friend bool operator==(const ConstraintScore&, const ConstraintScore&) = default;
};

enum class EvalMode {
  kWorstCase,     // every robot runs its full encoded shift
  kPostSchedule,  // shifts shrunk to what the scheduler actually used
};

/// Which constraint scalar drives selection.
enum class ConstraintMeasure { kViolatingSlots, kPeakExcess };

std::string_view to_string(EvalMode mode);
EvalMode eval_mode_from_string(std::string_view s);
std::string_view to_string(ConstraintMeasure m);
ConstraintMeasure constraint_measure_from_string(std::string_view s);

struct Evaluation {
  int objective = 0;  // requests met
  ConstraintScore constraint;
  EvalMode mode = EvalMode::kWorstCase;
  double utilization = 0.0;

  int constraint_value(ConstraintMeasure m) const noexcept {
    return m == ConstraintMeasure::kViolatingSlots ? constraint.violating_slots
                                                   : constraint.peak_excess;
  }
  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

/// Half-open slot interval [begin, end).
struct SlotInterval {
  int begin = 0;
  int end = 0;
};

/// Occupancy from explicit intervals, clipped to the day.
OccupancyTimeline build_timeline(std::span<const SlotInterval> intervals);
/// Occupancy of a corrected schedule: robot i covers [start, start + 6 + run).
OccupancyTimeline build_timeline(const FleetSchedule& schedule);

ConstraintScore score_constraint(const OccupancyTimeline& timeline, int rt);

/// Objective and constraint for a raw (uncorrected) schedule. The schedule
/// is corrected first; worst-case mode scores the corrected shifts,
/// post-schedule mode scores them after update_durations.
Evaluation evaluate(const RequestSet& requests, const FleetSchedule& raw,
                    const ProblemConfig& config, EvalMode mode);

}  // namespace coil
