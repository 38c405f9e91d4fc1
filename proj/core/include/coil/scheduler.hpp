#pragma once

#include <vector>

#include "coil/domain.hpp"

namespace coil {

inline constexpr int kUnmet = -1;

struct AllocationResult {
  int total_requests_met = 0;
  std::vector<int> remaining_minutes;  // per robot, >= 0
  std::vector<int> assignment;         // per request: robot index or kUnmet

  friend bool operator==(const AllocationResult&, const AllocationResult&) = default;
};

/// First-come first-served allocation of requests to robots.
///
/// Each robot starts with duration_minutes(run_slots) of capacity. Requests
/// are taken in order; each goes to
///   (a) the robot whose leftover after the request is closest to zero,
///       among robots leaving a leftover in [0, 10), else
///   (b) the robot with the most remaining minutes, provided it would still
///       have some left (> 0) after the request, else
///   (c) nobody.
/// Ties go to the lowest robot index. Throws PreconditionError when the
/// schedule is not corrected.
AllocationResult allocate(const RequestSet& requests, const FleetSchedule& schedule);

/// Shrinks every shift by its unused tail:
/// run_slots - floor(remaining / 10), floored at 0. Start slots are kept.
FleetSchedule update_durations(const FleetSchedule& schedule, const AllocationResult& result);

/// Fraction of scheduled robot minutes consumed by allocated requests.
/// Zero for an empty fleet.
double utilization(const FleetSchedule& schedule, const AllocationResult& result);

}  // namespace coil
