#include "coil/scheduler.hpp"

#include <algorithm>
#include <string>

#include "coil/errors.hpp"

namespace coil {

AllocationResult allocate(const RequestSet& requests, const FleetSchedule& schedule) {
  if (!schedule.is_corrected())
    throw PreconditionError("allocate: schedule is not corrected");

  AllocationResult out;
  out.remaining_minutes.reserve(schedule.size());
  for (const auto& shift : schedule.entries)
    out.remaining_minutes.push_back(duration_minutes(shift.run_slots).value());
  out.assignment.assign(requests.size(), kUnmet);

  auto& remaining = out.remaining_minutes;
  for (std::size_t j = 0; j < requests.size(); ++j) {
    const int dur = requests.durations[j];
    int chosen = kUnmet;

    int best_gap = kSlotMinutes;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      const int gap = remaining[k] - dur;
      if (gap >= 0 && gap < best_gap) {
        best_gap = gap;
        chosen = static_cast<int>(k);
      }
    }

    if (chosen == kUnmet) {
      int best_remaining = -1;
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        if (remaining[k] - dur > 0 && remaining[k] > best_remaining) {
          best_remaining = remaining[k];
          chosen = static_cast<int>(k);
        }
      }
    }

    if (chosen != kUnmet) {
      remaining[static_cast<std::size_t>(chosen)] -= dur;
      out.assignment[j] = chosen;
      ++out.total_requests_met;
    }
  }
  return out;
}

FleetSchedule update_durations(const FleetSchedule& schedule, const AllocationResult& result) {
  if (schedule.size() != result.remaining_minutes.size())
    throw PreconditionError("update_durations: schedule has " + std::to_string(schedule.size()) +
                            " robots but result has " +
                            std::to_string(result.remaining_minutes.size()));
  FleetSchedule out = schedule;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& shift = out.entries[i];
    shift.run_slots =
        std::max(0, shift.run_slots - result.remaining_minutes[i] / kSlotMinutes);
  }
  return out;
}

double utilization(const FleetSchedule& schedule, const AllocationResult& result) {
  long total = 0;
  long left = 0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    total += duration_minutes(schedule.entries[i].run_slots).value();
    left += result.remaining_minutes.at(i);
  }
  if (total == 0) return 0.0;
  return static_cast<double>(total - left) / static_cast<double>(total);
}

}  // namespace coil
