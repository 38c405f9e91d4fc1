#include "coil/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coil/errors.hpp"

namespace coil {

void ProblemConfig::validate() const {
  if (rb < 1) throw InvalidConfigError("rb must be >= 1, got " + std::to_string(rb));
  if (rt < 1) throw InvalidConfigError("rt must be >= 1, got " + std::to_string(rt));
  if (rq < 1) throw InvalidConfigError("rq must be >= 1, got " + std::to_string(rq));
  if (dr < kMinRequestMinutes || dr > 360)
    throw InvalidConfigError("dr must be in [60, 360], got " + std::to_string(dr));
}

bool FleetSchedule::in_bounds() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const RobotShift& s) {
    return s.start_slot >= 0 && s.start_slot <= kSlotMax && s.run_slots >= 0 &&
           s.run_slots <= kSlotMax;
  });
}

bool FleetSchedule::is_corrected() const noexcept {
  return in_bounds() &&
         std::all_of(entries.begin(), entries.end(), [](const RobotShift& s) {
           // start 66 with run 0 is the clamped form of an out-of-day start.
           return s.start_slot + s.run_slots <= kCorrectionLimit ||
                  (s.start_slot == kSlotMax && s.run_slots == 0);
         });
}

RequestSet generate_requests(const ProblemConfig& config, Rng& rng) {
  config.validate();
  RequestSet out;
  out.durations.reserve(static_cast<std::size_t>(config.rq));
  for (int j = 0; j < config.rq; ++j)
    out.durations.push_back(rng.uniform_int(kMinRequestMinutes, config.dr));
  return out;
}

FleetSchedule correct_schedule(const FleetSchedule& raw) {
  FleetSchedule out = raw;
  for (auto& shift : out.entries) {
    if (shift.start_slot + shift.run_slots > kCorrectionLimit)
      shift.run_slots = std::max(0, kCorrectionLimit - shift.start_slot);
  }
  return out;
}

RobotDurationMinutes duration_minutes(int run_slots) {
  if (run_slots < 0 || run_slots > kSlotMax)
    throw BoundsError("run_slots out of [0, 66]: " + std::to_string(run_slots));
  return RobotDurationMinutes(kMinShiftMinutes + kSlotMinutes * run_slots);
}

FleetSchedule schedule_from_genome(std::span<const double> genome) {
  if (genome.size() % 2 != 0)
    throw BoundsError("schedule genome must have even length");
  FleetSchedule out;
  out.entries.reserve(genome.size() / 2);
  auto to_slot = [](double g) {
    if (!(g >= 0.0 && g <= kSlotMax) || g != std::floor(g))
      throw BoundsError("schedule gene not an integer in [0, 66]: " + std::to_string(g));
    return static_cast<int>(g);
  };
  for (std::size_t i = 0; i < genome.size(); i += 2)
    out.entries.push_back({to_slot(genome[i]), to_slot(genome[i + 1])});
  return out;
}

std::vector<double> genome_from_schedule(const FleetSchedule& schedule) {
  std::vector<double> out;
  out.reserve(schedule.size() * 2);
  for (const auto& s : schedule.entries) {
    out.push_back(s.start_slot);
    out.push_back(s.run_slots);
  }
  return out;
}

}  // namespace coil
