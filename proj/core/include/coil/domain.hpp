#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "coil/rng.hpp"

namespace coil {

// Encoding of the operating day: 12 hours of 10-minute slots. A robot's
// start and running time are integers in [0, kSlotMax]; running time 0 means
// the one-hour minimum shift (kMinShiftSlots slots).
inline constexpr int kSlotsPerDay = 72;
inline constexpr int kSlotMax = 66;
inline constexpr int kCorrectionLimit = 65;
inline constexpr int kMinShiftSlots = 6;
inline constexpr int kSlotMinutes = 10;
inline constexpr int kMinRequestMinutes = 60;
inline constexpr int kMinShiftMinutes = kMinShiftSlots * kSlotMinutes;

struct ProblemConfig {
  int rb = 30;   // robots
  int rt = 10;   // max robots running in any one slot
  int rq = 120;  // requests per day
  int dr = 180;  // max request duration, minutes
  std::uint64_t seed = 1;

  /// Throws InvalidConfigError.
  void validate() const;

  friend bool operator==(const ProblemConfig&, const ProblemConfig&) = default;
};

struct RequestSet {
  std::vector<int> durations;  // minutes, in [60, dr]

  std::size_t size() const noexcept { return durations.size(); }
  friend bool operator==(const RequestSet&, const RequestSet&) = default;
};

struct RobotShift {
  int start_slot = 0;
  int run_slots = 0;

  /// Number of slots occupied: the minimum shift plus the running time.
  int occupied_slots() const noexcept { return kMinShiftSlots + run_slots; }
  /// One past the last occupied slot.
  int end_slot() const noexcept { return start_slot + occupied_slots(); }

  friend auto operator<=>(const RobotShift&, const RobotShift&) = default;
};

struct FleetSchedule {
  std::vector<RobotShift> entries;

  std::size_t size() const noexcept { return entries.size(); }
  /// Every component inside [0, kSlotMax].
  bool in_bounds() const noexcept;
  /// In bounds and start + run <= kCorrectionLimit for every robot.
  bool is_corrected() const noexcept;

  friend bool operator==(const FleetSchedule&, const FleetSchedule&) = default;
};

/// Robot shift length in minutes.
class RobotDurationMinutes {
 public:
  constexpr explicit RobotDurationMinutes(int minutes) : value_(minutes) {}
  constexpr int value() const noexcept { return value_; }
  friend constexpr auto operator<=>(RobotDurationMinutes, RobotDurationMinutes) = default;

 private:
  int value_;
};

/// Draws rq durations uniformly from the integers [60, dr].
RequestSet generate_requests(const ProblemConfig& config, Rng& rng);

/// Shortens any shift running past the end of the day so that
/// start + run <= 65. A start of 66 gets run 0 (the one-hour minimum).
FleetSchedule correct_schedule(const FleetSchedule& raw);

/// 60 + 10 * run_slots. Throws BoundsError outside [0, 66].
RobotDurationMinutes duration_minutes(int run_slots);

/// Interprets [st1, rt1, st2, rt2, ...] as a raw schedule. Genes must be
/// integral values in [0, kSlotMax]; throws BoundsError otherwise.
FleetSchedule schedule_from_genome(std::span<const double> genome);
std::vector<double> genome_from_schedule(const FleetSchedule& schedule);

}  // namespace coil
