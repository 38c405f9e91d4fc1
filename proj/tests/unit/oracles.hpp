#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "coil/domain.hpp"
#include "coil/evaluator.hpp"
#include "coil/ga.hpp"
#include "coil/rng.hpp"
#include "coil/scheduler.hpp"

namespace oracle {

// Per-slot membership scan, one robot at a time.
inline std::array<int, coil::kSlotsPerDay> timeline(const coil::FleetSchedule& s) {
  std::array<int, coil::kSlotsPerDay> counts{};
  for (int t = 0; t < coil::kSlotsPerDay; ++t)
    for (const auto& e : s.entries)
      if (e.start_slot <= t && t < e.start_slot + 6 + e.run_slots) ++counts[t];
  return counts;
}

inline int violating(const std::array<int, coil::kSlotsPerDay>& c, int rt) {
  return static_cast<int>(std::count_if(c.begin(), c.end(), [rt](int v) { return v > rt; }));
}

// FCFS written as an explicit candidate scan over both branches.
inline coil::AllocationResult fcfs(const std::vector<int>& durations,
                                   const std::vector<int>& capacity) {
  coil::AllocationResult r;
  r.remaining_minutes = capacity;
  for (int d : durations) {
    int pick = -1;
    for (std::size_t k = 0; k < capacity.size(); ++k) {
      const int left = r.remaining_minutes[k] - d;
      if (left < 0 || left >= 10) continue;
      if (pick < 0 || left < r.remaining_minutes[pick] - d) pick = static_cast<int>(k);
    }
    if (pick < 0) {
      for (std::size_t k = 0; k < capacity.size(); ++k) {
        if (r.remaining_minutes[k] - d <= 0) continue;
        if (pick < 0 || r.remaining_minutes[k] > r.remaining_minutes[pick]) pick = static_cast<int>(k);
      }
    }
    r.assignment.push_back(pick < 0 ? coil::kUnmet : pick);
    if (pick >= 0) {
      r.remaining_minutes[pick] -= d;
      ++r.total_requests_met;
    }
  }
  return r;
}

// Expected wins per round for each individual, enumerating every pair of others.
inline std::vector<double> expected_wins_per_round(const std::vector<coil::Individual>& pop) {
  const std::size_t n = pop.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    int pairs = 0;
    double wins = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (j == i || k == i) continue;
        ++pairs;
        const auto& a = pop[i].score;
        const auto& b = pop[j].score;
        const auto& c = pop[k].score;
        if (a.constraint < b.constraint && a.constraint < c.constraint) wins += 1;
        if (a.objective > b.objective && a.objective > c.objective) wins += 1;
      }
    out[i] = wins / pairs;
  }
  return out;
}

inline coil::FleetSchedule random_schedule(int rb, coil::Rng& rng) {
  coil::FleetSchedule s;
  for (int i = 0; i < rb; ++i) s.entries.push_back({rng.uniform_int(0, 66), rng.uniform_int(0, 66)});
  return s;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("coil_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
