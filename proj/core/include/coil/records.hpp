#pragma once

#include <cstdint>
#include <string>

namespace coil {

enum class Algorithm { kBaseline, kCoil };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// One optimizer run within an experiment setting.
struct RunRecord {
  std::string experiment;
  std::string setting;
  Algorithm algorithm = Algorithm::kBaseline;
  int run = 0;
  std::uint64_t seed = 0;  // reproduces this run on its own
  int objective = 0;
  int violating_slots = 0;  // post-schedule
  int peak_excess = 0;      // post-schedule
  double utilization = 0.0;
  double wall_time_s = 0.0;

  /// Equality on every deterministic field; wall time is a measurement.
  bool same_outcome(const RunRecord& o) const {
    return experiment == o.experiment && setting == o.setting && algorithm == o.algorithm &&
           run == o.run && seed == o.seed && objective == o.objective &&
           violating_slots == o.violating_slots && peak_excess == o.peak_excess &&
           utilization == o.utilization;
  }
};

}  // namespace coil
