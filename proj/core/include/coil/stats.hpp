#pragma once

#include <span>

namespace coil::stats {

struct Summary {
  double mean = 0.0;
  double stdev = 0.0;  // sample standard deviation (n - 1)
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

Summary summarize(std::span<const double> values);

struct MannWhitney {
  double u = 0.0;        // U statistic of the first sample
  double z = 0.0;        // tie- and continuity-corrected normal score
  double p_less = 1.0;   // one-sided p for "first sample tends lower"
  double p_two_sided = 1.0;
};

/// Normal approximation with tie correction.
MannWhitney mann_whitney(std::span<const double> a, std::span<const double> b);

}  // namespace coil::stats
