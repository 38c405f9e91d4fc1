#include "coil/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "coil/errors.hpp"

namespace coil::stats {

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stdev = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

MannWhitney mann_whitney(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw PreconditionError("mann_whitney: empty sample");
  struct Obs {
    double value;
    bool first;
  };
  std::vector<Obs> all;
  for (double v : a) all.push_back({v, true});
  for (double v : b) all.push_back({v, false});
  std::sort(all.begin(), all.end(), [](const Obs& x, const Obs& y) { return x.value < y.value; });

  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k)
      if (all[k].first) rank_sum_a += avg_rank;
    i = j;
  }

  MannWhitney out;
  out.u = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
  const double mean_u = n1 * n2 / 2.0;
  const double var_u = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var_u <= 0.0) return out;  // all observations tied
  const double sd = std::sqrt(var_u);
  // Continuity correction toward the mean.
  const double delta = out.u - mean_u;
  const double corrected = delta > 0 ? delta - 0.5 : (delta < 0 ? delta + 0.5 : 0.0);
  out.z = corrected / sd;
  auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  // "a lower" means small U; p = P(Z <= z) with z from U + 0.5.
  out.p_less = phi((out.u - mean_u + 0.5) / sd);
  out.p_two_sided = std::min(1.0, 2.0 * phi(-std::abs(out.z)));
  return out;
}

}  // namespace coil::stats
