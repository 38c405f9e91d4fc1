#include <cmath>
#include <vector>

#include "coil/errors.hpp"
#include "coil/stats.hpp"
#include "doctest.h"

using namespace coil;

namespace {

struct Reference {
  std::vector<double> a, b;
  double u, p_less, p_two_sided;
};

// Values from scipy.stats.mannwhitneyu(method="asymptotic", use_continuity=True).
const std::vector<Reference> kReferences = {
    {{1, 2, 3, 4, 5}, {3, 4, 5, 6, 7, 8}, 4.5, 0.0330077157606155, 0.066015431521231},
    {{0, 0, 0, 1, 2, 0, 3}, {5, 6, 2, 2, 9, 7, 4, 3}, 3.5, 0.0024356550114236646,
     0.004871310022847329},
    {{2.5, 1.0, 7.0, 3.3}, {0.5, 8.0, 9.1, 4.4, 6.0}, 6.0, 0.1956336396413197,
     0.3912672792826394},
};

}  // namespace

TEST_CASE("mann_whitney matches reference values") {
  for (const auto& r : kReferences) {
    const auto m = stats::mann_whitney(r.a, r.b);
    CHECK(m.u == r.u);
    CHECK(m.p_less == doctest::Approx(r.p_less).epsilon(1e-10));
    CHECK(m.p_two_sided == doctest::Approx(r.p_two_sided).epsilon(1e-10));
  }
}

TEST_CASE("mann_whitney edge cases") {
  const std::vector<double> same{1, 1, 1};
  const auto m = stats::mann_whitney(same, same);
  CHECK(m.p_less == 1.0);
  const std::vector<double> empty;
  CHECK_THROWS_AS(stats::mann_whitney(empty, same), PreconditionError);
  const std::vector<double> low(20, 0.0), high(20, 5.0);
  CHECK(stats::mann_whitney(low, high).p_less < 1e-6);
  CHECK(stats::mann_whitney(high, low).p_less > 0.999);
}

TEST_CASE("summarize") {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = stats::summarize(v);
  CHECK(s.n == 8);
  CHECK(s.mean == 5.0);
  CHECK(s.min == 2.0);
  CHECK(s.max == 9.0);
  CHECK(s.stdev == doctest::Approx(std::sqrt(32.0 / 7.0)));
  const std::vector<double> one{3};
  CHECK(stats::summarize(one).stdev == 0.0);
  CHECK(stats::summarize(std::vector<double>{}).n == 0);
}
