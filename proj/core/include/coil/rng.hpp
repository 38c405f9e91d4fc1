#pragma once

#include <cstdint>
#include <random>

namespace coil {

/// SplitMix64 finalizer. Used to derive independent child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seedable, splittable random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions below are implemented here rather than taken
/// from <random>, because the standard leaves those implementation-defined;
/// this keeps every draw bit-identical across standard libraries.
///
/// Streams are single-owner. Use split() to hand an independent stream to
/// another task; a child depends only on (parent seed, stream id), never on
/// how many draws the parent has made.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  /// Uniform integer in [lo, hi], both ends inclusive.
  int uniform_int(int lo, int hi);
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  /// Standard normal via the Marsaglia polar method.
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }
  bool bernoulli(double p);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace coil
