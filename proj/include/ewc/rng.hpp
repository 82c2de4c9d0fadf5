#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace ewc {

/// Portable random stream: std::mt19937_64 (bit-exact by the standard) with
/// uniform and normal conversions written out here, since the standard
/// distributions differ between library implementations.
///
/// Rng(seed, stream) gives statistically independent streams for distinct
/// stream indices, which is how parallel workers split one seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal pair (Box-Muller).
  std::pair<double, double> normal_pair();
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer, used to decorrelate (seed, stream) pairs.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace ewc
