#include "ewc/rng.hpp"

#include <cmath>

#include "ewc/core.hpp"

namespace ewc {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x632be59bd9b4e019ULL))) {}

double Rng::uniform() {
  // 53 random bits, shifted by half an ulp so that 0 is never produced.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> Rng::normal_pair() {
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double t = kTwoPi * uniform();
  return {r * std::cos(t), r * std::sin(t)};
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto [a, b] = normal_pair();
  spare_ = b;
  has_spare_ = true;
  return a;
}

}  // namespace ewc
