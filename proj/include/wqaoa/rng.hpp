// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace wqaoa {

/// Seedable, splittable random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Child streams are derived from the *seed* (not the current
/// state) through SplitMix64, so `split(k)` is independent of how much the
/// parent has been consumed. Real-valued draws are computed here rather than
/// through <random> distributions, whose algorithms are implementation
/// defined, so result files are bit-reproducible across standard libraries.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64-split/v1";

  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer on [0, n).
  std::size_t index(std::size_t n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace wqaoa

namespace wqaoa {

/// Seed of stream `stream` under `base`; equals Rng(base).split(stream).seed().
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) { return Rng(base).split(stream).seed(); }

}  // namespace wqaoa
