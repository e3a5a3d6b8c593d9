#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace memfilter {

/// Reproducible stream of i.i.d. standard normal variates.
///
/// The engine state is derived from the key (seed, stream_id) alone, so any
/// worker can construct the stream for run n without coordinating with
/// others. Equal keys replay bitwise-identical sequences.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  double normal() { return normal_(engine_); }
  void fill_normal(std::span<double> out);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace memfilter
