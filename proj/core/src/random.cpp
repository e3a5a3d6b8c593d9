#include "memfilter/random.hpp"

#include <array>

namespace memfilter {
namespace {

std::mt19937_64 keyed_engine(std::uint64_t seed, std::uint64_t stream_id) {
  // Domain-separation word keeps (seed, id) keys apart from plain integer seeding.
  const std::array<std::uint32_t, 5> words{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
      0x6d66696cu};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(keyed_engine(seed, stream_id)) {}

void RandomStream::fill_normal(std::span<double> out) {
  for (double& z : out) z = normal_(engine_);
}

}  // namespace memfilter
