#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cokern {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: the result depends only on the arguments,
/// never on evaluation order, so parallel and sequential consumers agree.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> counters) {
  std::uint64_t h = mix64(master);
  for (auto c : counters) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> counters) {
  return Rng{derive_seed(master, counters)};
}

/// Stream tags used with derive_seed.
namespace stream {
inline constexpr std::uint64_t kProblem = 0x70726f62;
inline constexpr std::uint64_t kTrain = 0x747261696e;
inline constexpr std::uint64_t kTest = 0x74657374;
inline constexpr std::uint64_t kShots = 0x73686f74;
inline constexpr std::uint64_t kSpsa = 0x73707361;
}  // namespace stream

}  // namespace cokern
