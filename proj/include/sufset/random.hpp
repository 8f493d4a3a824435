#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace sufset {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to hash (seed, stream ids...) into substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of an independent substream identified by `ids` under `seed`.
// Parallel and serial code derive the same seed for the same ids.
inline std::uint64_t substream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = mix64(seed);
  for (auto id : ids) h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  return Rng(substream_seed(seed, ids));
}

// Uniform on the open interval (0, 1): u = (top 53 bits + 0.5) * 2^-53.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Extreme Value I (Gumbel), location 0, scale `scale`: -scale * ln(-ln(u)).
inline double gumbel(Rng& rng, double scale = 1.0) {
  return -scale * std::log(-std::log(uniform_open01(rng)));
}

// Stream tags so distinct uses of one seed never collide.
namespace stream {
inline constexpr std::uint64_t population = 1;
inline constexpr std::uint64_t history = 2;
inline constexpr std::uint64_t cohort_noise = 3;
inline constexpr std::uint64_t sets = 4;
inline constexpr std::uint64_t replication = 5;
}  // namespace stream

}  // namespace sufset
