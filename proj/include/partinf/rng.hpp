#pragma once

// Counter-based random numbers.
//
// Every draw is a pure function of a 64-bit key and a tuple of counters:
//
//   h0 = splitmix64(seed)
//   h_{i+1} = splitmix64(h_i ^ word_i)
//
// where splitmix64 is the SplitMix64 output function (Steele, Lea, Flood
// 2014). Uniform doubles take the top 53 bits. Because nothing is carried
// between draws, the value attached to (seed, i, j) is the same no matter
// which thread asks for it or in which order.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace partinf {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed,
                                     std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (auto w : words) h = splitmix64(h ^ w);
  return h;
}

constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stream tags keep draws for different purposes independent under one seed.
enum class Stream : std::uint64_t {
  edge_noise = 0x45444745,   // "EDGE"
  node_noise = 0x4e4f4445,   // "NODE"
  labels = 0x4c41424c,       // "LABL"
  solver_init = 0x494e4954,  // "INIT"
  graph = 0x47524150,        // "GRAP"
  trial = 0x5452494c,        // "TRIL"
  chernoff = 0x43484552,     // "CHER"
};

// Sequential view over the counter hash: the n-th call returns
// counter_hash(key, {n}).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
  CounterRng(std::uint64_t seed, Stream stream) noexcept
      : key_(counter_hash(seed, {static_cast<std::uint64_t>(stream)})) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept { return counter_hash(key_, {counter_++}); }

  double uniform() noexcept { return to_unit_interval((*this)()); }

  // Unbiased integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    for (;;) {
      auto x = (*this)();
      if (x < limit) return x % bound;
    }
  }

  // Standard normal by Box-Muller (one value per call, second discarded).
  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace partinf
