#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace turaco {

// splitmix64, the standard 64-bit finalizer-style mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Deterministic derivation of independent sub-streams from a master seed plus
// a sequence of tags (strings and integers). Thread-count independent: streams
// are a pure function of their tags.
class StreamSeed {
public:
  explicit StreamSeed(std::uint64_t seed) : state_(splitmix64(seed ^ 0x6a09e667f3bcc909ull)) {}
  StreamSeed with(std::string_view tag) const {
    StreamSeed s(*this);
    s.state_ = splitmix64(s.state_ ^ fnv1a64(tag));
    return s;
  }
  StreamSeed with(std::uint64_t tag) const {
    StreamSeed s(*this);
    s.state_ = splitmix64(s.state_ ^ splitmix64(tag + 0x9e3779b97f4a7c15ull));
    return s;
  }
  std::uint64_t value() const { return state_; }

private:
  std::uint64_t state_;
};

// Seedable generator used everywhere randomness is needed. Determinism is
// promised per implementation (the distribution algorithms are libstdc++'s).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  explicit Rng(const StreamSeed& s) : eng_(s.value()) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  std::uint64_t uniform_index(std::uint64_t n) {  // 0..n-1
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
  }
  std::mt19937_64& engine() { return eng_; }

private:
  std::mt19937_64 eng_;
};

}  // namespace turaco
