#pragma once

// Shared aliases, error taxonomy, deterministic RNG, and wire helpers.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <boost/multiprecision/cpp_int.hpp>

namespace grrforge {

using u8 = uint8_t;
using u16 = uint16_t;
using u32 = uint32_t;
using u64 = uint64_t;
using u128 = unsigned __int128;
using Bi = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline constexpr const char* kSchema = "grrforge/1";

// Domain errors (bad inputs, unsatisfiable requests): CLI exit code 1.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

// Budget refusals (caps and timeouts hit before an answer): CLI exit code 2.
// Never produces a wrong answer; it produces no answer.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& m) : std::runtime_error(m) {}
};

inline std::string u128_str(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  return std::string(s.rbegin(), s.rend());
}

inline Bi u128_bi(u128 v) {
  Bi hi = Bi(u64(v >> 64));
  return (hi << 64) | Bi(u64(v));
}

// SplitMix64: deterministic across platforms and standard libraries, unlike
// std::uniform_int_distribution.  All randomized procedures take one of these
// so that a run is reproducible from its seed alone.
struct Rng {
  u64 state;
  explicit Rng(u64 seed) : state(seed) {}
  u64 next() {
    u64 z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, n) by rejection; n must be nonzero.
  u64 below(u64 n) {
    u64 lim = ~u64(0) - ~u64(0) % n;
    u64 v;
    do { v = next(); } while (v >= lim);
    return v % n;
  }
  double unit() { return double(next() >> 11) * 0x1.0p-53; }
};

}  // namespace grrforge
