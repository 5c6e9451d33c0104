#pragma once

// Primitive prime divisors.
//
// A prime r is a primitive prime divisor of a^m - 1 when r divides a^m - 1
// but no a^i - 1 with 0 < i < m; equivalently the multiplicative order of a
// mod r is exactly m.  Every such prime divides the cyclotomic value
// Phi_m(a), so the search factors that single (much smaller) candidate pool
// and certifies each survivor by an explicit order check, which needs only
// the prime factorization of m.  By Zsigmondy's theorem the result is empty
// exactly for (a, m) = (2, 6), for m = 1 with a = 2, and for m = 2 when
// a + 1 is a power of two.

#include <map>
#include <string>
#include <vector>

#include "grrforge/common.hpp"
#include "grrforge/factor.hpp"

namespace grrforge {

inline std::vector<u32> divisors_of(u32 m) {
  std::vector<u32> lo, hi;
  for (u32 d = 1; u64(d) * d <= m; ++d) {
    if (m % d == 0) {
      lo.push_back(d);
      if (d != m / d) hi.push_back(m / d);
    }
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

inline std::vector<u32> prime_divisors_of(u32 m) {
  std::vector<u32> out;
  for (u32 d = 2; u64(d) * d <= m; ++d) {
    if (m % d == 0) {
      out.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

inline u128 bi_u128(const Bi& v) {
  if (v < 0 || (v >> 128) != 0) throw DomainError("value exceeds the 128-bit range");
  return (u128((v >> 64).convert_to<u64>()) << 64) |
         (v & Bi(~u64(0))).convert_to<u64>();
}

// Phi_d(a) for every divisor d of m, by the exact quotient recursion
// a^d - 1 = prod_{e | d} Phi_e(a).
inline std::map<u32, Bi> cyclotomic_values(u32 m, const Bi& a) {
  std::map<u32, Bi> phi;
  for (u32 d : divisors_of(m)) {
    Bi v = boost::multiprecision::pow(a, d) - 1;
    for (u32 e : divisors_of(d)) {
      if (e < d) v /= phi.at(e);
    }
    phi[d] = v;
  }
  return phi;
}

inline Bi cyclotomic_value(u32 m, const Bi& a) {
  return cyclotomic_values(m, a).at(m);
}

// Factored a^m - 1, assembled from its cyclotomic pieces so that no single
// factorizer input exceeds Phi_d(a) ~ a^phi(d).  Pieces wider than 128 bits
// raise BudgetError: the caller asked for something outside the exact range.
inline std::map<Bi, u32> factor_am1(u64 a, u32 m, const FactorBudget& budget = {}) {
  if (a < 2 || m < 1) throw DomainError("factor_am1 requires a >= 2 and m >= 1");
  std::map<Bi, u32> out;
  for (const auto& [d, v] : cyclotomic_values(m, Bi(a))) {
    if (v == 1) continue;
    for (const auto& [p, e] : factorize(bi_u128(v), budget)) out[u128_bi(p)] += e;
  }
  return out;
}

// True iff the multiplicative order of a mod r is exactly m (r prime, r > 1).
inline bool order_is_exactly(u64 a, u128 r, u32 m) {
  if (a % r == 0) return false;
  if (powmod_u128(a % r, m, r) != 1) return false;
  for (u32 p : prime_divisors_of(m)) {
    if (powmod_u128(a % r, m / p, r) == 1) return false;
  }
  return true;
}

struct PpdResult {
  u64 a = 0;
  u32 m = 0;
  std::vector<Bi> primes;  // ascending
  std::vector<u32> orders; // parallel certificates; each equals m
  bool exceptional = false;
  std::string note;        // names the exception when exceptional
};

inline PpdResult ppd_set(u64 a, u32 m, const FactorBudget& budget = {}) {
  if (a < 2) throw DomainError("ppd base must be at least 2");
  if (m < 1) throw DomainError("ppd exponent must be at least 1");
  PpdResult res;
  res.a = a;
  res.m = m;
  Bi phi = cyclotomic_value(m, Bi(a));
  if (phi > 1) {
    for (const auto& [p, e] : factorize(bi_u128(phi), budget)) {
      (void)e;
      if (order_is_exactly(a, p, m)) {
        res.primes.push_back(u128_bi(p));
        res.orders.push_back(m);
      }
    }
  }
  if (res.primes.empty()) {
    res.exceptional = true;
    if (a == 2 && m == 6) {
      res.note = "Zsigmondy exception (a, m) = (2, 6)";
    } else if (m == 1 && a == 2) {
      res.note = "Zsigmondy exception: a - 1 = 1";
    } else if (m == 2 && ((a + 1) & a) == 0) {
      res.note = "Zsigmondy exception: a + 1 is a power of two";
    } else {
      res.note = "empty outside the known exceptions (unexpected)";
    }
  }
  return res;
}

}  // namespace grrforge
