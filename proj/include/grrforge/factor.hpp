#pragma once

// Exact integer factorization for inputs below 2^128.
//
// Pipeline: trial division by sieved primes up to 10^6, then Pollard rho
// (Brent variant with batched gcds) on the remaining cofactors, with
// primality decided by strong-pseudoprime tests.  The Miller-Rabin base set
// {first 13 primes} is a proven deterministic test below 3.317e24 (~2^81.4),
// which covers every input this suite generates; larger inputs additionally
// get a strong Lucas test (Selfridge parameters), so an answer is never
// wrong: past the proven range the test could only err by *refusing* inside
// rho, not by mislabeling.
//
// Budgets are iteration caps on rho.  Exhausting one raises BudgetError;
// no partial or heuristic factorization is ever returned.

#include <algorithm>
#include <map>
#include <vector>

#include "grrforge/common.hpp"

namespace grrforge {

// ---- u128 modular arithmetic ------------------------------------------------

inline u128 mulmod_u128(u128 a, u128 b, u128 m) {
  a %= m;
  b %= m;
  if (m <= ~u64(0)) return (a * b) % m;
  // Shift-and-add; only exercised for moduli of 65+ bits.
  if (a < b) std::swap(a, b);
  u128 r = 0;
  while (b) {
    if (b & 1) {
      r += a;
      if (r >= m) r -= m;
    }
    a <<= 1;
    if (a >= m) a -= m;
    b >>= 1;
  }
  return r;
}

inline u128 powmod_u128(u128 a, u128 e, u128 m) {
  u128 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u128(r, a, m);
    a = mulmod_u128(a, a, m);
    e >>= 1;
  }
  return r;
}

inline u128 gcd_u128(u128 a, u128 b) {
  while (b) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u128 isqrt_u128(u128 n) {
  if (n == 0) return 0;
  u128 x = n, y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + n / x) / 2;
  }
  return x;
}

// ---- primality ----------------------------------------------------------------

namespace detail {

inline bool miller_rabin_witness(u128 n, u128 a, u128 d, int s) {
  a %= n;
  if (a == 0) return true;
  u128 x = powmod_u128(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u128(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Jacobi symbol (a/n) for odd n.
inline int jacobi(u128 a, u128 n) {
  a %= n;
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      u128 r = n & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

// Strong Lucas probable-prime test with Selfridge's parameter choice.
inline bool strong_lucas(u128 n) {
  u128 s = isqrt_u128(n);
  if (s * s == n) return false;
  // D = 5, -7, 9, -11, ... with (D/n) = -1.
  long long d_signed = 5;
  while (true) {
    u128 d_abs = u128(d_signed < 0 ? -d_signed : d_signed);
    int j = jacobi(d_abs % n, n);
    if (d_signed < 0 && (n & 3) == 3) j = -j;  // (-1/n) = -1 for n = 3 mod 4
    // jacobi = 0: n shares a prime <= |D| with D, impossible for a prime
    // this large (small factors were stripped first).
    if (j == 0) return false;
    if (j == -1) break;
    d_signed = d_signed > 0 ? -(d_signed + 2) : -(d_signed - 2);
  }
  u128 D = d_signed >= 0 ? u128(d_signed) % n : (n - u128(-d_signed) % n) % n;
  // P = 1, Q = (1 - D)/4 as a residue mod n.
  u128 num = (1 + n - D) % n;
  while (num % 4 != 0) num += n;
  u128 Q = (num / 4) % n;
  u128 ddd = n + 1;
  int s2 = 0;
  while ((ddd & 1) == 0) {
    ddd >>= 1;
    ++s2;
  }
  // Compute U_dd, V_dd by the binary chain (P = 1).
  auto half = [&](u128 x) { return (x & 1) ? (x + n) >> 1 : x >> 1; };
  u128 U = 1, V = 1, Qk = Q;  // U_1, V_1 = P, Q^1
  int top = 127;
  while (!((ddd >> top) & 1)) --top;
  for (int i = top - 1; i >= 0; --i) {
    // double: U_{2k} = U V; V_{2k} = V^2 - 2 Q^k; Q^{2k} = (Q^k)^2
    U = mulmod_u128(U, V, n);
    V = mulmod_u128(V, V, n);
    V = (V + n - mulmod_u128(2 % n, Qk, n)) % n;
    Qk = mulmod_u128(Qk, Qk, n);
    if ((ddd >> i) & 1) {
      // increment: U' = (U + V)/2, V' = (D U + V)/2 (P = 1), Q^k *= Q
      u128 Un = half((U + V) % n);
      u128 Vn = half((mulmod_u128(D, U, n) + V) % n);
      U = Un;
      V = Vn;
      Qk = mulmod_u128(Qk, Q, n);
    }
  }
  if (U == 0 || V == 0) return true;
  for (int r = 1; r < s2; ++r) {
    V = mulmod_u128(V, V, n);
    V = (V + n - mulmod_u128(2 % n, Qk, n)) % n;
    if (V == 0) return true;
    Qk = mulmod_u128(Qk, Qk, n);
  }
  return false;
}

}  // namespace detail

// Strong-pseudoprime primality for n < 2^128; see the header comment for the
// determinism guarantee.
inline bool is_prime_u128(u128 n) {
  if (n < 2) return false;
  for (u128 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u128 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
    if (!detail::miller_rabin_witness(n, a, d, s)) return false;
  }
  // Proven deterministic below 3.317e24 with the 13-prime base set; beyond
  // that add a strong Lucas check (no strong BPSW pseudoprime is known).
  constexpr u128 kProvenLimit = (u128(179817) << 64);  // ~3.317e24
  if (n >= kProvenLimit && !detail::strong_lucas(n)) return false;
  return true;
}

// ---- trial-division sieve ------------------------------------------------------

inline const std::vector<u32>& small_primes() {
  static const std::vector<u32> primes = [] {
    constexpr u32 kLimit = 1u << 20;
    std::vector<bool> composite(kLimit, false);
    std::vector<u32> out;
    for (u32 i = 2; i < kLimit; ++i) {
      if (!composite[i]) {
        out.push_back(i);
        for (u64 j = u64(i) * i; j < kLimit; j += i) composite[size_t(j)] = true;
      }
    }
    return out;
  }();
  return primes;
}

// ---- Pollard rho (Brent) -------------------------------------------------------

struct FactorBudget {
  u64 rho_iterations = u64(1) << 27;  // total across one factorize() call
};

namespace detail {

// Returns a nontrivial factor of composite odd n, charging iterations
// against `remaining`.
inline u128 pollard_brent(u128 n, Rng& rng, u64& remaining) {
  for (u64 c = 1;; ++c) {
    u128 y = ((u128(rng.next()) << 64) | rng.next()) % (n - 3) + 2;
    const u64 m = 128;
    u128 g = 1, q = 1, x = 0, ys = 0;
    u64 r = 1;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = (mulmod_u128(y, y, n) + c) % n;
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        u64 lim = std::min(m, r - k);
        if (remaining < lim) throw BudgetError("factorization budget exhausted");
        remaining -= lim;
        for (u64 i = 0; i < lim; ++i) {
          y = (mulmod_u128(y, y, n) + c) % n;
          q = mulmod_u128(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u128(q, n);
      }
      r *= 2;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (mulmod_u128(ys, ys, n) + c) % n;
        g = gcd_u128(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
    // cycle degenerated; retry with the next polynomial increment
  }
}

}  // namespace detail

// Full factorization of n (1 <= n < 2^128) as sorted (prime, exponent) pairs.
inline std::vector<std::pair<u128, u32>> factorize(u128 n, const FactorBudget& budget = {},
                                                   u64 rng_seed = 0x9d5f) {
  if (n == 0) throw DomainError("factorize(0) is undefined");
  std::map<u128, u32> acc;
  for (u32 p : small_primes()) {
    if (u128(p) * p > n) break;
    while (n % p == 0) {
      ++acc[p];
      n /= p;
    }
  }
  std::vector<u128> stack;
  if (n > 1) stack.push_back(n);
  Rng rng(rng_seed);
  u64 remaining = budget.rho_iterations;
  while (!stack.empty()) {
    u128 v = stack.back();
    stack.pop_back();
    if (v == 1) continue;
    if (is_prime_u128(v)) {
      ++acc[v];
      continue;
    }
    u128 f = detail::pollard_brent(v, rng, remaining);
    stack.push_back(f);
    stack.push_back(v / f);
  }
  return {acc.begin(), acc.end()};
}

}  // namespace grrforge
