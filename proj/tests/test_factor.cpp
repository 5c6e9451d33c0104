#include <catch2/catch_amalgamated.hpp>

#include "grrforge/factor.hpp"

using namespace grrforge;

namespace {

// Independent probable-prime oracle for verification: plain Miller-Rabin
// over 24 pseudo-randomly chosen bases (error probability < 4^-24 per call,
// and every value it checks here is also pinned by an exact product check).
bool oracle_probable_prime(u128 n) {
  if (n < 2) return false;
  for (u32 p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  Rng rng(0x5eed);
  for (int t = 0; t < 24; ++t) {
    u128 a = (2 + rng.next() % 1000003) % n;
    if (a < 2) continue;
    u128 x = powmod_u128(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u128(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

u128 parse_u128(const std::string& s) {
  u128 v = 0;
  for (char c : s) v = v * 10 + u128(c - '0');
  return v;
}

}  // namespace

TEST_CASE("modular arithmetic survives 128-bit operands") {
  u128 m = (u128(0xffffffffffffffffULL) << 40) | 0x12345;
  REQUIRE(mulmod_u128(m - 1, m - 1, m) == 1);  // (-1)^2 = 1
  REQUIRE(powmod_u128(2, 128, (u128(1) << 127)) == 0);
  REQUIRE(powmod_u128(3, 0, 7) == 1);
  REQUIRE(gcd_u128(u128(1) << 100, u128(1) << 77) == (u128(1) << 77));
  for (u64 n : {0ull, 1ull, 2ull, 3ull, 4ull, 15ull, 16ull, 17ull, 1000000007ull}) {
    u128 r = isqrt_u128(n);
    REQUIRE(r * r <= n);
    REQUIRE((r + 1) * (r + 1) > n);
  }
}

TEST_CASE("primality: known primes and known liars") {
  REQUIRE(is_prime_u128(2));
  REQUIRE(is_prime_u128(3));
  REQUIRE(is_prime_u128(65537));
  REQUIRE(is_prime_u128((u128(1) << 61) - 1));   // Mersenne
  REQUIRE(is_prime_u128((u128(1) << 89) - 1));   // Mersenne
  REQUIRE(is_prime_u128(4294967311ull));
  REQUIRE(!is_prime_u128(0));
  REQUIRE(!is_prime_u128(1));
  REQUIRE(!is_prime_u128(341));          // Fermat pseudoprime base 2
  REQUIRE(!is_prime_u128(561));          // Carmichael
  REQUIRE(!is_prime_u128(3215031751ull)); // strong pseudoprime to bases 2,3,5,7
  REQUIRE(!is_prime_u128(u128(3215031751ull) * 3215031751ull));
  // Exhaustive cross-check against a sieve on a small window.
  const auto& primes = small_primes();
  size_t idx = 0;
  for (u32 n = 0; n < 20000; ++n) {
    bool in_sieve = false;
    while (idx < primes.size() && primes[idx] < n) ++idx;
    in_sieve = idx < primes.size() && primes[idx] == n;
    REQUIRE(is_prime_u128(n) == in_sieve);
  }
}

TEST_CASE("factorize matches frozen factorizations") {
  auto fac = [](u128 n) { return factorize(n); };

  auto f1 = fac(600851475143ull);
  REQUIRE(f1 == std::vector<std::pair<u128, u32>>{{71, 1}, {839, 1}, {1471, 1}, {6857, 1}});

  auto f2 = fac((u128(1) << 64) - 1);
  REQUIRE(f2 == std::vector<std::pair<u128, u32>>{
                    {3, 1}, {5, 1}, {17, 1}, {257, 1}, {641, 1}, {65537, 1}, {6700417, 1}});

  auto f3 = fac(1024);
  REQUIRE(f3 == std::vector<std::pair<u128, u32>>{{2, 10}});

  auto f4 = fac(1);
  REQUIRE(f4.empty());

  // 2^101 - 1 = 7432339208719 * 341117531003194129
  auto f5 = fac((u128(1) << 101) - 1);
  REQUIRE(f5 == std::vector<std::pair<u128, u32>>{
                    {7432339208719ull, 1}, {parse_u128("341117531003194129"), 1}});

  REQUIRE_THROWS_AS(factorize(0), DomainError);
}

TEST_CASE("factorize randomized: products reassemble and parts are prime") {
  Rng rng(0xfac70);
  for (int t = 0; t < 200; ++t) {
    u128 n = (u128(rng.next() % 0xffffffffffull)) + 2;
    auto f = factorize(n);
    u128 prod = 1;
    for (auto& [p, e] : f) {
      REQUIRE(oracle_probable_prime(p));
      for (u32 i = 0; i < e; ++i) prod *= p;
    }
    REQUIRE(prod == n);
    for (size_t i = 1; i < f.size(); ++i) REQUIRE(f[i - 1].first < f[i].first);
  }
  // A couple of 128-bit composites with safely findable factors.
  u128 a = u128(1000000007ull) * 1000000009ull;  // ~10^18
  u128 b = a * 999999937ull;                     // ~10^27
  auto fb = factorize(b);
  u128 prod = 1;
  for (auto& [p, e] : fb)
    for (u32 i = 0; i < e; ++i) prod *= p;
  REQUIRE(prod == b);
  REQUIRE(fb.size() == 3);
}

TEST_CASE("factorization budget exhausts loudly, never wrongly") {
  FactorBudget tiny;
  tiny.rho_iterations = 4;
  // Semiprime with both factors beyond the trial-division bound.
  u128 hard = u128(2147483647ull) * 2147483629ull;
  REQUIRE_THROWS_AS(factorize(hard, tiny), BudgetError);
  FactorBudget normal;
  auto f = factorize(hard, normal);
  REQUIRE(f == std::vector<std::pair<u128, u32>>{{2147483629ull, 1}, {2147483647ull, 1}});
}
