#pragma once

// Finite field contexts.
//
// Two kinds are supported:
//   * binary fields GF(2^f), 1 <= f <= 16, in the polynomial basis with the
//     lexicographically least irreducible reduction polynomial of degree f
//     (encoded as an integer whose bits are coefficients, e.g. f=3 -> 0b1011);
//   * prime fields GF(p) for odd primes p < 2^16 (control cases).
//
// A field element is its integer encoding in [0, q).  That encoding is also
// the wire format used by reports and matrix literals.

#include <memory>
#include <vector>

#include "grrforge/common.hpp"

namespace grrforge {

using Fe = u32;  // field element encoding, always < q

// ---- raw GF(2)[x] helpers -------------------------------------------------

inline int gf2_deg(u32 a) { return a ? 31 - __builtin_clz(a) : -1; }

inline u32 gf2_polymul_raw(u32 a, u32 b) {
  u32 r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

inline u32 gf2_polymod(u32 a, u32 m) {
  int dm = gf2_deg(m);
  for (int da = gf2_deg(a); da >= dm; da = gf2_deg(a)) a ^= m << (da - dm);
  return a;
}

// Irreducibility over GF(2) by exhaustive trial division: sufficient and
// exact for degrees up to 16.
inline bool gf2_irreducible(u32 r, int f) {
  if (gf2_deg(r) != f) return false;
  if (f == 1) return true;
  for (u32 d = 2; gf2_deg(d) <= f / 2; ++d) {
    if (gf2_polymod(r, d) == 0) return false;
  }
  return true;
}

inline u32 least_reduction_poly(int f) {
  for (u32 r = u32(1) << f; r < (u32(1) << (f + 1)); ++r) {
    if (gf2_irreducible(r, f)) return r;
  }
  throw DomainError("no irreducible polynomial found (unreachable)");
}

inline bool is_small_prime(u32 p) {
  if (p < 2) return false;
  for (u32 d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

// ---- field context ----------------------------------------------------------

enum class FieldKind { Binary, Prime };

class FieldCtx {
 public:
  static FieldCtx binary(int f) {
    if (f < 1 || f > 16) throw DomainError("binary field degree must be 1..16");
    FieldCtx c;
    c.kind_ = FieldKind::Binary;
    c.f_ = u32(f);
    c.q_ = u32(1) << f;
    c.red_ = least_reduction_poly(f);
    c.build_binary_tables();
    return c;
  }

  static FieldCtx prime(u32 p) {
    if (p < 3 || p >= (u32(1) << 16) || !is_small_prime(p))
      throw DomainError("prime field characteristic must be an odd prime below 2^16");
    FieldCtx c;
    c.kind_ = FieldKind::Prime;
    c.f_ = 1;
    c.q_ = p;
    c.red_ = 0;
    c.find_prime_generator();
    return c;
  }

  FieldKind kind() const { return kind_; }
  u32 q() const { return q_; }
  u32 degree() const { return f_; }
  u32 characteristic() const { return kind_ == FieldKind::Binary ? 2 : q_; }
  u32 reduction_poly() const { return red_; }
  Fe generator() const { return gen_; }
  bool is_binary() const { return kind_ == FieldKind::Binary; }

  // Bits needed to store one element; used by packed element encodings.
  u32 bits_per_entry() const {
    if (kind_ == FieldKind::Binary) return f_;
    u32 b = 0, v = q_ - 1;
    while (v) { ++b; v >>= 1; }
    return b;
  }

  std::string name() const {
    if (kind_ == FieldKind::Binary)
      return f_ == 1 ? std::string("gf(2)") : "gf(2^" + std::to_string(f_) + ")";
    return "gf(" + std::to_string(q_) + ")";
  }

  void check(Fe a) const {
    if (a >= q_) throw DomainError("field element out of range for " + name());
  }

  Fe add(Fe a, Fe b) const {
    return kind_ == FieldKind::Binary ? (a ^ b) : (a + b) % q_;
  }
  Fe neg(Fe a) const { return kind_ == FieldKind::Binary ? a : (q_ - a) % q_; }
  Fe sub(Fe a, Fe b) const { return add(a, neg(b)); }

  Fe mul(Fe a, Fe b) const {
    if (kind_ == FieldKind::Prime) return u32(u64(a) * b % q_);
    if (a == 0 || b == 0) return 0;
    return tab_->exp[tab_->log[a] + tab_->log[b]];
  }

  Fe inv(Fe a) const {
    if (a == 0) throw DomainError("inverse of zero");
    if (kind_ == FieldKind::Prime) return pow(a, q_ - 2);
    return tab_->exp[(q_ - 1) - tab_->log[a]];
  }

  Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }

  Fe pow(Fe a, u64 e) const {
    Fe r = 1, base = a;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  // The field Frobenius x -> x^char: squaring for binary fields, identity on
  // prime fields.
  Fe frobenius(Fe a) const {
    return kind_ == FieldKind::Binary ? mul(a, a) : a;
  }

  bool operator==(const FieldCtx& o) const {
    return kind_ == o.kind_ && q_ == o.q_ && red_ == o.red_;
  }
  bool operator!=(const FieldCtx& o) const { return !(*this == o); }

 private:
  struct Tables {
    std::vector<Fe> exp;  // size 2(q-1): exp[i] = g^i, doubled to skip a mod
    std::vector<u32> log; // size q: log[g^i] = i; log[0] unused
  };

  void build_binary_tables() {
    auto t = std::make_shared<Tables>();
    u32 order = q_ - 1;
    t->exp.assign(2 * order, 0);
    t->log.assign(q_, 0);
    if (q_ == 2) {
      gen_ = 1;
      t->exp = {1, 1};
      t->log[1] = 0;
      tab_ = std::move(t);
      return;
    }
    for (Fe g = 2; g < q_; ++g) {
      u32 v = 1;
      bool ok = true;
      for (u32 i = 0; i < order; ++i) {
        t->exp[i] = v;
        t->log[v] = i;
        v = gf2_polymod(gf2_polymul_raw(v, g), red_);
        if (v == 1 && i + 1 < order) { ok = false; break; }
      }
      if (ok && v == 1) {
        gen_ = g;
        for (u32 i = 0; i < order; ++i) t->exp[order + i] = t->exp[i];
        tab_ = std::move(t);
        return;
      }
    }
    throw DomainError("no multiplicative generator found (unreachable)");
  }

  void find_prime_generator() {
    u32 m = q_ - 1;
    std::vector<u32> pf;
    u32 v = m;
    for (u32 d = 2; d * d <= v; ++d) {
      if (v % d == 0) {
        pf.push_back(d);
        while (v % d == 0) v /= d;
      }
    }
    if (v > 1) pf.push_back(v);
    for (Fe g = 2; g < q_; ++g) {
      bool ok = true;
      for (u32 r : pf) {
        if (pow(g, m / r) == 1) { ok = false; break; }
      }
      if (ok) { gen_ = g; return; }
    }
    throw DomainError("no multiplicative generator found (unreachable)");
  }

  FieldKind kind_ = FieldKind::Binary;
  u32 f_ = 1, q_ = 2, red_ = 2;
  Fe gen_ = 1;
  std::shared_ptr<const Tables> tab_;
};

}  // namespace grrforge
