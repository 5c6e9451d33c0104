#pragma once

// Exact involution censuses for GL_n(q) in characteristic 2, and the bound
// ledger used by the probability estimates.
//
// Every involution of GL_n(q), q even, is conjugate to exactly one block
// unipotent involution j_ell (identity plus a lower-left identity block of
// size ell), 1 <= ell <= n/2.  Its centralizer order has the closed form
//   q^{ell(2n-3ell)} * |GL_ell(q)| * |GL_{n-2ell}(q)|,
// so the involution count is an exact sum of index values -- no conjugacy
// enumeration needed.  For even q the involutions of SL_n(q) and GL_n(q)
// coincide (unipotent elements have determinant 1).
//
// The bound ledger stores, for each of the eleven group rows covered by the
// probability theorems, the exact closed forms (Laurent polynomials in q,
// kept as rational coefficient / exponent pairs): the normalizer order
// |N_G(<x>)|, the involution-count lower bound i(G), the conjugate-involution
// count bound u(G), the maximal-subgroup involution bound a(q), and the
// centralizer involution bound b(q), together with the displayed probability
// bound's subtracted terms and the published minimal field size.  Everything
// evaluates in exact big-rational arithmetic; no floating point.

#include <string>
#include <vector>

#include "grrforge/common.hpp"
#include "grrforge/group.hpp"

namespace grrforge {

inline bool is_power_of_two(const Bi& q) {
  if (q < 1) return false;
  Bi v = q;
  while (v % 2 == 0) v /= 2;
  return v == 1;
}

inline Bi bi_pow(const Bi& base, u32 e) { return boost::multiprecision::pow(base, e); }

// |GL_n(q)| = prod_{i=0}^{n-1} (q^n - q^i); |GL_0(q)| = 1.
inline Bi gl_order(int n, const Bi& q) {
  if (n < 0) throw DomainError("gl_order: negative dimension");
  if (q < 2) throw DomainError("gl_order: field size must be at least 2");
  Bi qn = bi_pow(q, u32(n));
  Bi out = 1;
  for (int i = 0; i < n; ++i) out *= qn - bi_pow(q, u32(i));
  return out;
}

// Centralizer order of the block involution j_ell in GL_n(q), q even.
inline Bi gl_centralizer_order(int n, int ell, const Bi& q) {
  if (n < 2) throw DomainError("gl_centralizer_order: dimension must be at least 2");
  if (ell < 1 || 2 * ell > n)
    throw DomainError("gl_centralizer_order: block size must satisfy 1 <= ell <= n/2");
  if (!is_power_of_two(q) || q < 2)
    throw DomainError("gl_centralizer_order: q must be a power of 2");
  return bi_pow(q, u32(ell * (2 * n - 3 * ell))) * gl_order(ell, q) * gl_order(n - 2 * ell, q);
}

struct InvolutionClassInfo {
  int n = 0;
  int ell = 0;
  Bi q;
  Bi centralizer_order;
  Bi class_size;
};

// One row per conjugacy class of involutions in GL_n(q), q even.
inline std::vector<InvolutionClassInfo> involution_classes(int n, const Bi& q) {
  if (n < 2) throw DomainError("involution_classes: dimension must be at least 2");
  Bi g = gl_order(n, q);
  std::vector<InvolutionClassInfo> rows;
  for (int ell = 1; 2 * ell <= n; ++ell) {
    InvolutionClassInfo row;
    row.n = n;
    row.ell = ell;
    row.q = q;
    row.centralizer_order = gl_centralizer_order(n, ell, q);
    if (g % row.centralizer_order != 0)
      throw DomainError("involution class size is not integral (formula defect)");
    row.class_size = g / row.centralizer_order;
    rows.push_back(row);
  }
  return rows;
}

namespace detail {
// Class-size sum over all ell; valid for any n >= 1 (zero for n = 1).
inline Bi involution_class_sum(int n, const Bi& q) {
  if (n == 1) return 0;
  Bi total = 0;
  for (const InvolutionClassInfo& row : involution_classes(n, q)) total += row.class_size;
  return total;
}
}  // namespace detail

// Exact involution count of GL_n(q) for even n and even q.  For even q this
// also equals i_2(SL_n(q)): involutions are unipotent, hence of determinant 1.
inline Bi i2_gl_exact(int n, const Bi& q) {
  if (n < 2 || n % 2 != 0) throw DomainError("i2_gl_exact: n must be even and at least 2");
  if (!is_power_of_two(q) || q < 2) throw DomainError("i2_gl_exact: q must be a power of 2");
  return detail::involution_class_sum(n, q);
}

// Upper bound for the number of involutions commuting with the maximal block
// involution j_{n/2} in SL_n(q), q even:
//   i_2(SL_{n/2}(q)) * q^{n^2/4 - (n-2)} + q^{n^2/4}.
inline Bi centralizer_involution_ceiling(int n, const Bi& q) {
  if (n < 4 || n % 2 != 0)
    throw DomainError("centralizer_involution_ceiling: n must be even and at least 4");
  if (!is_power_of_two(q) || q < 2)
    throw DomainError("centralizer_involution_ceiling: q must be a power of 2");
  u32 quarter = u32(n * n / 4);
  return detail::involution_class_sum(n / 2, q) * bi_pow(q, quarter - u32(n - 2)) +
         bi_pow(q, quarter);
}

// ---- bound ledger ---------------------------------------------------------

// A Laurent polynomial in q with exact rational coefficients, optionally
// divided by gcd(6, q - 1) after evaluation (used by one normalizer form).
struct LaurentForm {
  std::vector<std::pair<Rat, int>> terms;  // (coefficient, exponent of q)
  bool divide_by_gcd6 = false;

  Rat eval(const Bi& q) const {
    Rat out = 0;
    for (const auto& [c, e] : terms) {
      if (e >= 0)
        out += c * Rat(bi_pow(q, u32(e)));
      else
        out += c / Rat(bi_pow(q, u32(-e)));
    }
    if (divide_by_gcd6) out /= Rat(boost::multiprecision::gcd(Bi(6), Bi(q - 1)));
    return out;
  }

  std::string str() const {
    std::string s;
    bool first = true;
    for (const auto& [c, e] : terms) {
      Rat a = c;
      if (first) {
        if (a < 0) {
          s += "-";
          a = -a;
        }
      } else {
        s += (a < 0) ? " - " : " + ";
        if (a < 0) a = -a;
      }
      first = false;
      bool unit_coeff = (a == 1) && (e != 0);
      if (!unit_coeff) {
        if (boost::multiprecision::denominator(a) == 1)
          s += boost::multiprecision::numerator(a).str();
        else
          s += "(" + boost::multiprecision::numerator(a).str() + "/" +
               boost::multiprecision::denominator(a).str() + ")";
      }
      if (e != 0) {
        if (!unit_coeff) s += "*";
        s += (e == 1) ? "q" : "q^" + std::to_string(e);
      }
    }
    if (s.empty()) s = "0";
    if (divide_by_gcd6) s = "(" + s + ")/gcd(6, q-1)";
    return s;
  }
};

// The subtracted terms of a displayed probability bound 1 - sum c_i q^{-d_i},
// stored as (c_i, d_i) with every d_i >= 1.
using DisplayedTerms = std::vector<std::pair<Rat, u32>>;

struct BoundLedgerEntry {
  Family family = Family::PSL;
  int n = 0;
  int e = 0;                 // exponent of the primitive-prime-divisor order
  LaurentForm normalizer;    // |N_G(<x>)|
  LaurentForm iG;            // involution-count lower bound i(G)
  LaurentForm uG;            // conjugate-involution bound u(G) (table form)
  LaurentForm uG_refined;    // sharper u(G) where one exists (else empty)
  LaurentForm uG_master;     // the form used in the master bound assembly
  LaurentForm aQ;            // maximal-subgroup involution bound a(q)
  LaurentForm bQ;            // centralizer involution bound b(q)
  DisplayedTerms displayed;  // subtracted terms of the displayed bound
  Bi min_q;                  // published least q = 2^f with a positive bound
  Bi condition_min_q;        // the row's side condition: q >= this, q even

  std::string row_name() const { return family_name(family) + "_" + std::to_string(n); }
};

inline const std::vector<BoundLedgerEntry>& bound_ledger() {
  static const std::vector<BoundLedgerEntry> rows = [] {
    auto mono = [](const Rat& c, int e) { return LaurentForm{{{c, e}}, false}; };
    auto none = [] { return LaurentForm{}; };
    std::vector<BoundLedgerEntry> v;

    // Linear rows.  Normalizers are (n/gcd)*(q^n - 1)/(q - 1) expanded as
    // geometric sums; i(G) for dimension 4 is the only non-monomial i(G).
    {
      BoundLedgerEntry r;
      r.family = Family::PSL;
      r.n = 4;
      r.e = 4;
      r.normalizer = LaurentForm{{{4, 3}, {4, 2}, {4, 1}, {4, 0}}, false};
      r.iG = LaurentForm{{{1, 8}, {-1, 5}}, false};
      r.uG = mono(22, 3);
      r.uG_refined = LaurentForm{{{1, 3}, {2, 2}, {1, 1}, {2, 0}}, false};  // (q^2+1)(q+2)
      r.uG_master = mono(Rat(13, 8), 3);
      r.aQ = mono(Rat(3, 2), 7);
      r.bQ = mono(2, 4);
      r.displayed = {{5, 1}};
      r.min_q = 8;
      r.condition_min_q = 4;
      v.push_back(r);
    }
    {
      BoundLedgerEntry r;
      r.family = Family::PSL;
      r.n = 6;
      r.e = 6;
      r.normalizer =
          LaurentForm{{{6, 5}, {6, 4}, {6, 3}, {6, 2}, {6, 1}, {6, 0}}, true};
      r.iG = mono(Rat(1, 2), 18);
      r.uG = mono(32, 5);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(6, 14);
      r.bQ = mono(Rat(21, 16), 12);
      r.displayed = {{12, 4}, {84, 1}};
      r.min_q = 128;
      r.condition_min_q = 4;
      v.push_back(r);
    }
    {
      BoundLedgerEntry r;
      r.family = Family::PSL;
      r.n = 8;
      r.e = 8;
      r.normalizer = LaurentForm{
          {{8, 7}, {8, 6}, {8, 5}, {8, 4}, {8, 3}, {8, 2}, {8, 1}, {8, 0}}, false};
      r.iG = mono(Rat(1, 2), 32);
      r.uG = mono(64, 7);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(6, 23);
      r.bQ = mono(Rat(21, 16), 20);
      r.displayed = {{12, 9}, {168, 5}};
      r.min_q = 4;
      r.condition_min_q = 2;
      v.push_back(r);
    }

    // Symplectic rows.
    {
      BoundLedgerEntry r;
      r.family = Family::Sp;
      r.n = 6;
      r.e = 6;
      r.normalizer = LaurentForm{{{6, 3}, {6, 0}}, false};
      r.iG = mono(1, 12);
      r.uG = mono(25, 3);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(7, 11);
      r.bQ = mono(2, 8);
      r.displayed = {{57, 1}};
      r.min_q = 64;
      r.condition_min_q = 4;
      v.push_back(r);
    }
    {
      BoundLedgerEntry r;
      r.family = Family::Sp;
      r.n = 8;
      r.e = 8;
      r.normalizer = LaurentForm{{{8, 4}, {8, 0}}, false};
      r.iG = mono(1, 20);
      r.uG = mono(34, 4);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(8, 16);
      r.bQ = mono(2, 14);
      r.displayed = {{8, 4}, {68, 2}};
      r.min_q = 16;
      r.condition_min_q = 2;
      v.push_back(r);
    }

    // Plus-type orthogonal rows.  Normalizers (n/2 + 2)(q^{n/2 - 1} + 1)(q + 1).
    {
      BoundLedgerEntry r;
      r.family = Family::OmegaPlus;
      r.n = 8;
      r.e = 6;
      r.normalizer = LaurentForm{{{6, 4}, {6, 3}, {6, 1}, {6, 0}}, false};
      r.iG = mono(Rat(1, 2), 16);
      r.uG = mono(61, 4);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(12, 13);
      r.bQ = mono(2, 10);
      r.displayed = {{24, 3}, {244, 2}};
      r.min_q = 16;
      r.condition_min_q = 4;
      v.push_back(r);
    }
    {
      BoundLedgerEntry r;
      r.family = Family::OmegaPlus;
      r.n = 10;
      r.e = 8;
      r.normalizer = LaurentForm{{{8, 5}, {8, 4}, {8, 1}, {8, 0}}, false};
      r.iG = mono(Rat(1, 2), 24);
      r.uG = mono(102, 5);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(10, 21);
      r.bQ = mono(3, 17);
      r.displayed = {{20, 3}, {612, 2}};
      r.min_q = 32;
      r.condition_min_q = 2;
      v.push_back(r);
    }
    {
      BoundLedgerEntry r;
      r.family = Family::OmegaPlus;
      r.n = 12;
      r.e = 10;
      r.normalizer = LaurentForm{{{10, 6}, {10, 5}, {10, 1}, {10, 0}}, false};
      r.iG = mono(Rat(1, 2), 36);
      r.uG = mono(124, 6);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(10, 31);
      r.bQ = mono(3, 24);
      r.displayed = {{20, 5}, {744, 6}};
      r.min_q = 4;
      r.condition_min_q = 2;
      v.push_back(r);
    }

    // Minus-type orthogonal rows.  Normalizers (n/2)(q^{n/2} + 1).
    {
      BoundLedgerEntry r;
      r.family = Family::OmegaMinus;
      r.n = 8;
      r.e = 8;
      r.normalizer = LaurentForm{{{4, 4}, {4, 0}}, false};
      r.iG = mono(Rat(1, 2), 16);
      r.uG = mono(34, 4);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(3, 8);
      r.bQ = mono(3, 9);
      r.displayed = {{6, 8}, {204, 3}};
      r.min_q = 8;
      r.condition_min_q = 2;
      v.push_back(r);
    }
    {
      BoundLedgerEntry r;
      r.family = Family::OmegaMinus;
      r.n = 10;
      r.e = 10;
      r.normalizer = LaurentForm{{{5, 5}, {5, 0}}, false};
      r.iG = mono(Rat(1, 2), 24);
      r.uG = mono(42, 5);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(6, 15);
      r.bQ = mono(3, 15);
      r.displayed = {{12, 9}, {252, 4}};
      r.min_q = 4;
      r.condition_min_q = 2;
      v.push_back(r);
    }
    {
      BoundLedgerEntry r;
      r.family = Family::OmegaMinus;
      r.n = 12;
      r.e = 12;
      r.normalizer = LaurentForm{{{6, 6}, {6, 0}}, false};
      r.iG = mono(Rat(1, 2), 36);
      r.uG = mono(49, 6);
      r.uG_refined = none();
      r.uG_master = r.uG;
      r.aQ = mono(4, 18);
      r.bQ = mono(5, 22);
      r.displayed = {{8, 18}, {490, 8}};
      r.min_q = 4;
      r.condition_min_q = 2;
      v.push_back(r);
    }
    return v;
  }();
  return rows;
}

inline const BoundLedgerEntry& ledger(Family family, int n) {
  for (const BoundLedgerEntry& r : bound_ledger())
    if (r.family == family && r.n == n) return r;
  throw DomainError("no bound ledger row for " + family_name(family) + "_" + std::to_string(n));
}

// Does the exact linear-group census dominate the ledger's i(G) value?
struct InvolutionFloorReport {
  int n = 0;
  Bi q;
  Bi exact;        // i2_gl_exact(n, q)
  Rat floor_iG;    // the ledger's i(G) evaluated at q
  bool holds = false;             // exact >= floor
  bool within_condition = false;  // q satisfies the row's side condition
};

inline InvolutionFloorReport check_involution_floor(int n, const Bi& q) {
  const BoundLedgerEntry& row = ledger(Family::PSL, n);
  InvolutionFloorReport rep;
  rep.n = n;
  rep.q = q;
  rep.exact = i2_gl_exact(n, q);
  rep.floor_iG = row.iG.eval(q);
  rep.holds = Rat(rep.exact) >= rep.floor_iG;
  rep.within_condition = q >= row.condition_min_q;
  return rep;
}

}  // namespace grrforge
