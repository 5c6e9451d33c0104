#pragma once

// Exact-rational probability lower bounds and the minimal-field thresholds.
//
// For each ledger row the master bound is
//     P(x) >= 1 - a(q)/i(G) - u(G) * b(q) / i(G),
// assembled from the ledger's exact closed forms, and the displayed bound is
// the row's published two-term (or one-term) relaxation
//     P(x) >= 1 - sum_i c_i q^{-d_i}.
// For every row except psl_4 the master terms match the displayed terms
// exactly once terms sharing an exponent are combined; for psl_4 the
// displayed form 1 - 5/q is a genuine relaxation that the master bound
// dominates from the row's side condition (q >= 4) onward.
//
// All arithmetic is big-rational: several thresholds are knife-edge (the
// psl_6 bound at q = 2^6 is exactly -1310723/4194304, about -0.3125) and the
// contract is exact reproduction, not approximation.

#include <optional>
#include <string>
#include <vector>

#include "grrforge/census.hpp"

namespace grrforge {

// The two subtracted master-bound terms a/i and u*b/i, evaluated at q.
struct MasterTerms {
  Rat subgroup_term;    // a(q) / i(G)
  Rat centralizer_term; // u(G) * b(q) / i(G)
};

inline MasterTerms master_terms(const BoundLedgerEntry& row, const Bi& q) {
  if (q < 2 || !is_power_of_two(q)) throw DomainError("master_terms: q must be a power of 2");
  Rat i = row.iG.eval(q);
  if (i <= 0) throw DomainError("master_terms: nonpositive i(G) (ledger defect)");
  MasterTerms t;
  t.subgroup_term = row.aQ.eval(q) / i;
  t.centralizer_term = row.uG_master.eval(q) * row.bQ.eval(q) / i;
  return t;
}

inline Rat master_lower(const BoundLedgerEntry& row, const Bi& q) {
  MasterTerms t = master_terms(row, q);
  return Rat(1) - t.subgroup_term - t.centralizer_term;
}

inline Rat master_lower(Family family, int n, const Bi& q) {
  return master_lower(ledger(family, n), q);
}

inline Rat displayed_lower(const BoundLedgerEntry& row, const Bi& q) {
  if (q < 2) throw DomainError("displayed_lower: q must be at least 2");
  Rat out = 1;
  for (const auto& [c, d] : row.displayed) out -= c / Rat(bi_pow(q, d));
  return out;
}

inline Rat displayed_lower(Family family, int n, const Bi& q) {
  return displayed_lower(ledger(family, n), q);
}

struct ProbabilityBound {
  Family family = Family::PSL;
  int n = 0;
  Bi q;
  Rat master;
  Rat displayed;
  bool positive = false;  // displayed > 0
};

inline ProbabilityBound probability_bound(Family family, int n, const Bi& q) {
  const BoundLedgerEntry& row = ledger(family, n);
  ProbabilityBound b;
  b.family = family;
  b.n = n;
  b.q = q;
  b.master = master_lower(row, q);
  b.displayed = displayed_lower(row, q);
  b.positive = b.displayed > 0;
  return b;
}

// Do the master terms reproduce the displayed terms exactly at this q?
// Terms are compared after combining by exponent: rows whose two master
// ratios share an exponent publish the combined coefficient (e.g. the
// sp_6 row displays 57/q = 7/q + 50/q).
inline bool master_matches_displayed(const BoundLedgerEntry& row, const Bi& q) {
  MasterTerms t = master_terms(row, q);
  Rat displayed_sum = 0;
  for (const auto& [c, d] : row.displayed) displayed_sum += c / Rat(bi_pow(q, d));
  if (row.displayed.size() == 2) {
    return t.subgroup_term == row.displayed[0].first / Rat(bi_pow(q, row.displayed[0].second)) &&
           t.centralizer_term == row.displayed[1].first / Rat(bi_pow(q, row.displayed[1].second));
  }
  return t.subgroup_term + t.centralizer_term == displayed_sum;
}

// Least q = 2^f, f in 1..64, with a strictly positive displayed bound.
inline Bi min_q_positive(const BoundLedgerEntry& row) {
  Bi q = 1;
  for (int f = 1; f <= 64; ++f) {
    q *= 2;
    if (displayed_lower(row, q) > 0) return q;
  }
  throw DomainError("no positive displayed bound up to 2^64 for row " + row.row_name());
}

inline Bi min_q_positive(Family family, int n) { return min_q_positive(ledger(family, n)); }

// The displayed bound 1 - sum c_i q^{-d_i} is strictly increasing in q as
// long as every coefficient is positive and every exponent is at least 1;
// this check makes that dominance explicit and verifies it numerically at
// every doubling step up to 2^64.
inline bool displayed_monotone_from(const BoundLedgerEntry& row, const Bi& q_start) {
  for (const auto& [c, d] : row.displayed)
    if (c <= 0 || d < 1) return false;
  Rat prev = displayed_lower(row, q_start);
  Bi q = q_start;
  while (q < (Bi(1) << 64)) {
    q *= 2;
    Rat cur = displayed_lower(row, q);
    if (cur <= prev) return false;
    prev = cur;
  }
  return true;
}

// Least f <= 64 with displayed bound above 1 - 2^{-10}: the explicit
// witness that the bound approaches 1.
inline std::optional<int> limit_witness_f(const BoundLedgerEntry& row) {
  Rat target = Rat(1) - Rat(1, 1024);
  Bi q = 1;
  for (int f = 1; f <= 64; ++f) {
    q *= 2;
    if (displayed_lower(row, q) > target) return f;
  }
  return std::nullopt;
}

struct ThresholdRow {
  Family family = Family::PSL;
  int n = 0;
  Bi published_min_q;
  Bi computed_min_q;
  bool match = false;
};

// The full threshold comparison, one row per ledger entry.
inline std::vector<ThresholdRow> thresholds() {
  std::vector<ThresholdRow> out;
  for (const BoundLedgerEntry& row : bound_ledger()) {
    ThresholdRow t;
    t.family = row.family;
    t.n = row.n;
    t.published_min_q = row.min_q;
    t.computed_min_q = min_q_positive(row);
    t.match = t.published_min_q == t.computed_min_q;
    out.push_back(t);
  }
  return out;
}

}  // namespace grrforge
