#pragma once

// GRR certification and searches.
//
// A Cayley graph Cay(G, S) is a graphical regular representation of G when
// its full automorphism group is exactly the right-regular copy of G, i.e.
// |Aut(Cay(G, S))| = |G| with S generating.  Certification runs the
// automorphism engine seeded with right translations (known automorphisms,
// so the top-level orbit is free) and, when only the yes/no answer matters,
// aborts as soon as the order provably exceeds |G|.
//
// Searches cover the two cubic shapes: mixed connection sets {x, x^-1, y}
// with x of order greater than two and y an involution (x taken up to
// inversion, which halves the sweep without losing any graph), and sets of
// three distinct involutions taken as unordered triples.  A completed sweep
// with no witness is a certification of absence; a budget stop is reported
// as incomplete, never as absence.
//
// The empirical probability estimator returns the exact fraction of
// involutions y making Cay(G, {x, x^-1, y}) a GRR (exhaustive mode) or a
// sampled fraction with a 95% Wilson confidence interval.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include "grrforge/aut.hpp"
#include "grrforge/graph.hpp"
#include "grrforge/ppd.hpp"
#include "grrforge/table.hpp"

namespace grrforge {

struct GrrBudget {
  u64 aut_nodes = 200'000'000;
  u64 wall_ms = 0;  // per certification; 0 = unlimited
};

struct GrrVerdict {
  std::vector<u32> connection;  // table indices, ascending
  bool generates = false;
  bool known = true;      // false: budget exhausted, verdict unknown
  bool is_grr = false;    // meaningful only when known
  Bi aut_order = 0;       // exact if aut_exact, else a proven lower bound
  bool aut_exact = false;
  u64 aut_nodes = 0;
  double elapsed_ms = 0;
};

namespace detail {
// Right translations v -> v*g for the table's generators: automorphisms of
// every Cayley graph on the table, jointly transitive.
inline std::vector<std::vector<u32>> right_translation_seeds(const ElementTable& t) {
  std::vector<std::vector<u32>> seeds;
  for (u32 g : t.generator_indices()) {
    std::vector<u32> rho(t.size());
    for (u32 v = 0; v < t.size(); ++v) rho[v] = t.mul(v, g);
    seeds.push_back(std::move(rho));
  }
  return seeds;
}
}  // namespace detail

// Certifies whether Cay(G, S) is a GRR.  With early_abort the automorphism
// order is reported as a lower bound once it provably exceeds |G| (the
// verdict is still certain); without it the exact order is computed.
inline GrrVerdict certify_connection(const ElementTable& t, const std::vector<u32>& connection,
                                     const GrrBudget& budget = {}, bool early_abort = true) {
  auto start = std::chrono::steady_clock::now();
  CayleyGraph cay = build_cayley(t, connection);
  GrrVerdict v;
  v.connection = cay.connection;
  v.generates = t.generates(cay.connection);
  if (v.generates) {
    AutOptions opt;
    opt.node_budget = budget.aut_nodes;
    opt.wall_ms = budget.wall_ms;
    opt.seeds = detail::right_translation_seeds(t);
    if (early_abort) opt.abort_over_threshold = Bi(t.size());
    try {
      AutResult res = aut_order(cay.graph, opt);
      v.aut_order = res.order;
      v.aut_exact = res.exact;
      v.aut_nodes = res.nodes;
      v.known = true;
      v.is_grr = res.exact && res.order == Bi(t.size());
      if (!res.exact && res.order <= Bi(t.size()))
        throw DomainError("early abort returned a bound not above |G| (engine defect)");
    } catch (const BudgetError&) {
      v.known = false;
      v.is_grr = false;
    }
  } else {
    // Not generating: not a GRR by definition; the (disconnected) graph's
    // automorphism order is irrelevant and is not computed.
    v.known = true;
    v.is_grr = false;
  }
  v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                     .count();
  return v;
}

// Mixed-shape certification for S = {x, x^-1, y}.
inline GrrVerdict certify_mixed(const ElementTable& t, u32 x, u32 y, const GrrBudget& budget = {},
                                bool early_abort = true) {
  if (t.order_of(y) != 2) throw DomainError("y must be an involution");
  u64 xo = t.order_of(x);
  if (xo <= 2) throw DomainError("x must have order greater than 2");
  return certify_connection(t, {x, t.inverse(x), y}, budget, early_abort);
}

enum class SearchShape { Mixed, ThreeInvolutions };

struct SearchOutcome {
  SearchShape shape = SearchShape::Mixed;
  bool complete = false;     // the whole sweep ran within budget
  u64 candidates = 0;        // connection sets certified
  u64 unknown = 0;           // certifications lost to the budget
  std::vector<std::vector<u32>> witnesses;  // connection sets with is_grr
};

// Sweeps every admissible connection set of the given shape.  Mixed shape:
// x over order > 2 elements with index(x) <= index(x^-1), y over all
// involutions.  Three-involution shape: unordered triples of distinct
// involutions.  Returns all witnesses, or a certified-empty outcome when
// complete and witness-free.
inline SearchOutcome exhaustive_grr_search(const ElementTable& t, SearchShape shape,
                                           const GrrBudget& budget = {},
                                           bool stop_at_first = false) {
  SearchOutcome out;
  out.shape = shape;
  const auto& invs = t.involutions();
  if (shape == SearchShape::Mixed) {
    for (u32 x = 0; x < t.size(); ++x) {
      u32 xi = t.inverse(x);
      if (xi < x) continue;  // inversion representative
      if (xi == x) continue; // involution or identity: not the mixed shape
      for (u32 y : invs) {
        GrrVerdict v = certify_connection(t, {x, xi, y}, budget, true);
        ++out.candidates;
        if (!v.known) ++out.unknown;
        if (v.known && v.is_grr) {
          out.witnesses.push_back(v.connection);
          if (stop_at_first) {
            out.complete = true;  // existence is decided
            return out;
          }
        }
      }
    }
  } else {
    u32 m = u32(invs.size());
    for (u32 a = 0; a < m; ++a)
      for (u32 b = a + 1; b < m; ++b)
        for (u32 c = b + 1; c < m; ++c) {
          GrrVerdict v = certify_connection(t, {invs[a], invs[b], invs[c]}, budget, true);
          ++out.candidates;
          if (!v.known) ++out.unknown;
          if (v.known && v.is_grr) {
            out.witnesses.push_back(v.connection);
            if (stop_at_first) {
              out.complete = true;
              return out;
            }
          }
        }
  }
  out.complete = (out.unknown == 0);
  return out;
}

// Fixed-x sweep over involutions y; used by the positive controls and the
// search subcommand.
inline SearchOutcome grr_search_for_x(const ElementTable& t, u32 x, const GrrBudget& budget = {},
                                      bool stop_at_first = true) {
  if (t.order_of(x) <= 2) throw DomainError("x must have order greater than 2");
  SearchOutcome out;
  out.shape = SearchShape::Mixed;
  u32 xi = t.inverse(x);
  for (u32 y : t.involutions()) {
    GrrVerdict v = certify_connection(t, {x, xi, y}, budget, true);
    ++out.candidates;
    if (!v.known) ++out.unknown;
    if (v.known && v.is_grr) {
      out.witnesses.push_back(v.connection);
      if (stop_at_first) {
        out.complete = true;
        return out;
      }
    }
  }
  out.complete = (out.unknown == 0);
  return out;
}

struct EstimateResult {
  bool exhaustive = true;
  u64 hits = 0;    // certified GRRs
  u64 trials = 0;  // involutions examined (i_2(G) in exhaustive mode)
  u64 unknown = 0;
  Rat fraction{0};
  double wilson_low = 0, wilson_high = 0;  // sample mode only (95%)
};

// Exact P(x): the fraction of involutions y with Cay(G, {x, x^-1, y}) a GRR.
inline EstimateResult estimate_p_exhaustive(const ElementTable& t, u32 x,
                                            const GrrBudget& budget = {}) {
  u64 xo = t.order_of(x);
  if (xo % 2 == 0) throw DomainError("x must have odd order");
  if (xo <= 2) throw DomainError("x must have order greater than 2");
  EstimateResult r;
  u32 xi = t.inverse(x);
  for (u32 y : t.involutions()) {
    GrrVerdict v = certify_connection(t, {x, xi, y}, budget, true);
    ++r.trials;
    if (!v.known)
      ++r.unknown;
    else if (v.is_grr)
      ++r.hits;
  }
  if (r.unknown > 0) throw BudgetError("estimate incomplete: " + std::to_string(r.unknown) +
                                       " certifications exceeded the budget");
  r.fraction = r.trials ? Rat(r.hits, r.trials) : Rat(0);
  return r;
}

// Sampled P(x) over N uniform involutions with a 95% Wilson interval.
inline EstimateResult estimate_p_sample(const ElementTable& t, u32 x, u64 n, Rng& rng,
                                        const GrrBudget& budget = {}) {
  if (n == 0) throw DomainError("sample size must be positive");
  u64 xo = t.order_of(x);
  if (xo % 2 == 0) throw DomainError("x must have odd order");
  if (xo <= 2) throw DomainError("x must have order greater than 2");
  EstimateResult r;
  r.exhaustive = false;
  u32 xi = t.inverse(x);
  for (u64 i = 0; i < n; ++i) {
    u32 y = t.sample_involution(rng);
    GrrVerdict v = certify_connection(t, {x, xi, y}, budget, true);
    ++r.trials;
    if (!v.known)
      ++r.unknown;
    else if (v.is_grr)
      ++r.hits;
  }
  if (r.unknown > 0) throw BudgetError("estimate incomplete: " + std::to_string(r.unknown) +
                                       " certifications exceeded the budget");
  r.fraction = Rat(r.hits, r.trials);
  double z = 1.959963984540054;  // 97.5th percentile of the standard normal
  double nn = double(r.trials), ph = double(r.hits) / nn, z2 = z * z;
  double denom = 1.0 + z2 / nn;
  double center = (ph + z2 / (2 * nn)) / denom;
  double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / denom;
  r.wilson_low = std::max(0.0, center - half);
  r.wilson_high = std::min(1.0, center + half);
  return r;
}

// An element whose order is a primitive prime divisor of p^(e*f) - 1, where
// q = p^f is the table's field and e the family's exponent.  Scans the table
// and prefers the largest such prime; among equals, the element of smallest
// index.  Empty when the Zsigmondy set is empty (e.g. six-dimensional
// symplectic groups over GF(2), where ppd(2, 6) is exceptional).
struct PpdElement {
  u32 index = 0;
  Bi prime = 0;
  u32 m = 0;  // the exponent e*f
  bool found = false;
  bool exceptional = false;  // the ppd set itself is empty
};

inline PpdElement find_ppd_element(const ElementTable& t) {
  const GroupSpec& spec = t.spec();
  if (spec.family == Family::Perm)
    throw DomainError("primitive-prime-divisor orders are not defined for permutation specs");
  u64 p = spec.field.is_binary() ? 2 : spec.field.q();
  u32 f = spec.field.is_binary() ? spec.field.degree() : 1;
  PpdElement out;
  out.m = u32(spec_e(spec)) * f;
  PpdResult ppd = ppd_set(p, out.m);
  if (ppd.primes.empty()) {
    out.exceptional = true;
    return out;
  }
  for (auto it = ppd.primes.rbegin(); it != ppd.primes.rend(); ++it) {
    const Bi& r = *it;
    for (u32 v = 0; v < t.size(); ++v) {
      if (Bi(t.order_of(v)) == r) {
        out.index = v;
        out.prime = r;
        out.found = true;
        return out;
      }
    }
  }
  return out;
}

}  // namespace grrforge
