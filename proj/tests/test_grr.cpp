// GRR certification, the exhaustive searches, and the probability estimator.
//
// The oracle here is an independent vertex-stabilizer backtracker: a Cayley
// graph on G is a GRR exactly when its connection set generates and no
// non-identity automorphism fixes the identity vertex (right translations
// are transitive, so |Aut| = |G| * |stabilizer|).  The backtracker shares no
// code with the engine — it enumerates images vertex by vertex in
// breadth-first order, checking adjacency against everything already mapped.

#include <catch2/catch_amalgamated.hpp>

#include <deque>
#include <functional>
#include <set>

#include "grrforge/grr.hpp"

using namespace grrforge;

namespace {

u64 stabilizer_count(const Graph& g) {
  std::vector<u32> order;
  order.reserve(g.n);
  std::vector<char> seen(g.n, 0);
  std::deque<u32> bfs{0};
  seen[0] = 1;
  while (!bfs.empty()) {
    u32 v = bfs.front();
    bfs.pop_front();
    order.push_back(v);
    for (const u32* it = g.begin_of(v); it != g.end_of(v); ++it)
      if (!seen[*it]) {
        seen[*it] = 1;
        bfs.push_back(*it);
      }
  }
  for (u32 v = 0; v < g.n; ++v)
    if (!seen[v]) order.push_back(v);

  std::vector<u32> img(g.n, g.n);
  std::vector<char> used(g.n, 0);
  u64 count = 0;
  std::function<void(u32)> rec = [&](u32 i) {
    if (i == g.n) {
      ++count;
      return;
    }
    u32 v = order[i];
    if (v == 0) {
      img[v] = 0;
      used[0] = 1;
      rec(i + 1);
      used[0] = 0;
      img[v] = g.n;
      return;
    }
    for (u32 w = 0; w < g.n; ++w) {
      if (used[w] || g.degree(w) != g.degree(v)) continue;
      bool ok = true;
      for (u32 j = 0; j < i && ok; ++j) {
        u32 u = order[j];
        ok = g.adjacent(v, u) == g.adjacent(w, img[u]);
      }
      if (!ok) continue;
      img[v] = w;
      used[w] = 1;
      rec(i + 1);
      used[w] = 0;
      img[v] = g.n;
    }
  };
  rec(0);
  return count;
}

ElementTable s3_table() {
  return ElementTable::enumerate(make_perm_spec(3, {{1, 0, 2}, {1, 2, 0}}));
}
ElementTable s4_table() {
  return ElementTable::enumerate(make_perm_spec(4, {{1, 0, 2, 3}, {1, 2, 3, 0}}));
}
ElementTable a4_table() {
  return ElementTable::enumerate(make_perm_spec(4, {{1, 2, 0, 3}, {0, 2, 3, 1}}));
}

u32 element_of_order(const ElementTable& t, u64 k) {
  for (u32 v = 0; v < t.size(); ++v)
    if (t.order_of(v) == k) return v;
  FAIL("no element of the requested order");
  return 0;
}

u32 conjugate(const ElementTable& t, u32 g, u32 v) {
  return t.mul(t.mul(g, v), t.inverse(g));
}

}  // namespace

TEST_CASE("Sym(3) has no cubic Cayley graph with full-order automorphism group") {
  ElementTable t = s3_table();
  SearchOutcome mixed = exhaustive_grr_search(t, SearchShape::Mixed);
  CHECK(mixed.complete);
  CHECK(mixed.candidates == 3);  // one x up to inversion, three involutions
  CHECK(mixed.unknown == 0);
  CHECK(mixed.witnesses.empty());

  SearchOutcome triples = exhaustive_grr_search(t, SearchShape::ThreeInvolutions);
  CHECK(triples.complete);
  CHECK(triples.candidates == 1);
  CHECK(triples.witnesses.empty());
}

TEST_CASE("certification agrees with the stabilizer oracle on every cubic candidate of Sym(4)") {
  ElementTable t = s4_table();
  REQUIRE(t.size() == 24);
  const auto& invs = t.involutions();
  REQUIRE(invs.size() == 9);

  u64 mixed_candidates = 0, mixed_grr = 0;
  for (u32 x = 0; x < t.size(); ++x) {
    u32 xi = t.inverse(x);
    if (xi <= x) continue;
    for (u32 y : invs) {
      ++mixed_candidates;
      CayleyGraph cay = build_cayley(t, {x, xi, y});
      bool gen = t.generates(cay.connection);
      GrrVerdict v = certify_connection(t, cay.connection, {}, false);
      REQUIRE(v.known);
      CHECK(v.generates == gen);
      if (gen) {
        u64 stab = stabilizer_count(cay.graph);
        CHECK(v.aut_exact);
        CHECK(v.aut_order == Bi(24) * stab);
        CHECK(v.is_grr == (stab == 1));
      } else {
        CHECK_FALSE(v.is_grr);
      }
      if (v.is_grr) ++mixed_grr;
    }
  }
  CHECK(mixed_candidates == 63);  // seven x up to inversion, nine involutions
  CHECK(mixed_grr == 0);          // no mixed-shape cubic GRR on 24 elements here

  u64 triple_candidates = 0, triple_grr = 0;
  for (u32 a = 0; a < invs.size(); ++a)
    for (u32 b = a + 1; b < invs.size(); ++b)
      for (u32 c = b + 1; c < invs.size(); ++c) {
        ++triple_candidates;
        CayleyGraph cay = build_cayley(t, {invs[a], invs[b], invs[c]});
        bool gen = t.generates(cay.connection);
        GrrVerdict v = certify_connection(t, cay.connection, {}, false);
        REQUIRE(v.known);
        CHECK(v.generates == gen);
        if (gen) {
          u64 stab = stabilizer_count(cay.graph);
          CHECK(v.aut_order == Bi(24) * stab);
          CHECK(v.is_grr == (stab == 1));
        }
        if (v.is_grr) ++triple_grr;
      }
  CHECK(triple_candidates == 84);
  CHECK(triple_grr == 24);  // three-involution cubic GRRs exist down here

  // The search helpers report the same tallies.
  SearchOutcome mixed = exhaustive_grr_search(t, SearchShape::Mixed);
  CHECK(mixed.complete);
  CHECK(mixed.candidates == mixed_candidates);
  CHECK(mixed.witnesses.empty());
  SearchOutcome triples = exhaustive_grr_search(t, SearchShape::ThreeInvolutions);
  CHECK(triples.complete);
  CHECK(triples.candidates == triple_candidates);
  CHECK(triples.witnesses.size() == triple_grr);

  // Spot-check one witness end to end: generating, automorphism group of
  // exactly the right-regular order, certified without early abort.
  REQUIRE_FALSE(triples.witnesses.empty());
  GrrVerdict w = certify_connection(t, triples.witnesses.front(), {}, false);
  CHECK(w.is_grr);
  CHECK(w.aut_exact);
  CHECK(w.aut_order == 24);
}

TEST_CASE("Alt(4) admits no cubic GRR of either shape") {
  ElementTable t = a4_table();
  REQUIRE(t.size() == 12);
  SearchOutcome mixed = exhaustive_grr_search(t, SearchShape::Mixed);
  CHECK(mixed.complete);
  CHECK(mixed.candidates == 12);  // four order-3 elements up to inversion, three involutions
  CHECK(mixed.witnesses.empty());

  // The three involutions form the Klein subgroup: they cannot generate.
  SearchOutcome triples = exhaustive_grr_search(t, SearchShape::ThreeInvolutions);
  CHECK(triples.complete);
  CHECK(triples.candidates == 1);
  CHECK(triples.witnesses.empty());
}

TEST_CASE("mixed certification validates its arguments") {
  ElementTable t = s4_table();
  u32 x3 = element_of_order(t, 3);
  u32 x4 = element_of_order(t, 4);
  u32 y = t.involutions().at(0);
  CHECK_THROWS_AS(certify_mixed(t, x3, x4), DomainError);  // y not an involution
  CHECK_THROWS_AS(certify_mixed(t, y, y), DomainError);    // x an involution
  CHECK_THROWS_AS(certify_mixed(t, t.identity_index(), y), DomainError);

  GrrVerdict v = certify_mixed(t, x3, y);
  CHECK(v.known);
  CHECK(v.connection.size() == 3);
}

TEST_CASE("certification verdicts are conjugation invariant") {
  ElementTable t = s4_table();
  Rng rng(5150);
  int checked = 0;
  while (checked < 6) {
    u32 x = u32(rng.below(t.size()));
    if (t.order_of(x) <= 2) continue;
    u32 y = t.involutions()[rng.below(t.involutions().size())];
    u32 g = u32(rng.below(t.size()));
    GrrVerdict a = certify_mixed(t, x, y);
    GrrVerdict b = certify_mixed(t, conjugate(t, g, x), conjugate(t, g, y));
    REQUIRE(a.known);
    REQUIRE(b.known);
    CHECK(a.is_grr == b.is_grr);
    CHECK(a.generates == b.generates);
    ++checked;
  }
}

TEST_CASE("early abort and exact mode agree on the verdict") {
  ElementTable t = s3_table();
  const auto& invs = t.involutions();
  std::vector<u32> conn{invs[0], invs[1], invs[2]};

  GrrVerdict fast = certify_connection(t, conn, {}, true);
  REQUIRE(fast.known);
  CHECK_FALSE(fast.is_grr);
  CHECK_FALSE(fast.aut_exact);
  CHECK(fast.aut_order > 6);  // proven lower bound beats |G|

  GrrVerdict exact = certify_connection(t, conn, {}, false);
  REQUIRE(exact.known);
  CHECK_FALSE(exact.is_grr);
  CHECK(exact.aut_exact);
  CHECK(exact.aut_order == 72);
}

TEST_CASE("a drained node budget yields unknown, never a guess") {
  ElementTable t = s4_table();
  u32 x = element_of_order(t, 3);
  GrrBudget tiny;
  tiny.aut_nodes = 1;
  GrrVerdict v = certify_mixed(t, x, t.involutions().at(0), tiny);
  CHECK_FALSE(v.known);
  CHECK_FALSE(v.is_grr);

  SearchOutcome out = exhaustive_grr_search(t, SearchShape::Mixed, tiny);
  CHECK_FALSE(out.complete);
  CHECK(out.unknown > 0);
  CHECK(out.witnesses.empty());
}

TEST_CASE("fixed-x search sweeps all involutions and certifies absence") {
  ElementTable t = s4_table();
  u32 x = element_of_order(t, 3);
  SearchOutcome sweep = grr_search_for_x(t, x, {}, false);
  CHECK(sweep.complete);
  CHECK(sweep.candidates == 9);
  CHECK(sweep.witnesses.empty());

  SearchOutcome first = grr_search_for_x(t, x, {}, true);  // nothing to stop at
  CHECK(first.complete);
  CHECK(first.candidates == 9);
  CHECK(first.witnesses.empty());

  CHECK_THROWS_AS(grr_search_for_x(t, t.involutions().at(0), {}, true), DomainError);
}

TEST_CASE("Alt(5) has three-involution cubic GRRs and stop-at-first halts early") {
  ElementTable t =
      ElementTable::enumerate(make_perm_spec(5, {{1, 2, 0, 3, 4}, {1, 2, 3, 4, 0}}));
  REQUIRE(t.size() == 60);
  SearchOutcome first = exhaustive_grr_search(t, SearchShape::ThreeInvolutions, {}, true);
  CHECK(first.complete);
  REQUIRE(first.witnesses.size() == 1);
  CHECK(first.candidates < 455);  // halted before the full triple sweep

  GrrVerdict v = certify_connection(t, first.witnesses.front(), {}, false);
  CHECK(v.is_grr);
  CHECK(v.aut_exact);
  CHECK(v.aut_order == 60);

  SearchOutcome full = exhaustive_grr_search(t, SearchShape::ThreeInvolutions);
  CHECK(full.complete);
  CHECK(full.candidates == 455);
  CHECK(full.witnesses.size() == 120);
}

TEST_CASE("exhaustive probability estimate counts witnesses exactly") {
  ElementTable t = s4_table();
  // Tally per-x witness counts from the full sweep.
  SearchOutcome all = exhaustive_grr_search(t, SearchShape::Mixed);
  u32 x3 = element_of_order(t, 3);
  u32 xi = t.inverse(x3);
  u64 expected = 0;
  for (const auto& w : all.witnesses) {
    bool has_x = false;
    for (u32 s : w) has_x = has_x || s == x3 || s == xi;
    if (has_x) ++expected;
  }

  EstimateResult r = estimate_p_exhaustive(t, x3);
  CHECK(r.exhaustive);
  CHECK(r.trials == 9);
  CHECK(r.hits == expected);
  CHECK(r.fraction == Rat(expected, 9));

  u32 x4 = element_of_order(t, 4);
  CHECK_THROWS_AS(estimate_p_exhaustive(t, x4), DomainError);  // even order
  CHECK_THROWS_AS(estimate_p_exhaustive(t, t.identity_index()), DomainError);
}

TEST_CASE("the projective special linear group of degree 2 over GF(7) has probability zero") {
  ElementTable t = ElementTable::enumerate(make_spec(Family::PSL, 2, FieldCtx::prime(7)));
  REQUIRE(t.size() == 168);
  u32 x = element_of_order(t, 7);
  EstimateResult r = estimate_p_exhaustive(t, x);
  CHECK(r.trials == 21);
  CHECK(r.hits == 0);
  CHECK(r.fraction == Rat(0));
}

TEST_CASE("sampled probability estimate is deterministic and bracketed") {
  ElementTable t = s4_table();
  u32 x = element_of_order(t, 3);
  Rng r1(777), r2(777);
  EstimateResult a = estimate_p_sample(t, x, 40, r1);
  EstimateResult b = estimate_p_sample(t, x, 40, r2);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.trials == 40);
  CHECK(a.hits == b.hits);
  CHECK(a.fraction == b.fraction);
  CHECK(a.wilson_low >= 0.0);
  CHECK(a.wilson_high <= 1.0);
  CHECK(a.wilson_low <= a.wilson_high);
  double ph = double(a.hits) / 40.0;
  CHECK(a.wilson_low <= ph);
  CHECK(a.wilson_high >= ph);

  Rng r3(1);
  CHECK_THROWS_AS(estimate_p_sample(t, x, 0, r3), DomainError);
  CHECK_THROWS_AS(estimate_p_sample(t, element_of_order(t, 4), 5, r3), DomainError);
}

TEST_CASE("primitive-prime-divisor elements are located or ruled out") {
  // Degree 3 over GF(2): exponent 3, ppd(2, 3) = {7}.
  ElementTable sl32 = ElementTable::enumerate(make_spec(Family::SL, 3, FieldCtx::binary(1)));
  PpdElement e = find_ppd_element(sl32);
  CHECK(e.m == 3);
  REQUIRE(e.found);
  CHECK(e.prime == 7);
  CHECK(sl32.order_of(e.index) == 7);
  CHECK_FALSE(e.exceptional);

  // Degree 2 over GF(4): exponent 2, field degree 2, ppd(2, 4) = {5}.
  ElementTable sl24 = ElementTable::enumerate(make_spec(Family::SL, 2, FieldCtx::binary(2)));
  e = find_ppd_element(sl24);
  CHECK(e.m == 4);
  REQUIRE(e.found);
  CHECK(e.prime == 5);
  CHECK(sl24.order_of(e.index) == 5);

  // Degree 2 over GF(7): 7^2 - 1 has no new prime (Zsigmondy exception).
  ElementTable psl27 = ElementTable::enumerate(make_spec(Family::PSL, 2, FieldCtx::prime(7)));
  e = find_ppd_element(psl27);
  CHECK(e.m == 2);
  CHECK(e.exceptional);
  CHECK_FALSE(e.found);

  CHECK_THROWS_AS(find_ppd_element(s4_table()), DomainError);
}
