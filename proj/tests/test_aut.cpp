// The automorphism-order engine against a brute-force oracle.
//
// The oracle enumerates all n! vertex permutations and counts the ones
// preserving adjacency — written against the Graph interface only, with no
// shared code paths into the engine.  Everything the engine reports on small
// graphs is checked against it; named graphs with classical automorphism
// counts are frozen as exact constants.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "grrforge/aut.hpp"
#include "grrforge/graph.hpp"
#include "grrforge/table.hpp"

using namespace grrforge;

namespace {

u64 brute_aut_count(const Graph& g) {
  std::vector<u32> perm(g.n);
  std::iota(perm.begin(), perm.end(), 0);
  u64 count = 0;
  do {
    bool ok = true;
    for (u32 v = 0; v < g.n && ok; ++v) {
      if (g.degree(perm[v]) != g.degree(v)) { ok = false; break; }
      for (const u32* it = g.begin_of(v); it != g.end_of(v); ++it)
        if (!g.adjacent(perm[v], perm[*it])) { ok = false; break; }
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

Graph cycle_graph(u32 n) {
  std::vector<std::pair<u32, u32>> e;
  for (u32 i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return make_graph(n, e);
}

Graph complete_graph(u32 n) {
  std::vector<std::pair<u32, u32>> e;
  for (u32 i = 0; i < n; ++i)
    for (u32 j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e);
}

Graph complete_bipartite(u32 a, u32 b) {
  std::vector<std::pair<u32, u32>> e;
  for (u32 i = 0; i < a; ++i)
    for (u32 j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return make_graph(a + b, e);
}

Graph petersen_graph() {
  // Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
  std::vector<std::pair<u32, u32>> e;
  for (u32 i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
    e.emplace_back(i, 5 + i);
  }
  return make_graph(10, e);
}

Graph random_graph(u32 n, u32 percent, Rng& rng) {
  std::vector<std::pair<u32, u32>> e;
  for (u32 i = 0; i < n; ++i)
    for (u32 j = i + 1; j < n; ++j)
      if (rng.below(100) < percent) e.emplace_back(i, j);
  return make_graph(n, e);
}

std::vector<u32> random_permutation(u32 n, Rng& rng) {
  std::vector<u32> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (u32 i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

Bi engine_order(const Graph& g) { return aut_order(g).order; }

}  // namespace

TEST_CASE("tiny graphs") {
  CHECK(aut_order(make_graph(0, {})).order == 1);
  CHECK(engine_order(make_graph(1, {})) == 1);
  CHECK(engine_order(make_graph(2, {{0, 1}})) == 2);
  CHECK(engine_order(make_graph(2, {})) == 2);
  CHECK(engine_order(make_graph(3, {{0, 1}})) == 2);
}

TEST_CASE("named graphs match their classical automorphism counts") {
  CHECK(engine_order(cycle_graph(6)) == 12);          // dihedral of order 12
  CHECK(engine_order(cycle_graph(5)) == 10);
  CHECK(engine_order(complete_graph(4)) == 24);
  CHECK(engine_order(complete_graph(7)) == 5040);
  CHECK(engine_order(complete_bipartite(3, 3)) == 72);   // wreath: 3! * 3! * 2
  CHECK(engine_order(complete_bipartite(2, 4)) == 48);   // unequal parts: 2! * 4!
  CHECK(engine_order(petersen_graph()) == 120);
  // Two triangle components: 6 * 6 * 2.
  CHECK(engine_order(make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}})) == 72);
  // Empty graph on 5 vertices: the full symmetric group.
  CHECK(engine_order(make_graph(5, {})) == 120);
  // Star with 4 leaves: fix the centre, permute leaves.
  CHECK(engine_order(make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})) == 24);
  // 3-cube.
  Graph q3 = make_graph(8, {{0, 1}, {0, 2}, {0, 4}, {1, 3}, {1, 5}, {2, 3},
                            {2, 6}, {3, 7}, {4, 5}, {4, 6}, {5, 7}, {6, 7}});
  CHECK(engine_order(q3) == 48);
}

TEST_CASE("brute-force agreement on the named graphs") {
  CHECK(brute_aut_count(cycle_graph(6)) == 12);
  CHECK(brute_aut_count(complete_bipartite(3, 3)) == 72);
  CHECK(brute_aut_count(complete_bipartite(2, 4)) == 48);
  Graph q3 = make_graph(8, {{0, 1}, {0, 2}, {0, 4}, {1, 3}, {1, 5}, {2, 3},
                            {2, 6}, {3, 7}, {4, 5}, {4, 6}, {5, 7}, {6, 7}});
  CHECK(brute_aut_count(q3) == 48);
  CHECK(brute_aut_count(petersen_graph()) == 120);
}

TEST_CASE("brute-force agreement on random graphs") {
  Rng rng(987654321);
  int done = 0;
  for (u32 n = 1; n <= 7; ++n) {
    for (u32 percent : {20, 50, 80}) {
      for (int rep = 0; rep < 5; ++rep) {
        Graph g = random_graph(n, percent, rng);
        AutResult res = aut_order(g);
        REQUIRE(res.exact);
        CHECK(res.order == Bi(brute_aut_count(g)));
        for (const auto& gen : res.generators) {
          REQUIRE(gen.size() == g.n);
          for (u32 v = 0; v < g.n; ++v)
            for (const u32* it = g.begin_of(v); it != g.end_of(v); ++it)
              CHECK(g.adjacent(gen[v], gen[*it]));
        }
        ++done;
      }
    }
  }
  CHECK(done == 105);
}

TEST_CASE("order is invariant under relabeling") {
  Rng rng(24601);
  std::vector<Graph> subjects;
  subjects.push_back(cycle_graph(6));
  subjects.push_back(complete_bipartite(3, 3));
  subjects.push_back(petersen_graph());
  subjects.push_back(random_graph(7, 50, rng));
  subjects.push_back(random_graph(8, 30, rng));
  for (const Graph& g : subjects) {
    Bi base = engine_order(g);
    for (int rep = 0; rep < 10; ++rep) {
      Graph h = relabel(g, random_permutation(g.n, rng));
      CHECK(engine_order(h) == base);
    }
  }
}

TEST_CASE("seed automorphisms are validated and used") {
  Graph c6 = cycle_graph(6);
  AutOptions opt;
  opt.seeds.push_back({1, 2, 3, 4, 5, 0});  // rotation
  AutResult res = aut_order(c6, opt);
  CHECK(res.exact);
  CHECK(res.order == 12);

  AutOptions bad;
  bad.seeds.push_back({1, 0, 2, 3, 4, 5});  // swaps adjacent/non-adjacent pairs
  CHECK_THROWS_AS(aut_order(c6, bad), DomainError);

  AutOptions wrong_size;
  wrong_size.seeds.push_back({1, 0});
  CHECK_THROWS_AS(aut_order(c6, wrong_size), DomainError);
}

TEST_CASE("node budget raises rather than degrading to a wrong answer") {
  AutOptions opt;
  opt.node_budget = 2;
  CHECK_THROWS_AS(aut_order(complete_bipartite(4, 4), opt), BudgetError);
}

TEST_CASE("generous wall budget does not interfere") {
  AutOptions opt;
  opt.wall_ms = 60'000;
  CHECK(aut_order(petersen_graph(), opt).order == 120);
}

TEST_CASE("early abort over a threshold yields a certified lower bound") {
  Graph c6 = cycle_graph(6);

  AutOptions over;
  over.abort_over_threshold = 6;
  AutResult res = aut_order(c6, over);
  CHECK_FALSE(res.exact);
  CHECK(res.order > 6);

  AutOptions at;  // threshold equal to the true order: no abort
  at.abort_over_threshold = 12;
  res = aut_order(c6, at);
  CHECK(res.exact);
  CHECK(res.order == 12);

  AutOptions pet;
  pet.abort_over_threshold = 10;
  res = aut_order(petersen_graph(), pet);
  CHECK_FALSE(res.exact);
  CHECK(res.order > 10);
  CHECK(res.order <= 120);
}

TEST_CASE("seeded orbit alone can cross the abort threshold") {
  Graph c6 = cycle_graph(6);
  AutOptions opt;
  opt.seeds.push_back({1, 2, 3, 4, 5, 0});
  opt.abort_over_threshold = 5;  // the seeded rotation orbit already has 6 vertices
  AutResult res = aut_order(c6, opt);
  CHECK_FALSE(res.exact);
  CHECK(res.order > 5);
}

TEST_CASE("Cayley graph on three involutions of Sym(3): order 72, not regular-representation") {
  ElementTable t = ElementTable::enumerate(make_perm_spec(3, {{1, 0, 2}, {1, 2, 0}}));
  const auto& invs = t.involutions();
  REQUIRE(invs.size() == 3);
  CayleyGraph cay = build_cayley(t, {invs[0], invs[1], invs[2]});
  CHECK(engine_order(cay.graph) == 72);  // isomorphic to complete bipartite 3+3
}
