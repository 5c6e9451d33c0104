#pragma once

// Exact graph automorphism group orders by individualization-refinement.
//
// The engine maintains an ordered partition of the vertices and alternates
// two moves: equitable refinement (split cells by neighbor counts against
// splitter cells until stable -- one-dimensional Weisfeiler-Leman) and
// individualization (split one vertex off from a chosen target cell, then
// re-refine).  The group order is assembled by orbit-stabilizer products:
//
//   |Aut(P)| = |orbit of v0 under Aut(P)| * |Aut(P with v0 individualized)|
//
// with v0 the first vertex of the first smallest non-singleton cell.  Orbit
// membership is decided by an explicit two-sided search: individualize v0 on
// the left and the candidate w on the right, refine both, and prune the
// moment the refinement traces diverge (the refinement procedure makes all
// decisions from positions, sizes, and neighbor counts only, so isomorphic
// states always produce identical traces).  Automorphisms found along the
// way -- and any caller-supplied seed automorphisms, such as the right
// translations of a Cayley graph -- prune later orbit tests via their
// generated orbit closure.
//
// Initial colors come from four rounds of neighborhood signature hashing, a
// relabeling-invariant preconditioner that splits most random graphs before
// any search happens (it is inert on vertex-transitive inputs).
//
// Budgets: a node budget (individualization count) and an optional
// wall-clock budget; exceeding either raises BudgetError, so a partial run
// can never be mistaken for an exact answer.  An optional early-abort
// threshold stops the search as soon as the order is proven to exceed the
// given value, which is sound for yes/no questions like GRR certification.

#include <algorithm>
#include <chrono>
#include <deque>
#include <iterator>
#include <optional>
#include <vector>

#include "grrforge/common.hpp"
#include "grrforge/graph.hpp"

namespace grrforge {

struct AutOptions {
  u64 node_budget = 200'000'000;
  u64 wall_ms = 0;  // 0: unlimited
  std::vector<std::vector<u32>> seeds;  // known automorphisms (verified on entry)
  // If nonzero: raise AbortOverThreshold (internally) once |Aut| is proven
  // to exceed this value; the result then carries exact = false and a lower
  // bound.  Sound for threshold questions only.
  Bi abort_over_threshold = 0;
};

struct AutResult {
  Bi order;       // exact order, or a lower bound if !exact
  bool exact = true;
  u64 nodes = 0;  // individualization count
  std::vector<std::vector<u32>> generators;  // discovered automorphisms
};

namespace detail {

inline bool is_automorphism(const Graph& g, const std::vector<u32>& perm) {
  if (perm.size() != g.n) return false;
  for (u32 v = 0; v < g.n; ++v) {
    if (perm[v] >= g.n) return false;
    if (g.degree(perm[v]) != g.degree(v)) return false;
    for (const u32* it = g.begin_of(v); it != g.end_of(v); ++it)
      if (!g.adjacent(perm[v], perm[*it])) return false;
  }
  return true;
}

// Relabeling-invariant vertex signatures: iterated neighborhood hashing.
inline std::vector<u64> vertex_signatures(const Graph& g, int rounds) {
  std::vector<u64> sig(g.n), next(g.n);
  for (u32 v = 0; v < g.n; ++v) sig[v] = 0x9e3779b97f4a7c15ULL ^ g.degree(v);
  std::vector<u64> nb;
  for (int r = 0; r < rounds; ++r) {
    for (u32 v = 0; v < g.n; ++v) {
      nb.clear();
      for (const u32* it = g.begin_of(v); it != g.end_of(v); ++it) nb.push_back(sig[*it]);
      std::sort(nb.begin(), nb.end());
      u64 h = sig[v] * 0x100000001b3ULL + 0x2545f4914f6cdd1dULL;
      for (u64 x : nb) h = (h ^ x) * 0x100000001b3ULL;
      next[v] = h;
    }
    sig.swap(next);
  }
  return sig;
}

// Ordered partition: lab holds the vertices cell by cell; cell_of[v] is the
// start position of v's cell; cell_len is valid at start positions only.
struct Partition {
  std::vector<u32> lab, pos, cell_of, cell_len;
  u32 cells = 0;

  bool discrete(u32 n) const { return cells == n; }
};

class AutEngine {
 public:
  AutEngine(const Graph& g, const AutOptions& opt) : g_(g), opt_(opt) {
    deadline_active_ = opt_.wall_ms > 0;
    if (deadline_active_)
      deadline_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(opt_.wall_ms);
    for (const auto& s : opt_.seeds)
      if (!is_automorphism(g_, s))
        throw DomainError("seed permutation is not an automorphism of the graph");
    cnt_.assign(g_.n, 0);
  }

  AutResult run() {
    AutResult res;
    Partition base = initial_partition();
    u64 trace = 0;
    refine(base, all_cells_of(base), trace);
    try {
      res.order = level_order(base, Bi(1));
      res.exact = true;
    } catch (const AbortOverThreshold&) {
      res.order = proven_lower_;
      res.exact = false;
    }
    res.nodes = nodes_;
    res.generators.assign(found_.begin(), found_.end());
    return res;
  }

 private:
  struct AbortOverThreshold {};

  // ---- partition plumbing -----------------------------------------------

  Partition initial_partition() const {
    Partition p;
    p.lab.resize(g_.n);
    p.pos.resize(g_.n);
    p.cell_of.assign(g_.n, 0);
    p.cell_len.assign(g_.n, 0);
    std::vector<u64> sig = vertex_signatures(g_, 4);
    for (u32 v = 0; v < g_.n; ++v) p.lab[v] = v;
    std::sort(p.lab.begin(), p.lab.end(), [&](u32 a, u32 b) {
      return sig[a] != sig[b] ? sig[a] < sig[b] : a < b;
    });
    // Group contiguous equal signatures into cells.
    u32 s = 0;
    p.cells = 0;
    for (u32 i = 0; i < g_.n; ++i) {
      p.pos[p.lab[i]] = i;
      if (i + 1 == g_.n || sig[p.lab[i + 1]] != sig[p.lab[i]]) {
        for (u32 j = s; j <= i; ++j) p.cell_of[p.lab[j]] = s;
        p.cell_len[s] = i - s + 1;
        ++p.cells;
        s = i + 1;
      }
    }
    return p;
  }

  std::vector<u32> all_cells_of(const Partition& p) const {
    std::vector<u32> starts;
    for (u32 s = 0; s < g_.n; s += p.cell_len[s]) starts.push_back(s);
    return starts;
  }

  // Equitable refinement with a splitter queue.  Every structural decision
  // depends only on positions, cell sizes, and neighbor counts, and every
  // split event feeds the trace, so two isomorphic states either produce
  // identical traces or are provably inequivalent.
  void refine(Partition& p, const std::vector<u32>& initial_queue, u64& trace) {
    check_wall();
    std::deque<u32> queue(initial_queue.begin(), initial_queue.end());
    std::vector<char> queued(g_.n, 0);
    for (u32 s : queue) queued[s] = 1;

    while (!queue.empty()) {
      if (p.discrete(g_.n)) break;
      u32 sp = queue.front();
      queue.pop_front();
      queued[sp] = 0;
      u32 sl = p.cell_len[sp];

      // Count neighbors in the splitter cell.
      touched_.clear();
      for (u32 i = sp; i < sp + sl; ++i) {
        u32 x = p.lab[i];
        for (const u32* it = g_.begin_of(x); it != g_.end_of(x); ++it) {
          if (cnt_[*it] == 0) touched_.push_back(*it);
          ++cnt_[*it];
        }
      }

      // Cells with at least one counted member, in position order.
      affected_.clear();
      for (u32 v : touched_) {
        u32 c = p.cell_of[v];
        if (p.cell_len[c] > 1 && !queued_affected(c)) affected_.push_back(c);
      }
      std::sort(affected_.begin(), affected_.end());

      for (u32 cs : affected_) {
        affected_mark_[cs] = 0;
        u32 cl = p.cell_len[cs];
        // Gather (count, vertex) for the whole cell; untouched members count 0.
        groups_.clear();
        for (u32 i = cs; i < cs + cl; ++i) groups_.emplace_back(cnt_[p.lab[i]], p.lab[i]);
        std::stable_sort(groups_.begin(), groups_.end(),
                         [](const std::pair<u32, u32>& a, const std::pair<u32, u32>& b) {
                           return a.first < b.first;
                         });
        if (groups_.front().first == groups_.back().first) continue;  // no split

        // Write back in ascending-count order and carve the subcells.
        trace = mix(trace, 0x51ed2701u + cs);
        u32 i = 0;
        while (i < cl) {
          u32 j = i;
          while (j < cl && groups_[j].first == groups_[i].first) ++j;
          u32 ns = cs + i;  // new subcell start
          for (u32 k = i; k < j; ++k) {
            u32 v = groups_[k].second;
            p.lab[cs + k] = v;
            p.pos[v] = cs + k;
            p.cell_of[v] = ns;
          }
          p.cell_len[ns] = j - i;
          trace = mix(trace, groups_[i].first);
          trace = mix(trace, j - i);
          if (ns != cs) ++p.cells;
          if (!queued[ns]) {
            queued[ns] = 1;
            queue.push_back(ns);
          }
          i = j;
        }
      }
      for (u32 v : touched_) cnt_[v] = 0;
    }
    // Drain count scratch if we broke out early.
    for (u32 v : touched_) cnt_[v] = 0;
  }

  bool queued_affected(u32 c) {
    if (affected_mark_.size() < g_.n) affected_mark_.assign(g_.n, 0);
    if (affected_mark_[c]) return true;
    affected_mark_[c] = 1;
    return false;
  }

  static u64 mix(u64 h, u64 v) { return (h ^ (v + 0x9e3779b97f4a7c15ULL)) * 0x100000001b3ULL; }

  // Split v off the front of its cell and refine; one search node.
  Partition individualize(const Partition& p, u32 v, u64& trace) {
    charge_node();
    Partition q = p;
    u32 cs = q.cell_of[v];
    u32 cl = q.cell_len[cs];
    u32 vp = q.pos[v];
    u32 other = q.lab[cs];
    q.lab[cs] = v;
    q.lab[vp] = other;
    q.pos[v] = cs;
    q.pos[other] = vp;
    q.cell_len[cs] = 1;
    u32 rs = cs + 1;
    if (cl > 1) {
      q.cell_len[rs] = cl - 1;
      for (u32 i = rs; i < cs + cl; ++i) q.cell_of[q.lab[i]] = rs;
      ++q.cells;
    }
    trace = mix(trace, 0xabcd17u + cs);
    std::vector<u32> seedq{cs};
    if (cl > 1) seedq.push_back(rs);
    refine(q, seedq, trace);
    return q;
  }

  // First smallest non-singleton cell.
  u32 target_cell(const Partition& p) const {
    u32 best = g_.n, best_len = 0;
    for (u32 s = 0; s < g_.n; s += p.cell_len[s]) {
      u32 l = p.cell_len[s];
      if (l > 1 && (best_len == 0 || l < best_len)) {
        best = s;
        best_len = l;
      }
    }
    return best;
  }

  // ---- the two-sided mapping search ---------------------------------------

  // Is there an automorphism respecting p that maps the (already
  // individualized and refined) left state's pivot to w?
  std::optional<std::vector<u32>> find_mapping(const Partition& p, const Partition& L, u64 tl,
                                               u32 w) {
    u64 tr = 0;
    Partition R = individualize(p, w, tr);
    if (tl != tr) return std::nullopt;
    return match(L, R);
  }

  std::optional<std::vector<u32>> match(const Partition& L, const Partition& R) {
    check_wall();
    if (L.cells != R.cells) return std::nullopt;
    if (L.discrete(g_.n)) {
      std::vector<u32> perm(g_.n);
      for (u32 i = 0; i < g_.n; ++i) perm[L.lab[i]] = R.lab[i];
      if (!is_automorphism(g_, perm)) return std::nullopt;
      return perm;
    }
    u32 cs = target_cell(L);
    if (R.cell_len[cs] != L.cell_len[cs]) return std::nullopt;
    u32 u = L.lab[cs];
    u64 tl0 = 0;
    Partition L2 = individualize(L, u, tl0);
    for (u32 i = cs; i < cs + R.cell_len[cs]; ++i) {
      u32 z = R.lab[i];
      u64 tr0 = 0;
      Partition R2 = individualize(R, z, tr0);
      if (tr0 != tl0) continue;
      if (auto m = match(L2, R2)) return m;
    }
    return std::nullopt;
  }

  // ---- orbit-stabilizer recursion ----------------------------------------

  // Orbit closure of v0 under the permutations in gens.
  std::vector<char> orbit_closure(u32 v0, const std::vector<const std::vector<u32>*>& gens) const {
    std::vector<char> in(g_.n, 0);
    std::vector<u32> stack{v0};
    in[v0] = 1;
    while (!stack.empty()) {
      u32 v = stack.back();
      stack.pop_back();
      for (const auto* gp : gens) {
        u32 w = (*gp)[v];
        if (!in[w]) {
          in[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return in;
  }

  // Does perm map every cell of p onto itself?
  bool respects(const Partition& p, const std::vector<u32>& perm) const {
    for (u32 v = 0; v < g_.n; ++v)
      if (p.cell_of[perm[v]] != p.cell_of[v]) return false;
    return true;
  }

  // |Aut(graph, p)| for an equitable p.  ancestors = a proven lower bound on
  // the product of orbit sizes at the levels above (for early-abort
  // bookkeeping only; exactness never depends on it).
  Bi level_order(const Partition& p, const Bi& ancestors) {
    if (p.discrete(g_.n)) return 1;
    u32 cs = target_cell(p);
    u32 cl = p.cell_len[cs];
    u32 v0 = p.lab[cs];

    // Applicable generators: seeds and previously discovered automorphisms
    // that respect p (pointers into the deque stay valid across push_back).
    std::vector<const std::vector<u32>*> gens;
    for (const auto& s : opt_.seeds)
      if (respects(p, s)) gens.push_back(&s);
    for (const auto& f : found_)
      if (respects(p, f)) gens.push_back(&f);

    auto count_in_cell = [&](const std::vector<char>& orbit) {
      u64 c = 0;
      for (u32 i = cs; i < cs + cl; ++i) c += u64(orbit[p.lab[i]] != 0);
      return c;
    };

    // The pre-orbit from already-known generators feeds the ancestor product
    // before the stabilizer recursion, so (for example) a Cayley graph
    // seeded with its right translations aborts at the very first extra
    // automorphism found below the top level.
    std::vector<char> orbit = orbit_closure(v0, gens);
    u64 orbit_size = count_in_cell(orbit);
    maybe_abort(ancestors * orbit_size);

    u64 t0 = 0;
    Partition down = individualize(p, v0, t0);
    Bi stab = level_order(down, ancestors * orbit_size);
    maybe_abort(ancestors * stab * orbit_size);

    for (u32 i = cs + 1; i < cs + cl; ++i) {
      u32 w = p.lab[i];
      if (orbit[w]) continue;
      if (auto m = find_mapping(p, down, t0, w)) {
        found_.push_back(std::move(*m));
        gens.push_back(&found_.back());
        orbit = orbit_closure(v0, gens);
        orbit_size = count_in_cell(orbit);
        maybe_abort(ancestors * stab * orbit_size);
      }
    }
    return stab * orbit_size;
  }

  void maybe_abort(const Bi& proven) {
    if (proven > proven_lower_) proven_lower_ = proven;
    if (opt_.abort_over_threshold > 0 && proven > opt_.abort_over_threshold)
      throw AbortOverThreshold{};
  }

  void charge_node() {
    if (++nodes_ > opt_.node_budget)
      throw BudgetError("automorphism search exceeded the node budget of " +
                        std::to_string(opt_.node_budget));
    if ((nodes_ & 0x3ff) == 0) check_wall();
  }

  void check_wall() const {
    if (deadline_active_ && std::chrono::steady_clock::now() > deadline_)
      throw BudgetError("automorphism search exceeded the wall-clock budget");
  }

  const Graph& g_;
  AutOptions opt_;
  bool deadline_active_ = false;
  std::chrono::steady_clock::time_point deadline_;
  u64 nodes_ = 0;
  Bi proven_lower_ = 1;
  std::deque<std::vector<u32>> found_;
  std::vector<u32> cnt_;
  std::vector<u32> touched_, affected_;
  std::vector<char> affected_mark_;
  std::vector<std::pair<u32, u32>> groups_;
};

}  // namespace detail

inline AutResult aut_order(const Graph& g, const AutOptions& opt = {}) {
  if (g.n == 0) return AutResult{Bi(1), true, 0, {}};
  detail::AutEngine engine(g, opt);
  return engine.run();
}

}  // namespace grrforge
