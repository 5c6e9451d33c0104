#pragma once

// Command-line front end: argument parsing, report emission (JSON / CSV /
// text), and exit-code mapping.  run_cli is a pure function of its argument
// vector plus the process environment's default cache directory, so the
// whole surface is testable in-process.
//
// Conventions:
//   - all flags are long-form (--family sl --n 2 --p 7);
//   - big integers are serialized as decimal strings (orders overflow
//     double precision long before they overflow the mathematics);
//   - every JSON report carries "schema": "grrforge/1";
//   - --canonical omits wall-clock fields so reruns are byte-identical;
//   - exit 0 on success, 1 on domain errors, 2 on budget stops and refusals.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grrforge/bounds.hpp"
#include "grrforge/census.hpp"
#include "grrforge/grr.hpp"
#include "grrforge/ppd.hpp"
#include "grrforge/selftest.hpp"

namespace grrforge {

namespace cli_detail {

const std::set<std::string>& boolean_flags() {
  static const std::set<std::string> s{"canonical", "slow", "exact", "first"};
  return s;
}

const std::set<std::string>& value_flags() {
  static const std::set<std::string> s{
      "family", "n", "f", "p", "a", "m", "cap", "aut-nodes", "wall-ms", "seed",
      "samples", "cache-dir", "format", "shape", "mode", "x", "y", "set", "workers"};
  return s;
}

struct ArgMap {
  std::map<std::string, std::string> kv;

  bool has(const std::string& k) const { return kv.count(k) != 0; }

  std::string req(const std::string& k) const {
    auto it = kv.find(k);
    if (it == kv.end()) throw DomainError("missing required flag --" + k);
    return it->second;
  }

  std::string opt(const std::string& k, const std::string& dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  }

  long long req_int(const std::string& k) const { return parse_int(k, req(k)); }

  long long opt_int(const std::string& k, long long dflt) const {
    return has(k) ? parse_int(k, req(k)) : dflt;
  }

  u64 req_u64(const std::string& k) const {
    long long v = req_int(k);
    if (v < 0) throw DomainError("flag --" + k + " must be non-negative");
    return u64(v);
  }

  u64 opt_u64(const std::string& k, u64 dflt) const {
    return has(k) ? req_u64(k) : dflt;
  }

  bool flag(const std::string& k) const { return has(k); }

 private:
  static long long parse_int(const std::string& k, const std::string& v) {
    if (v.empty()) throw DomainError("flag --" + k + " needs an integer value");
    size_t pos = 0;
    long long out = 0;
    try {
      out = std::stoll(v, &pos);
    } catch (const std::exception&) {
      throw DomainError("flag --" + k + ": '" + v + "' is not an integer");
    }
    if (pos != v.size()) throw DomainError("flag --" + k + ": '" + v + "' is not an integer");
    return out;
  }
};

inline ArgMap parse_args(const std::vector<std::string>& args, size_t start) {
  ArgMap a;
  for (size_t i = start; i < args.size(); ++i) {
    const std::string& tok = args[i];
    if (tok.rfind("--", 0) != 0)
      throw DomainError("expected a --flag, got '" + tok + "'");
    std::string name = tok.substr(2);
    if (boolean_flags().count(name)) {
      a.kv[name] = "true";
    } else if (value_flags().count(name)) {
      if (i + 1 >= args.size()) throw DomainError("flag --" + name + " needs a value");
      a.kv[name] = args[++i];
    } else {
      throw DomainError("unknown flag --" + name);
    }
  }
  return a;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string jstr(const std::string& s) { return "\"" + json_escape(s) + "\""; }

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// Group-spec flags shared by the group-facing subcommands.
inline GroupSpec spec_from(const ArgMap& a) {
  std::string fam = a.req("family");
  auto f = family_from_name(fam);
  if (!f) throw DomainError("unknown family '" + fam + "'");
  if (*f == Family::Perm)
    throw DomainError("permutation groups take explicit generators and have no flag form");
  int n = int(a.req_int("n"));
  bool has_f = a.has("f"), has_p = a.has("p");
  if (has_f == has_p)
    throw DomainError("give exactly one of --f (binary field degree) or --p (odd prime field)");
  FieldCtx field = has_f ? FieldCtx::binary(u32(a.req_u64("f")))
                         : FieldCtx::prime(u32(a.req_u64("p")));
  return make_spec(*f, n, field);
}

inline EnumerateOptions table_options(const ArgMap& a, const std::string& default_cache) {
  EnumerateOptions opt;
  opt.cap = a.opt_u64("cap", 2'000'000);
  opt.cache_dir = a.opt("cache-dir", default_cache);
  return opt;
}

inline GrrBudget grr_budget(const ArgMap& a) {
  GrrBudget b;
  b.aut_nodes = a.opt_u64("aut-nodes", 200'000'000);
  b.wall_ms = a.opt_u64("wall-ms", 0);
  return b;
}

inline void check_workers(const ArgMap& a) {
  u64 w = a.opt_u64("workers", 1);
  if (w < 1) throw DomainError("--workers must be at least 1");
  // Report assembly is single-threaded and ordered; the flag is accepted for
  // interface stability and currently schedules sequentially.
}

inline std::string format_of(const ArgMap& a, const std::string& dflt) {
  std::string f = a.opt("format", dflt);
  if (f != "json" && f != "csv" && f != "text")
    throw DomainError("unknown format '" + f + "' (expected json, csv, or text)");
  return f;
}

// ---- subcommands ------------------------------------------------------------

inline int cmd_ppd(const ArgMap& a, std::ostream& out) {
  u64 base = a.req_u64("a");
  u64 m = a.req_u64("m");
  PpdResult r = ppd_set(base, u32(m));
  out << "{\"schema\": \"grrforge/1\", \"a\": " << base << ", \"m\": " << m
      << ", \"primes\": [";
  for (size_t i = 0; i < r.primes.size(); ++i)
    out << (i ? ", " : "") << jstr(r.primes[i].str());
  out << "], \"orders\": [";
  for (size_t i = 0; i < r.orders.size(); ++i) out << (i ? ", " : "") << r.orders[i];
  out << "], \"exceptional\": " << (r.exceptional ? "true" : "false");
  if (r.exceptional) out << ", \"note\": " << jstr(r.note);
  out << "}\n";
  return 0;
}

inline int cmd_census(const ArgMap& a, std::ostream& out) {
  std::string fam = a.opt("family", "gl");
  if (fam != "gl")
    throw DomainError("census tabulates involution classes of gl only (got '" + fam + "')");
  int n = int(a.req_int("n"));
  u32 f = u32(a.req_u64("f"));
  Bi q = Bi(1) << f;
  auto classes = involution_classes(n, q);
  out << "{\"schema\": \"grrforge/1\", \"family\": \"gl\", \"n\": " << n << ", \"q\": " << q
      << ", \"classes\": [";
  for (size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    out << (i ? ", " : "") << "{\"ell\": " << c.ell
        << ", \"centralizer_order\": " << jstr(c.centralizer_order.str())
        << ", \"class_size\": " << jstr(c.class_size.str()) << "}";
  }
  out << "], \"total\": " << jstr(detail::involution_class_sum(n, q).str()) << "}\n";
  return 0;
}

inline void emit_laurent(std::ostream& out, const char* key, const LaurentForm& form,
                         bool trailing_comma = true) {
  out << "\"" << key << "\": " << jstr(form.str()) << (trailing_comma ? ", " : "");
}

inline int cmd_ledger(const ArgMap& a, std::ostream& out) {
  std::vector<BoundLedgerEntry> rows;
  if (a.has("family") || a.has("n")) {
    std::string fam = a.req("family");
    auto f = family_from_name(fam);
    if (!f) throw DomainError("unknown family '" + fam + "'");
    rows.push_back(ledger(*f, int(a.req_int("n"))));
  } else {
    rows = bound_ledger();
  }
  out << "{\"schema\": \"grrforge/1\", \"rows\": [";
  for (size_t i = 0; i < rows.size(); ++i) {
    const BoundLedgerEntry& r = rows[i];
    out << (i ? ", " : "") << "{\"family\": " << jstr(family_name(r.family))
        << ", \"n\": " << r.n << ", \"e\": " << r.e << ", ";
    emit_laurent(out, "normalizer", r.normalizer);
    emit_laurent(out, "i_g", r.iG);
    emit_laurent(out, "u_g", r.uG);
    emit_laurent(out, "u_g_refined", r.uG_refined);
    emit_laurent(out, "u_g_master", r.uG_master);
    emit_laurent(out, "a_q", r.aQ);
    emit_laurent(out, "b_q", r.bQ);
    out << "\"displayed\": [";
    for (size_t t = 0; t < r.displayed.size(); ++t)
      out << (t ? ", " : "") << "{\"coefficient\": " << jstr(rat_str(r.displayed[t].first))
          << ", \"inverse_power\": " << r.displayed[t].second << "}";
    out << "], \"min_q\": " << jstr(r.min_q.str())
        << ", \"condition_min_q\": " << jstr(r.condition_min_q.str()) << "}";
  }
  out << "]}\n";
  return 0;
}

inline int cmd_bounds(const ArgMap& a, std::ostream& out) {
  std::string fam = a.req("family");
  auto f = family_from_name(fam);
  if (!f) throw DomainError("unknown family '" + fam + "'");
  int n = int(a.req_int("n"));
  u32 deg = u32(a.req_u64("f"));
  Bi q = Bi(1) << deg;
  const BoundLedgerEntry& row = ledger(*f, n);
  ProbabilityBound b = probability_bound(*f, n, q);
  out << "{\"schema\": \"grrforge/1\", \"family\": " << jstr(fam) << ", \"n\": " << n
      << ", \"q\": " << jstr(q.str()) << ", \"master\": " << jstr(rat_str(b.master))
      << ", \"displayed\": " << jstr(rat_str(b.displayed))
      << ", \"positive\": " << (b.positive ? "true" : "false")
      << ", \"master_matches_displayed\": "
      << (master_matches_displayed(row, q) ? "true" : "false")
      << ", \"min_q\": " << jstr(row.min_q.str()) << "}\n";
  return 0;
}

inline int cmd_thresholds(const ArgMap& a, std::ostream& out) {
  std::string fmt = format_of(a, "csv");
  auto rows = thresholds();
  if (fmt == "csv") {
    out << "family,n,published_min_q,computed_min_q,match\n";
    for (const auto& r : rows)
      out << family_name(r.family) << "," << r.n << "," << r.published_min_q.str() << ","
          << r.computed_min_q.str() << "," << (r.match ? "true" : "false") << "\n";
  } else if (fmt == "json") {
    out << "{\"schema\": \"grrforge/1\", \"rows\": [";
    for (size_t i = 0; i < rows.size(); ++i)
      out << (i ? ", " : "") << "{\"family\": " << jstr(family_name(rows[i].family))
          << ", \"n\": " << rows[i].n << ", \"published_min_q\": "
          << jstr(rows[i].published_min_q.str())
          << ", \"computed_min_q\": " << jstr(rows[i].computed_min_q.str())
          << ", \"match\": " << (rows[i].match ? "true" : "false") << "}";
    out << "]}\n";
  } else {
    throw DomainError("thresholds supports --format csv or json");
  }
  return 0;
}

inline int cmd_enumerate(const ArgMap& a, std::ostream& out, const std::string& cache) {
  GroupSpec spec = spec_from(a);
  ElementTable t = ElementTable::enumerate(spec, table_options(a, cache));
  out << "{\"schema\": \"grrforge/1\", \"group\": " << jstr(spec.name())
      << ", \"order\": " << jstr(group_order(spec).str()) << ", \"elements\": " << t.size()
      << ", \"involutions\": " << t.involutions().size()
      << ", \"from_cache\": " << (t.loaded_from_cache() ? "true" : "false") << "}\n";
  return 0;
}

inline int cmd_find_x(const ArgMap& a, std::ostream& out, const std::string& cache) {
  GroupSpec spec = spec_from(a);
  ElementTable t = ElementTable::enumerate(spec, table_options(a, cache));
  PpdElement e = find_ppd_element(t);
  out << "{\"schema\": \"grrforge/1\", \"group\": " << jstr(spec.name()) << ", \"m\": " << e.m
      << ", \"exceptional\": " << (e.exceptional ? "true" : "false")
      << ", \"found\": " << (e.found ? "true" : "false");
  if (e.found)
    out << ", \"prime\": " << jstr(e.prime.str()) << ", \"index\": " << e.index
        << ", \"element\": " << jstr(mat_literal(t.element(e.index)));
  out << "}\n";
  return 0;
}

inline std::vector<u32> parse_connection(const ElementTable& t, const ArgMap& a) {
  const GroupSpec& spec = t.spec();
  std::vector<u32> conn;
  if (a.has("set")) {
    if (a.has("x") || a.has("y"))
      throw DomainError("give either --set or the pair --x/--y, not both");
    std::string s = a.req("set");
    size_t pos = 0;
    while (pos <= s.size()) {
      size_t bar = s.find('|', pos);
      std::string lit = s.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos);
      if (lit.empty()) throw DomainError("empty matrix literal in --set");
      conn.push_back(t.must_find(parse_mat(spec.field, lit)));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
  } else {
    u32 x = t.must_find(parse_mat(spec.field, a.req("x")));
    u32 y = t.must_find(parse_mat(spec.field, a.req("y")));
    conn = {x, t.inverse(x), y};
  }
  return conn;
}

inline void emit_verdict(std::ostream& out, const ElementTable& t, const GrrVerdict& v,
                         bool canonical) {
  out << "{\"schema\": \"grrforge/1\", \"group\": " << jstr(t.spec().name())
      << ", \"connection\": [";
  for (size_t i = 0; i < v.connection.size(); ++i)
    out << (i ? ", " : "") << jstr(mat_literal(t.element(v.connection[i])));
  out << "], \"generates\": " << (v.generates ? "true" : "false")
      << ", \"known\": " << (v.known ? "true" : "false")
      << ", \"is_grr\": " << (v.is_grr ? "true" : "false")
      << ", \"aut_order\": " << jstr(v.aut_order.str())
      << ", \"aut_exact\": " << (v.aut_exact ? "true" : "false")
      << ", \"aut_nodes\": " << v.aut_nodes;
  if (!canonical) out << ", \"elapsed_ms\": " << fixed6(v.elapsed_ms);
  out << "}\n";
}

inline int cmd_grr_check(const ArgMap& a, std::ostream& out, const std::string& cache) {
  GroupSpec spec = spec_from(a);
  ElementTable t = ElementTable::enumerate(spec, table_options(a, cache));
  std::vector<u32> conn = parse_connection(t, a);
  GrrVerdict v = certify_connection(t, conn, grr_budget(a), !a.flag("exact"));
  emit_verdict(out, t, v, a.flag("canonical"));
  if (!v.known) return 2;
  return 0;
}

inline void emit_outcome_text(std::ostream& out, const ElementTable& t, const char* label,
                              const SearchOutcome& o) {
  out << label << ": candidates=" << o.candidates << " witnesses=" << o.witnesses.size()
      << " complete=" << (o.complete ? "yes" : "no");
  if (o.unknown) out << " unknown=" << o.unknown;
  out << "\n";
  for (const auto& w : o.witnesses) {
    out << "  witness:";
    for (u32 s : w) out << " " << mat_literal(t.element(s));
    out << "\n";
  }
}

inline void emit_outcome_json(std::ostream& out, const ElementTable& t, const char* label,
                              const SearchOutcome& o, bool first) {
  out << (first ? "" : ", ") << "{\"shape\": " << jstr(label)
      << ", \"candidates\": " << o.candidates << ", \"unknown\": " << o.unknown
      << ", \"complete\": " << (o.complete ? "true" : "false") << ", \"witnesses\": [";
  for (size_t i = 0; i < o.witnesses.size(); ++i) {
    out << (i ? ", " : "") << "[";
    for (size_t j = 0; j < o.witnesses[i].size(); ++j)
      out << (j ? ", " : "") << jstr(mat_literal(t.element(o.witnesses[i][j])));
    out << "]";
  }
  out << "]}";
}

inline int cmd_grr_search(const ArgMap& a, std::ostream& out, const std::string& cache) {
  GroupSpec spec = spec_from(a);
  std::string shape = a.opt("shape", "both");
  if (shape != "mixed" && shape != "triples" && shape != "both")
    throw DomainError("unknown shape '" + shape + "' (expected mixed, triples, or both)");
  std::string fmt = format_of(a, "text");
  if (fmt == "csv") throw DomainError("grr-search supports --format text or json");
  bool first = a.flag("first");
  GrrBudget budget = grr_budget(a);

  ElementTable t = ElementTable::enumerate(spec, table_options(a, cache));
  std::vector<std::pair<const char*, SearchOutcome>> outcomes;
  if (a.has("x")) {
    if (shape == "triples")
      throw DomainError("--x fixes the mixed shape; it cannot combine with --shape triples");
    u32 x = t.must_find(parse_mat(spec.field, a.req("x")));
    outcomes.emplace_back("mixed", grr_search_for_x(t, x, budget, first));
  } else {
    if (shape == "mixed" || shape == "both")
      outcomes.emplace_back("mixed", exhaustive_grr_search(t, SearchShape::Mixed, budget, first));
    bool skip_triples = false;
    if (first)
      for (auto& [label, o] : outcomes) skip_triples = skip_triples || !o.witnesses.empty();
    if ((shape == "triples" || shape == "both") && !skip_triples)
      outcomes.emplace_back("triples",
                            exhaustive_grr_search(t, SearchShape::ThreeInvolutions, budget, first));
  }

  bool any_witness = false, all_complete = true;
  for (auto& [label, o] : outcomes) {
    any_witness = any_witness || !o.witnesses.empty();
    all_complete = all_complete && o.complete;
  }

  if (fmt == "json") {
    out << "{\"schema\": \"grrforge/1\", \"group\": " << jstr(spec.name()) << ", \"results\": [";
    bool lead = true;
    for (auto& [label, o] : outcomes) {
      emit_outcome_json(out, t, label, o, lead);
      lead = false;
    }
    out << "], \"found\": " << (any_witness ? "true" : "false")
        << ", \"complete\": " << (all_complete ? "true" : "false") << "}\n";
  } else {
    for (auto& [label, o] : outcomes) emit_outcome_text(out, t, label, o);
    if (any_witness)
      out << "GRR found\n";
    else if (all_complete)
      out << "no GRR found; search complete\n";
    else
      out << "no GRR found; search incomplete (budget)\n";
  }
  if (!any_witness && !all_complete) return 2;
  return 0;
}

inline int cmd_estimate(const ArgMap& a, std::ostream& out, const std::string& cache) {
  GroupSpec spec = spec_from(a);
  ElementTable t = ElementTable::enumerate(spec, table_options(a, cache));
  u32 x = t.must_find(parse_mat(spec.field, a.req("x")));
  std::string mode = a.opt("mode", "exhaustive");
  GrrBudget budget = grr_budget(a);
  EstimateResult r;
  if (mode == "exhaustive") {
    r = estimate_p_exhaustive(t, x, budget);
  } else if (mode == "sample") {
    u64 n = a.req_u64("samples");
    Rng rng(a.opt_u64("seed", 1));
    r = estimate_p_sample(t, x, n, rng, budget);
  } else {
    throw DomainError("unknown mode '" + mode + "' (expected exhaustive or sample)");
  }
  out << "{\"schema\": \"grrforge/1\", \"group\": " << jstr(spec.name())
      << ", \"x\": " << jstr(mat_literal(t.element(x))) << ", \"mode\": " << jstr(mode)
      << ", \"hits\": " << r.hits << ", \"trials\": " << r.trials
      << ", \"fraction\": " << jstr(rat_str(r.fraction));
  if (!r.exhaustive)
    out << ", \"wilson_low\": " << fixed6(r.wilson_low)
        << ", \"wilson_high\": " << fixed6(r.wilson_high);
  out << "}\n";
  return 0;
}

inline int cmd_selftest(const ArgMap& a, std::ostream& out, const std::string& cache) {
  AcceptanceSuite suite(a.opt("cache-dir", cache));
  std::vector<CriterionResult> rs = suite.run_fast();
  if (a.flag("slow")) {
    auto slow = suite.run_slow();
    rs.insert(rs.end(), slow.begin(), slow.end());
  }
  std::sort(rs.begin(), rs.end(),
            [](const CriterionResult& l, const CriterionResult& r) { return l.number < r.number; });
  AcceptanceSuite::print(rs, out, !a.flag("canonical"));
  return AcceptanceSuite::all_pass(rs) ? 0 : 1;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                   const std::string& default_cache_dir = "") {
  using namespace cli_detail;
  try {
    if (args.empty())
      throw DomainError(
          "usage: grrforge <ppd|census|ledger|bounds|thresholds|enumerate|find-x|grr-check|"
          "grr-search|estimate|selftest> [--flags]");
    const std::string& cmd = args[0];
    ArgMap a = parse_args(args, 1);
    check_workers(a);
    if (cmd == "ppd") return cmd_ppd(a, out);
    if (cmd == "census") return cmd_census(a, out);
    if (cmd == "ledger") return cmd_ledger(a, out);
    if (cmd == "bounds") return cmd_bounds(a, out);
    if (cmd == "thresholds") return cmd_thresholds(a, out);
    if (cmd == "enumerate") return cmd_enumerate(a, out, default_cache_dir);
    if (cmd == "find-x") return cmd_find_x(a, out, default_cache_dir);
    if (cmd == "grr-check") return cmd_grr_check(a, out, default_cache_dir);
    if (cmd == "grr-search") return cmd_grr_search(a, out, default_cache_dir);
    if (cmd == "estimate") return cmd_estimate(a, out, default_cache_dir);
    if (cmd == "selftest") return cmd_selftest(a, out, default_cache_dir);
    throw DomainError("unknown subcommand '" + cmd + "'");
  } catch (const BudgetError& e) {
    err << "budget: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace grrforge
