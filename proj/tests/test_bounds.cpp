#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "grrforge/bounds.hpp"

using namespace grrforge;

namespace {

// Independent fraction evaluator for 1 - sum c_i q^{-d_i}: plain big-integer
// numerator/denominator bookkeeping, no rational class, no ledger plumbing.
Rat oracle_displayed(const DisplayedTerms& terms, const Bi& q) {
  Bi den = 1;
  for (const auto& [c, d] : terms) {
    (void)c;
    den *= bi_pow(q, d);
  }
  Bi num = den;
  for (const auto& [c, d] : terms) {
    Bi scaled = boost::multiprecision::numerator(c) * (den / bi_pow(q, d));
    if (boost::multiprecision::denominator(c) != 1)
      throw std::logic_error("oracle assumes integral displayed coefficients");
    num -= scaled;
  }
  return Rat(num, den);
}

}  // namespace

TEST_CASE("displayed bounds: published spot values") {
  REQUIRE(displayed_lower(Family::PSL, 4, 8) == Rat(3, 8));
  REQUIRE(displayed_lower(Family::Sp, 6, 64) == Rat(7, 64));
  // 1 - 24/4096 - 244/256 = (4096 - 24 - 3904)/4096 = 168/4096 = 21/512.
  REQUIRE(displayed_lower(Family::OmegaPlus, 8, 16) == Rat(21, 512));
  // Knife-edge: one doubling below the threshold the bound is negative.
  REQUIRE(displayed_lower(Family::PSL, 6, 64) == Rat(-1310723, 4194304));
  REQUIRE(displayed_lower(Family::PSL, 6, 128) > 0);
  REQUIRE(displayed_lower(Family::OmegaMinus, 10, 2) < 0);
  REQUIRE(displayed_lower(Family::OmegaMinus, 10, 4) > 0);
  // The omega-minus 10 threshold is razor thin: 1 - 252/256 - 12/4^9 barely
  // clears zero.
  REQUIRE(displayed_lower(Family::OmegaMinus, 10, 4) == Rat(1021, 65536));
}

TEST_CASE("displayed bounds agree with an independent fraction evaluator") {
  for (const BoundLedgerEntry& row : bound_ledger()) {
    Bi q = 1;
    for (int f = 1; f <= 12; ++f) {
      q *= 2;
      INFO(row.row_name() << " q=" << q);
      REQUIRE(displayed_lower(row, q) == oracle_displayed(row.displayed, q));
    }
  }
}

TEST_CASE("master bound assembly: symplectic worked example") {
  // For the six-dimensional symplectic row the two master terms are 7/q and
  // 50/q, merging into the published 57/q.
  for (Bi q : {Bi(4), Bi(16), Bi(64), Bi(256)}) {
    MasterTerms t = master_terms(ledger(Family::Sp, 6), q);
    REQUIRE(t.subgroup_term == Rat(7) / Rat(q));
    REQUIRE(t.centralizer_term == Rat(50) / Rat(q));
    REQUIRE(master_lower(Family::Sp, 6, q) == Rat(1) - Rat(57) / Rat(q));
  }
}

TEST_CASE("master terms reproduce displayed terms on every non-linear-4 row") {
  for (const BoundLedgerEntry& row : bound_ledger()) {
    if (row.family == Family::PSL && row.n == 4) continue;
    Bi q = 1;
    for (int f = 1; f <= 10; ++f) {
      q *= 2;
      INFO(row.row_name() << " q=" << q);
      REQUIRE(master_matches_displayed(row, q));
      REQUIRE(master_lower(row, q) == displayed_lower(row, q));
    }
  }
}

TEST_CASE("the linear-4 master bound dominates its displayed relaxation") {
  const BoundLedgerEntry& row = ledger(Family::PSL, 4);
  // Exact closed form: master = 1 - (19/4) q^2 / (q^3 - 1).
  for (Bi q : {Bi(4), Bi(8), Bi(16), Bi(1024)}) {
    Rat expect = Rat(1) - Rat(19 * q * q, 4 * (bi_pow(q, 3) - 1));
    REQUIRE(master_lower(row, q) == expect);
  }
  REQUIRE(master_lower(row, 4) == Rat(-13, 63));
  REQUIRE(master_lower(row, 8) == Rat(207, 511));
  // Dominance holds from the side condition onward (and fails at q = 2,
  // where the coarse involution bound is invalid).
  Bi q = 4;
  for (int f = 2; f <= 16; ++f) {
    INFO("q=" << q);
    REQUIRE(master_lower(row, q) >= displayed_lower(row, q));
    q *= 2;
  }
  REQUIRE(master_lower(row, 2) < displayed_lower(row, 2));
}

TEST_CASE("minimal field sizes reproduce the published threshold table") {
  struct Expect {
    Family family;
    int n;
    u64 q;
  };
  const Expect table[] = {
      {Family::PSL, 4, 8},        {Family::PSL, 6, 128},      {Family::PSL, 8, 4},
      {Family::Sp, 6, 64},        {Family::Sp, 8, 16},        {Family::OmegaPlus, 8, 16},
      {Family::OmegaPlus, 10, 32}, {Family::OmegaPlus, 12, 4}, {Family::OmegaMinus, 8, 8},
      {Family::OmegaMinus, 10, 4}, {Family::OmegaMinus, 12, 4},
  };
  for (const Expect& e : table) {
    INFO(family_name(e.family) << "_" << e.n);
    REQUIRE(min_q_positive(e.family, e.n) == e.q);
  }
  auto rows = thresholds();
  REQUIRE(rows.size() == 11);
  for (const ThresholdRow& r : rows) {
    INFO(family_name(r.family) << "_" << r.n);
    REQUIRE(r.match);
    REQUIRE(r.computed_min_q == r.published_min_q);
    // One doubling below the threshold the bound must not be positive.
    REQUIRE(displayed_lower(r.family, r.n, r.computed_min_q / 2) <= 0);
  }
}

TEST_CASE("displayed bounds increase monotonically beyond their thresholds") {
  for (const BoundLedgerEntry& row : bound_ledger()) {
    INFO(row.row_name());
    REQUIRE(displayed_monotone_from(row, row.min_q));
  }
}

TEST_CASE("explicit witnesses that every bound approaches one") {
  struct Expect {
    Family family;
    int n;
    int f;
  };
  const Expect table[] = {
      {Family::PSL, 4, 13},        {Family::PSL, 6, 17},        {Family::PSL, 8, 4},
      {Family::Sp, 6, 16},         {Family::Sp, 8, 9},          {Family::OmegaPlus, 8, 9},
      {Family::OmegaPlus, 10, 10}, {Family::OmegaPlus, 12, 4},  {Family::OmegaMinus, 8, 6},
      {Family::OmegaMinus, 10, 5}, {Family::OmegaMinus, 12, 3},
  };
  Rat target = Rat(1) - Rat(1, 1024);
  for (const Expect& e : table) {
    const BoundLedgerEntry& row = ledger(e.family, e.n);
    auto f = limit_witness_f(row);
    INFO(row.row_name());
    REQUIRE(f.has_value());
    REQUIRE(*f == e.f);
    REQUIRE(displayed_lower(row, Bi(1) << u32(*f)) > target);
    REQUIRE(displayed_lower(row, Bi(1) << u32(*f - 1)) <= target);
  }
}

TEST_CASE("probability bound bundles") {
  ProbabilityBound b = probability_bound(Family::OmegaMinus, 12, 4);
  REQUIRE(b.positive);
  REQUIRE(b.master == b.displayed);
  REQUIRE(b.displayed == Rat(1) - Rat(8) / Rat(bi_pow(4, 18)) - Rat(490) / Rat(bi_pow(4, 8)));
  ProbabilityBound neg = probability_bound(Family::Sp, 6, 32);
  REQUIRE(!neg.positive);
  REQUIRE_THROWS_AS(probability_bound(Family::Perm, 4, 4), DomainError);
  REQUIRE_THROWS_AS(master_terms(ledger(Family::Sp, 6), 6), DomainError);
}
