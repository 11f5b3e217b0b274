#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "ramcong/classifier.hpp"

using namespace ramcong;

namespace {

EngineConfig config(std::uint64_t horizon = 5000) {
  EngineConfig c;
  c.n_horizon = horizon;
  return c;
}

bool has_hit(const SearchResult& r, std::uint64_t A, std::uint64_t B) {
  return std::any_of(r.hits.begin(), r.hits.end(), [&](const SearchHit& h) { return h.A == A && h.B == B; });
}

}  // namespace

TEST(GridScanTest, MatchesCellScans) {
  auto f = sigma_function(0);
  auto o = grid_oracle(f, 2, 40, 3000);
  auto g = grid_scan(o, 40, 3000, 3);
  for (std::uint64_t A = 1; A <= 40; ++A) {
    for (std::uint64_t B = 1; B <= A; ++B) {
      auto s = scan_valuation(o, A, B, 3000);
      auto r = g.result(A, B);
      ASSERT_EQ(r.value, s.value) << A << " " << B;
      ASSERT_EQ(r.witness_n, s.witness_n) << A << " " << B;
      ASSERT_EQ(r.justification, s.justification) << A << " " << B;
    }
  }
}

TEST(Search, SigmaZeroModTwo) {
  auto r = search_congruences(sigma_function(0), 2, 1, 12, config());
  EXPECT_TRUE(has_hit(r, 9, 3));
  EXPECT_TRUE(has_hit(r, 9, 6));
  EXPECT_EQ(r.cells, 78u);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_TRUE(std::is_sorted(r.hits.begin(), r.hits.end(), [](auto& a, auto& b) {
    return std::pair(a.A, a.B) < std::pair(b.A, b.B);
  }));
  for (auto& h : r.hits) EXPECT_NE(h.certificate.status, CertificateStatus::Refuted);
}

TEST(Search, SigmaOneModFour) {
  auto r = search_congruences(sigma_function(1), 2, 2, 4, config());
  EXPECT_TRUE(has_hit(r, 4, 3));
}

// Nothing beyond the nu_3(sigma_0(G')) floor. The floor itself shows up at
// (8, 4): sigma_0(8n + 4) = sigma_0(4) sigma_0(2n + 1) = 3 sigma_0(2n + 1).
TEST(Search, SigmaZeroModThreeOnlyAtFloor) {
  auto r = search_congruences(sigma_function(0), 3, 1, 8, config());
  ASSERT_EQ(r.hits.size(), 1u);
  EXPECT_EQ(r.hits[0].A, 8u);
  EXPECT_EQ(r.hits[0].B, 4u);
  EXPECT_EQ(r.hits[0].certificate.term_fixed, ExtendedNat(1));
  EXPECT_EQ(r.hits[0].certificate.scan_V.value, ExtendedNat(1));
  EXPECT_EQ(r.refuted + 1, r.cells);
}

TEST(Search, HitsAgreeWithOracleScan) {
  auto r = search_congruences(sigma_function(0), 2, 2, 24, config(400));
  for (std::uint64_t A = 1; A <= 24; ++A) {
    for (std::uint64_t B = 1; B <= A; ++B) {
      auto v = oracle::scan([](std::uint64_t m) { return oracle::divisor_sum(0, m); }, 2, A, B, 400);
      ASSERT_EQ(has_hit(r, A, B), *v >= 2) << A << " " << B;
    }
  }
}

TEST(Structure, ThirtySixSix) {
  auto r = search_congruences(sigma_function(0), 2, 2, 36, config());
  auto it = std::find_if(r.hits.begin(), r.hits.end(), [](auto& h) { return h.A == 36 && h.B == 6; });
  ASSERT_NE(it, r.hits.end());
  auto check = conjecture_structure_check(*it);
  ASSERT_TRUE(check.ok()) << check.failure;
  ASSERT_TRUE(check.structure);
  EXPECT_EQ(check.structure->primes.size(), 1u);
  const auto P = check.structure->P;
  EXPECT_EQ(6 % P, 0u);
  EXPECT_EQ(36 % (P * P), 0u);
  EXPECT_EQ(r.structure_failures(), 0u);
}

TEST(Structure, MissingPrimeFactorsIsReported) {
  SearchHit h;
  h.A = 8;
  h.B = 7;
  h.p = 2;
  h.k = 2;
  h.certificate.progression = decompose_progression(8, 7);
  auto check = conjecture_structure_check(h);
  EXPECT_FALSE(check.ok());
}

// Square or twice-square classes can only support sigma congruences mod 2
// through G'. Holds on coprime cells; (12, 3) is a known exception once G > 1.
TEST(Gate, SquareClassesCarryNothingWhenCoprime) {
  for (std::uint64_t k : {0, 1}) {
    auto r = search_congruences(sigma_function(k), 2, 1, 30, config());
    for (auto& h : r.hits) {
      const auto& pr = h.certificate.progression;
      if (pr.G != 1) continue;
      auto q = quadratic_class(pr.B_prime, pr.A_prime);
      EXPECT_FALSE(q.is_square_mod || (k == 1 && q.is_twice_square_mod)) << h.A << " " << h.B;
    }
  }
  // 12n + 3 = 3^a m with m = 3 (mod 4) whenever a is even, so V_2 = 2 there.
  auto pinned = scan_valuation(sigma_function(1), 2, 12, 3, 5000);
  EXPECT_EQ(pinned.value, ExtendedNat(2));
  EXPECT_TRUE(quadratic_class(1, 4).is_square_mod);
}

TEST(CorollarySuite, MeasuredValues) {
  auto r = corollary_suite(config(20000));
  std::size_t mod7 = 0;
  for (auto& row : r.rows) {
    if (row.group == "mod-7") {
      ++mod7;
      if (row.asserted) EXPECT_TRUE(row.passed) << row.id << " b=" << row.B;
      continue;
    }
    const auto k = row.sigma_k;
    auto want = oracle::scan([&](std::uint64_t m) { return oracle::divisor_sum(k, m); }, row.p, row.A,
                             row.B, 200);
    ASSERT_EQ(row.scan.value(), *want) << row.id << " k=" << k << " " << row.A << "," << row.B;
  }
  EXPECT_EQ(mod7, 8u);
  // Measured: the 3-adic rows follow 1 + nu_3(k) and the 5-adic rows vanish.
  for (auto& row : r.rows) {
    if (row.group != "exact-values") continue;
    if (row.p == 3) EXPECT_EQ(row.scan, ExtendedNat(row.sigma_k % 9 == 0 ? 3 : row.sigma_k % 3 == 0 ? 2 : 1));
    if (row.p == 5) EXPECT_EQ(row.scan, ExtendedNat(0));
  }
}

TEST(TwoSquares, CriterionAndExamples) {
  EXPECT_TRUE(fails_two_squares_criterion(3));
  EXPECT_FALSE(fails_two_squares_criterion(25));
  EXPECT_TRUE(fails_two_squares_criterion(21));
  EXPECT_FALSE(fails_two_squares_criterion(9));
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    ASSERT_EQ(fails_two_squares_criterion(n), !oracle::is_sum_of_two_squares(n)) << n;
  }
  EXPECT_EQ(eval_mod(sigma_function(1), 3, 4), 0u);
  EXPECT_EQ(eval_mod(sigma_function(3), 21, 4), 0u);
  auto rep = two_squares_audit(3000, {1, 2, 3}, 2);
  EXPECT_EQ(rep.cross_checked_up_to, 3000u);
  EXPECT_EQ(rep.criterion_mismatches, 0u);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rows[0].failed, 0u);
  EXPECT_EQ(rep.rows[2].failed, 0u);
  // Even k breaks the factor 1 + q^k: sigma_2(3) = 10 = 2 (mod 4).
  EXPECT_EQ(rep.rows[1].first_failure, std::optional<std::uint64_t>(3));
  EXPECT_FALSE(rep.all_passed());
}

TEST(PhiClosedForm, Examples) {
  EXPECT_EQ(phi_closed_form(3, 21, 14), std::optional<ExtendedNat>(1));
  EXPECT_FALSE(phi_closed_form(3, 9, 3).has_value());
  EXPECT_EQ(phi_closed_form(5, 11, 23), std::optional<ExtendedNat>(0));
  EXPECT_EQ(scan_valuation(phi_function(), 3, 21, 14, 1000).value, ExtendedNat(1));
  EXPECT_EQ(scan_valuation(phi_function(), 5, 11, 23, 1000).value, ExtendedNat(0));
}

// For p = 2 the formula breaks: B' even forces phi(A'n + B') even unless the
// argument is 1 or 2. (5, 4) is the smallest example.
TEST(PhiClosedForm, EvenPrimeCounterexample) {
  EXPECT_EQ(phi_closed_form(2, 5, 4), std::optional<ExtendedNat>(0));
  EXPECT_EQ(scan_valuation(phi_function(), 2, 5, 4, 1000).value, ExtendedNat(1));
  auto rep = phi_closed_form_audit(20, {3, 5}, config());
  EXPECT_EQ(rep.mismatches(), 0u);
}

TEST(Consistency, SmallGrid) {
  auto rep = theorem_consistency_audit({sigma_function(0), phi_function()}, {2, 3}, 16, config(2000));
  for (auto& row : rep.rows) {
    EXPECT_EQ(row.scan_below_rhs, 0u) << row.function << " p=" << row.p;
    EXPECT_TRUE(row.failures.empty());
    EXPECT_EQ(row.cells, 136u);
  }
  // (12, 3) is one of the exact-but-unequal cells.
  auto& s0 = rep.rows.front();
  EXPECT_GT(s0.exact_unequal, 0u);
}

TEST(Corollary3, SmallGrid) {
  auto rep = corollary3_audit(60, config(5000));
  EXPECT_EQ(rep.violations(), 0u);
  EXPECT_GT(rep.coprime_hits_mod2, 0u);
  EXPECT_TRUE(rep.square_class_hits.empty());
}

TEST(Conjecture1, SmallGrid) {
  auto rep = conjecture1_audit({2, 3}, 60, config(5000));
  EXPECT_EQ(rep.failures(), 0u);
  ASSERT_EQ(rep.searches.size(), 2u);
  EXPECT_GT(rep.searches[0].hits.size(), rep.searches[1].hits.size());
}

TEST(Conjecture8, EvidenceIsDeterministic) {
  auto a = conjecture8_evidence({3, 5}, 30, config(2000));
  auto b = conjecture8_evidence({3, 5}, 30, config(2000));
  ASSERT_EQ(a.rows.size(), 2u);
  EXPECT_EQ(a.hits(), b.hits());
}
