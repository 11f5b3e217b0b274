#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ramcong/engine.hpp"
#include "ramcong/errors.hpp"

using namespace ramcong;

namespace {

EngineConfig small_config(std::uint64_t horizon = 2000) {
  EngineConfig c;
  c.n_horizon = horizon;
  return c;
}

}  // namespace

TEST(Scan, Examples) {
  auto a = scan_valuation(sigma_function(1), 2, 8, 7, 100);
  EXPECT_EQ(a.value, ExtendedNat(3));
  EXPECT_EQ(a.witness_n, std::optional<std::uint64_t>(0));
  EXPECT_FALSE(a.exact());

  auto b = scan_valuation(sigma_function(0), 2, 1, 1, 10);
  EXPECT_EQ(b.value, ExtendedNat(0));
  EXPECT_EQ(b.witness_n, std::optional<std::uint64_t>(0));

  EXPECT_EQ(scan_valuation(sigma_function(1), 3, 3, 2, 100).value, ExtendedNat(1));
}

TEST(Scan, MatchesOracleScan) {
  for (std::uint64_t k : {0, 1, 2}) {
    auto f = sigma_function(k);
    for (std::uint64_t p : {2, 3}) {
      for (std::uint64_t A = 1; A <= 12; ++A) {
        for (std::uint64_t B = 1; B <= A; ++B) {
          auto want = oracle::scan([&](std::uint64_t m) { return oracle::divisor_sum(k, m); }, p, A, B, 200);
          auto got = scan_valuation(f, p, A, B, 200);
          ASSERT_EQ(got.value.value(), *want) << k << " " << p << " " << A << " " << B;
        }
      }
    }
  }
}

TEST(Scan, MonotoneInHorizon) {
  auto f = sigma_function(0);
  for (std::uint64_t A = 1; A <= 30; ++A) {
    for (std::uint64_t B = 1; B <= A; ++B) {
      auto lo = scan_valuation(f, 2, A, B, 50);
      auto hi = scan_valuation(f, 2, A, B, 5000);
      ASSERT_LE(hi.value, lo.value) << A << " " << B;
    }
  }
}

TEST(Scan, InfiniteValuesAreSkipped) {
  auto f = table_function("z", PrimePowerTable{{{2, 1}, 0}, {{2, 2}, 4}, {{3, 1}, 6}});
  // 2n + 2 = 2, 4, 6: f = 0, 4, 0 -> nu_2 = inf, 2, inf
  auto s = scan_valuation(f, 2, 2, 2, 3);
  EXPECT_EQ(s.value, ExtendedNat(2));
  EXPECT_EQ(s.witness_n, std::optional<std::uint64_t>(1));
  EXPECT_THROW(scan_valuation(f, 2, 2, 2, 5), CoverageError);
}

TEST(Scan, IndependentOfParallelism) {
  auto f = sigma_function(0);
  ValuationOracle o(f, 2, 1 << 20);
  for (std::uint64_t A : {16, 64, 96}) {
    for (std::uint64_t B = 1; B <= A; B += 5) {
      auto s1 = scan_valuation(o, A, B, 20000, 1);
      auto s4 = scan_valuation(o, A, B, 20000, 4);
      ASSERT_EQ(s1.value, s4.value);
      ASSERT_EQ(s1.witness_n, s4.witness_n);
      ASSERT_EQ(s1.justification, s4.justification);
    }
  }
}

TEST(ComputeU, Examples) {
  auto a = compute_U(sigma_function(0), 2, 4, 1, 1, 3);
  EXPECT_EQ(a.value, ExtendedNat(0));
  EXPECT_TRUE(a.exact());

  auto b = compute_U(phi_function(), 3, 4, 1, 2, 7);
  EXPECT_EQ(b.value, ExtendedNat(1));
  EXPECT_TRUE(b.exact());

  auto c = compute_U(phi_function(), 5, 4, 1, 3, 5);
  EXPECT_EQ(c.value, ExtendedNat(2));
  EXPECT_TRUE(c.exact());
  ASSERT_TRUE(c.witness_exponent.has_value());
  EXPECT_EQ(c.witness_exponent->e, 3u);
}

TEST(ComputeU, PrimeDividingAPrimeIsContractViolation) {
  EXPECT_THROW(compute_U(sigma_function(0), 2, 6, 1, 1, 3), ContractViolation);
}

TEST(ComputeM, Examples) {
  auto a = compute_M(sigma_function(0), 2, 4, 1, 3, small_config());
  EXPECT_EQ(a.value, ExtendedNat(0));
  EXPECT_TRUE(a.exact());
  ASSERT_TRUE(a.witness_n.has_value());
  // Any reported witness must reproduce an odd sigma_0 on the part coprime to 3.
  EXPECT_EQ(eval_valuation(sigma_function(0), 2, coprime_part(4 * *a.witness_n + 1, 3)), ExtendedNat(0));

  auto b = compute_M(sigma_function(0), 3, 7, 3, 1, small_config());
  EXPECT_EQ(b.value, ExtendedNat(0));
  EXPECT_TRUE(b.exact());

  auto c = compute_M(sigma_function(1), 2, 8, 7, 1, small_config(100));
  EXPECT_EQ(c.value, ExtendedNat(3));
  EXPECT_FALSE(c.exact());
}

TEST(Decomposition, Examples) {
  auto a = theorem_decomposition(sigma_function(0), 2, 12, 3, small_config());
  EXPECT_EQ(a.term_fixed, ExtendedNat(0));
  ASSERT_EQ(a.terms_U.size(), 1u);
  EXPECT_EQ(a.terms_U[0].q, 3u);
  EXPECT_EQ(a.terms_U[0].value.value, ExtendedNat(0));
  EXPECT_EQ(a.term_M.value, ExtendedNat(0));
  EXPECT_EQ(a.rhs_total.value, ExtendedNat(0));
  EXPECT_TRUE(a.rhs_total.exact());

  auto b = theorem_decomposition(sigma_function(0), 2, 9, 3, small_config());
  EXPECT_EQ(b.progression.G_prime, 3u);
  EXPECT_EQ(b.term_fixed, ExtendedNat(1));
  EXPECT_TRUE(b.terms_U.empty());
  EXPECT_EQ(b.term_M.value, ExtendedNat(0));
  EXPECT_TRUE(b.term_M.exact());
  EXPECT_EQ(b.rhs_total.value, ExtendedNat(1));

  for (auto f : {sigma_function(0), sigma_function(1), phi_function()}) {
    auto t = theorem_decomposition(f, 2, 1, 1, small_config());
    EXPECT_EQ(t.term_fixed, ExtendedNat(0));
    EXPECT_TRUE(t.terms_U.empty());
    EXPECT_EQ(t.rhs_total.value, t.term_M.value);
  }
}

// The decomposition never exceeds the true minimum; the scan is an upper bound
// for the true minimum, so rhs <= scan must hold everywhere.
TEST(Decomposition, NeverExceedsScan) {
  for (auto f : {sigma_function(0), sigma_function(1), phi_function()}) {
    for (std::uint64_t p : {2, 3}) {
      ValuationOracle o(f, p, 200000);
      for (std::uint64_t A = 1; A <= 24; ++A) {
        for (std::uint64_t B = 1; B <= A; ++B) {
          auto d = theorem_decomposition(o, A, B, small_config());
          auto s = scan_valuation(o, A, B, 2000);
          ASSERT_LE(d.rhs_total.value, s.value) << f.name() << " p=" << p << " " << A << "," << B;
        }
      }
    }
  }
}

// The sum can undershoot when the U and M minimisers are not simultaneously
// attainable: 12n + 3 = 3(4n + 1) and 4n + 1 is never 3 mod 4, yet
// sigma_0(12n + 3) is always even because 12n + 3 is never a square.
TEST(Decomposition, KnownUndershoot) {
  auto d = theorem_decomposition(sigma_function(0), 2, 12, 3, small_config());
  auto s = scan_valuation(sigma_function(0), 2, 12, 3, 2000);
  EXPECT_EQ(d.rhs_total.value, ExtendedNat(0));
  EXPECT_EQ(s.value, ExtendedNat(1));
}

TEST(Certify, Examples) {
  auto a = certify_congruence(sigma_function(1), 2, 2, 4, 3, small_config());
  EXPECT_NE(a.status, CertificateStatus::Refuted);
  EXPECT_EQ(a.scan_V.value, ExtendedNat(2));

  auto b = certify_congruence(sigma_function(0), 2, 2, 4, 3, small_config());
  EXPECT_EQ(b.status, CertificateStatus::Refuted);
  EXPECT_EQ(b.refutation_witness, std::optional<std::uint64_t>(0));

  // sigma_1(2) = 3 is a unit mod 5, so 5n + 2 carries no congruence mod 5.
  auto c = certify_congruence(sigma_function(1), 5, 1, 5, 2, small_config());
  EXPECT_EQ(c.status, CertificateStatus::Refuted);
  EXPECT_EQ(c.refutation_witness, std::optional<std::uint64_t>(0));
  EXPECT_EQ(c.scan_V.value, ExtendedNat(0));
}

TEST(Certify, CertifiedWhenDecompositionIsExact) {
  auto c = certify_congruence(sigma_function(0), 2, 1, 9, 3, small_config());
  EXPECT_EQ(c.status, CertificateStatus::Certified);
  EXPECT_TRUE(c.rhs_attained);
  EXPECT_TRUE(certificate_invariant_violations(c).empty());
}

TEST(Certify, RefutationWitnessesAreSound) {
  auto f = sigma_function(2);
  for (std::uint64_t A = 1; A <= 20; ++A) {
    for (std::uint64_t B = 1; B <= A; ++B) {
      auto c = certify_congruence(f, 2, 3, A, B, small_config(500));
      if (c.status != CertificateStatus::Refuted) continue;
      ASSERT_TRUE(c.refutation_witness);
      const auto m = A * *c.refutation_witness + B;
      ASSERT_LT(*oracle::nu(2, oracle::divisor_sum(2, m)), 3u) << A << " " << B;
    }
  }
}

// Any congruence on (A, B) holds on each sub-progression (mA, B + jA).
TEST(Certify, SubProgressionCoherence) {
  auto f = sigma_function(1);
  ValuationOracle o(f, 2, 1 << 20);
  for (std::uint64_t A = 1; A <= 12; ++A) {
    for (std::uint64_t B = 1; B <= A; ++B) {
      auto parent = scan_valuation(o, A, B, 4000);
      for (std::uint64_t m : {2, 3}) {
        for (std::uint64_t j = 0; j < m; ++j) {
          auto child = scan_valuation(o, m * A, B + j * A, 2000);
          ASSERT_GE(child.value, parent.value) << A << "," << B << " m=" << m << " j=" << j;
        }
      }
    }
  }
}

TEST(CertificateJson, RoundTripAndReverify) {
  auto f = sigma_function(0);
  for (auto [A, B] : {std::pair<std::uint64_t, std::uint64_t>{9, 3}, {12, 3}, {36, 6}, {4, 3}}) {
    auto c = certify_congruence(f, 2, 1, A, B, small_config());
    const auto text = certificate_to_json(c);
    auto back = certificate_from_json(text);
    EXPECT_EQ(certificate_to_json(back), text);
    EXPECT_TRUE(reverify_certificate(back, f).empty()) << text;
  }
}

TEST(CertificateJson, TamperingIsDetected) {
  auto f = sigma_function(0);
  auto c = certify_congruence(f, 2, 1, 9, 3, small_config());
  auto t = c;
  t.term_fixed = ExtendedNat(4);
  EXPECT_FALSE(reverify_certificate(t, f).empty());
  t = c;
  t.scan_V.value = ExtendedNat(0);
  EXPECT_FALSE(reverify_certificate(t, f).empty());
  t = c;
  t.status = CertificateStatus::Refuted;
  EXPECT_FALSE(certificate_invariant_violations(t).empty());
  EXPECT_THROW(certificate_from_json("{\"schema\": \"other\"}"), ParseError);
  EXPECT_THROW(certificate_from_json("not json"), ParseError);
}

TEST(CertificateJson, StableKeyOrder) {
  auto c = certify_congruence(sigma_function(1), 2, 2, 4, 3, small_config());
  const auto text = certificate_to_json(c);
  const char* keys[] = {"\"schema\"", "\"function\"", "\"p\"",     "\"k\"",      "\"progression\"",
                        "\"term_fixed\"", "\"terms_U\"", "\"term_M\"", "\"rhs_total\"", "\"scan_V\"",
                        "\"status\"", "\"config\"", "\"notes\""};
  std::size_t at = 0;
  for (const char* k : keys) {
    auto pos = text.find(k, at);
    ASSERT_NE(pos, std::string::npos) << k;
    at = pos;
  }
}

TEST(Certify, IndependentOfParallelism) {
  auto f = sigma_function(0);
  for (std::uint64_t A : {12, 36, 45}) {
    for (std::uint64_t B = 1; B <= A; B += 4) {
      EngineConfig c1 = small_config(20000), c4 = c1;
      c4.parallelism = 4;
      EXPECT_EQ(certificate_to_json(certify_congruence(f, 2, 2, A, B, c1)),
                certificate_to_json(certify_congruence(f, 2, 2, A, B, c4)));
    }
  }
}
