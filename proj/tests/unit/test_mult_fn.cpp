#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ramcong/errors.hpp"
#include "ramcong/function_document.hpp"
#include "ramcong/arith.hpp"
#include "ramcong/mult_fn.hpp"
#include "ramcong/valuation_oracle.hpp"

using namespace ramcong;

TEST(EvalPrimePower, Examples) {
  EXPECT_EQ(eval_prime_power(sigma_function(0), 3, 2), 3);
  EXPECT_EQ(eval_prime_power(sigma_function(1), 7, 1), 8);
  EXPECT_EQ(eval_prime_power(phi_function(), 2, 3), 4);
  EXPECT_EQ(eval_prime_power(phi_function(), 5, 0), 1);
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval(sigma_function(0), 25), 3);
  EXPECT_EQ(eval(sigma_function(1), 15), 24);
  EXPECT_EQ(eval(phi_function(), 14), 6);
  EXPECT_THROW(eval(phi_function(), 0), DomainError);
}

TEST(Eval, MatchesDivisorSumOracle) {
  for (std::uint64_t k : {0, 1, 2, 3, 11}) {
    auto f = sigma_function(k);
    for (std::uint64_t n = 1; n <= 400; ++n) ASSERT_EQ(eval(f, n), oracle::divisor_sum(k, n)) << k << " " << n;
  }
  auto phi = phi_function();
  for (std::uint64_t n = 1; n <= 1000; ++n) ASSERT_EQ(eval(phi, n), oracle::totient(n)) << n;
}

TEST(EvalMod, Examples) {
  EXPECT_EQ(eval_mod(sigma_function(11), 3, 2048), 1020u);  // (1 + 3^11) mod 2^11
  EXPECT_EQ(eval_mod(sigma_function(0), 49, 4), 3u);
  EXPECT_EQ(eval_mod(sigma_function(71), 11, 125), 87u);   // (1 + 11^71) mod 5^3
}

TEST(EvalMod, MatchesOracleForLargeExponents) {
  for (std::uint64_t k : {9, 71, 1231}) {
    auto f = sigma_function(k);
    for (std::uint64_t n = 1; n <= 60; ++n) {
      for (std::uint64_t M : {4ull, 125ull, 2187ull, 8192ull, 1000000007ull}) {
        const mpz_class want = oracle::divisor_sum(k, n) % static_cast<unsigned long>(M);
        ASSERT_EQ(eval_mod(f, n, M), want.get_ui()) << k << " " << n << " " << M;
      }
    }
  }
}

TEST(EvalValuation, MatchesOracle) {
  auto f = sigma_function(3);
  for (std::uint64_t p : {2, 3, 7}) {
    for (std::uint64_t n = 1; n <= 500; ++n) {
      ASSERT_EQ(eval_valuation(f, p, n).value(), *oracle::nu(p, oracle::divisor_sum(3, n)));
    }
  }
}

TEST(ValuationProfileTest, SigmaZeroIsClosedForm) {
  auto prof = valuation_profile(sigma_function(0), 2, 3);
  EXPECT_EQ(prof.kind, ProfileKind::ClosedForm);
  EXPECT_TRUE(prof.registered);
  for (std::uint64_t e = 0; e < 40; ++e) {
    ASSERT_EQ(prof.at(e), std::optional<ExtendedNat>(*oracle::nu(2, e + 1))) << e;
  }
}

TEST(ValuationProfileTest, PhiAwayFromP) {
  auto prof = valuation_profile(phi_function(), 3, 7);
  EXPECT_EQ(prof.kind, ProfileKind::ClosedForm);
  for (std::uint64_t e = 1; e < 20; ++e) EXPECT_EQ(prof.at(e), std::optional<ExtendedNat>(1));
  EXPECT_EQ(prof.at(0), std::optional<ExtendedNat>(0));
}

TEST(ValuationProfileTest, SampledValuesMatchDirectEvaluation) {
  auto f = sigma_function(5);
  auto prof = valuation_profile(f, 3, 2, 30);
  for (std::uint64_t e = 0; e <= 30; ++e) {
    auto v = prof.at(e);
    if (!v && e < prof.samples.size()) v = prof.samples[e];
    if (!v) continue;
    ASSERT_EQ(*v, nu(3, eval_prime_power(f, 2, e))) << e;
  }
}

TEST(TableFunction, CoverageErrorNamesPrimePower) {
  auto f = table_function("t", PrimePowerTable{{{2, 1}, 0}});
  EXPECT_EQ(eval(f, 2), 0);
  EXPECT_EQ(eval(f, 1), 1);
  try {
    eval(f, 6);
    FAIL() << "expected CoverageError";
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.prime(), 3u);
    EXPECT_EQ(e.exponent(), 1u);
  }
  EXPECT_EQ(eval_valuation(f, 2, 2), ExtendedNat::infinity());
}

TEST(FunctionDocumentTest, NamedAndTableFamilies) {
  auto s = load_custom(parse_function_document("family = sigma\nk = 0\n"));
  EXPECT_EQ(s.sigma_k(), std::optional<std::uint64_t>(0));
  EXPECT_EQ(eval(s, 12), 6);

  auto t = load_custom(parse_function_document("# demo\nfamily = table\nname = z\ntable = 2 1 0\n"));
  EXPECT_EQ(eval(t, 2), 0);
  EXPECT_THROW(eval(t, 3), CoverageError);
  EXPECT_THROW(parse_function_document("family = sigma\nkk = 1\n"), ParseError);
  EXPECT_THROW(parse_function_document("family = sigma\nk = x\n"), ParseError);
}

TEST(FunctionDocumentTest, TauFamilyMatchesOracle) {
  auto doc = parse_function_document("family = tau\nhorizon = 200\n");
  auto f = load_custom(doc);
  auto want = oracle::tau(120);
  for (std::uint64_t n = 1; n <= 120; ++n) ASSERT_EQ(eval(f, n), want[n]) << n;
}

TEST(ValuationOracleTest, DenseTableAgreesWithEvaluation) {
  for (std::uint64_t p : {2, 3, 5}) {
    for (auto f : {sigma_function(0), sigma_function(1), phi_function()}) {
      ValuationOracle o(f, p, 5000);
      for (std::uint64_t m = 1; m <= 6000; ++m) ASSERT_EQ(o.at(m), eval_valuation(f, p, m)) << m;
    }
  }
}
