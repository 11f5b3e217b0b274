#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ramcong/arith.hpp"
#include "ramcong/extended_nat.hpp"
#include "ramcong/mult_fn.hpp"
#include "ramcong/valuation_oracle.hpp"

namespace ramcong {

enum class Certainty { CertifiedExact, UpperBoundAtHorizon };

std::string to_string(Certainty c);
Certainty parse_certainty(std::string_view s);

struct ExponentWitness {
  std::uint64_t q = 0;
  std::uint64_t e = 0;

  friend bool operator==(const ExponentWitness&, const ExponentWitness&) = default;
};

// A valuation together with how much of it is known.
//
// CertifiedExact values carry a justification (registered profile, Dirichlet
// witness, zero lower bound). UpperBoundAtHorizon values are minima over a
// finite range and can only decrease as the range grows.
struct CertainNat {
  ExtendedNat value;
  Certainty certainty = Certainty::UpperBoundAtHorizon;
  std::optional<std::uint64_t> witness_n;
  std::optional<ExponentWitness> witness_exponent;
  std::uint64_t horizon = 0;
  std::string justification;

  bool exact() const { return certainty == Certainty::CertifiedExact; }
};

// Default horizons resolve every desk-scale example; all are overridable.
struct EngineConfig {
  std::uint64_t n_horizon = 100'000;
  std::uint64_t exponent_horizon = kDefaultExponentHorizon;
  std::uint64_t witness_budget = 25;
  std::uint64_t candidate_bound = kDefaultCandidateBound;
  unsigned parallelism = 1;
};

// min over 0 <= n < horizon of nu_p(f(A n + B)), smallest minimising n as
// witness. Never certified. Stops early once 0 is seen; the result does not
// depend on parallelism.
CertainNat scan_valuation(const ValuationOracle& oracle, std::uint64_t A, std::uint64_t B,
                          std::uint64_t horizon, unsigned parallelism = 1);
CertainNat scan_valuation(const FnDescriptor& f, std::uint64_t p, std::uint64_t A, std::uint64_t B,
                          std::uint64_t horizon, unsigned parallelism = 1);

// Builds the scan result the way scan_valuation reports it. `infinite_count`
// counts n with f(An+B) = 0 before the scan stopped; `stopped_early` is true
// when a 0 was found before the last n.
CertainNat make_scan_result(ExtendedNat value, std::uint64_t witness, std::uint64_t horizon,
                            std::uint64_t infinite_count, bool stopped_early);

// min over e >= 0 of nu_p(f(q^{a + e})). Requires q not dividing A'.
CertainNat compute_U(const FnDescriptor& f, std::uint64_t p, std::uint64_t A_prime,
                     std::uint64_t B_prime, std::uint64_t a, std::uint64_t q,
                     std::uint64_t exponent_horizon = kDefaultExponentHorizon);

// min over n of nu_p(f(coprime_part(A' n + B', C))). Requires gcd(A', B') = 1.
CertainNat compute_M(const ValuationOracle& oracle, std::uint64_t A_prime, std::uint64_t B_prime,
                     std::uint64_t C, const EngineConfig& config);
CertainNat compute_M(const FnDescriptor& f, std::uint64_t p, std::uint64_t A_prime,
                     std::uint64_t B_prime, std::uint64_t C, const EngineConfig& config);

struct UTerm {
  std::uint64_t q = 0;
  std::uint64_t a = 0;  // nu_q(G)
  CertainNat value;
};

struct Decomposition {
  Progression progression;
  ExtendedNat term_fixed;  // nu_p(f(G'))
  std::vector<UTerm> terms_U;
  CertainNat term_M;
  // term_fixed + sum U + M; CertifiedExact only when every summand is.
  CertainNat rhs_total;
};

// `scan_of_AB`, when given, must be scan_valuation(oracle, A, B, config.n_horizon);
// for G = 1 it doubles as the M scan.
Decomposition theorem_decomposition(const ValuationOracle& oracle, std::uint64_t A,
                                    std::uint64_t B, const EngineConfig& config,
                                    const CertainNat* scan_of_AB = nullptr);
Decomposition theorem_decomposition(const FnDescriptor& f, std::uint64_t p, std::uint64_t A,
                                    std::uint64_t B, const EngineConfig& config);

enum class CertificateStatus { Certified, VerifiedToHorizon, Refuted };

std::string to_string(CertificateStatus s);
CertificateStatus parse_status(std::string_view s);

// Evidence for or against f(A n + B) = 0 (mod p^k) for all n >= 0.
struct Certificate {
  std::string function;
  std::uint64_t p = 0;
  std::uint64_t k = 0;
  Progression progression;
  ExtendedNat term_fixed;
  std::vector<UTerm> terms_U;
  CertainNat term_M;
  CertainNat rhs_total;
  CertainNat scan_V;
  CertificateStatus status = CertificateStatus::VerifiedToHorizon;
  std::optional<std::uint64_t> refutation_witness;
  // scan_V.value == rhs_total.value.
  bool rhs_attained = false;
  EngineConfig config;
  std::vector<std::string> notes;
};

Certificate certify_congruence(const ValuationOracle& oracle, std::uint64_t k, std::uint64_t A,
                               std::uint64_t B, const EngineConfig& config);
// Same, reusing a scan already computed at config.n_horizon.
Certificate certify_congruence(const ValuationOracle& oracle, std::uint64_t k, std::uint64_t A,
                               std::uint64_t B, const EngineConfig& config, CertainNat scan);
Certificate certify_congruence(const FnDescriptor& f, std::uint64_t p, std::uint64_t k,
                               std::uint64_t A, std::uint64_t B, const EngineConfig& config);

// Structural invariants (sum, status rules). Empty when consistent.
std::vector<std::string> certificate_invariant_violations(const Certificate& cert);
// Structural invariants plus re-evaluation of every witness against f.
std::vector<std::string> reverify_certificate(const Certificate& cert, const FnDescriptor& f);

// JSON with a fixed key order; parse accepts exactly what serialize writes.
std::string certificate_to_json(const Certificate& cert, int indent = 2);
Certificate certificate_from_json(std::string_view text);

}  // namespace ramcong
