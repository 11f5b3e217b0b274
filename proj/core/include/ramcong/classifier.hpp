#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ramcong/engine.hpp"
#include "ramcong/mult_fn.hpp"
#include "ramcong/valuation_oracle.hpp"

namespace ramcong {

// scan_valuation results for every cell 1 <= B <= A <= A_max.
struct ScanCell {
  ExtendedNat value = ExtendedNat::infinity();
  std::uint64_t witness = 0;
  std::uint64_t infinite_count = 0;
  bool stopped_early = false;
  std::string error;  // non-empty when evaluation failed for this cell
};

class GridScan {
 public:
  GridScan(std::uint64_t A_max, std::uint64_t horizon);

  std::uint64_t A_max() const { return A_max_; }
  std::uint64_t horizon() const { return horizon_; }
  ScanCell& cell(std::uint64_t A, std::uint64_t B);
  const ScanCell& cell(std::uint64_t A, std::uint64_t B) const;
  // The cell as scan_valuation would report it.
  CertainNat result(std::uint64_t A, std::uint64_t B) const;

 private:
  std::uint64_t A_max_;
  std::uint64_t horizon_;
  std::vector<ScanCell> cells_;
};

// Walks n outward for all B of one A at once, dropping B once it reaches 0.
GridScan grid_scan(const ValuationOracle& oracle, std::uint64_t A_max, std::uint64_t horizon,
                   unsigned parallelism = 1);

// Oracle with a dense table covering every value a grid scan touches
// (capped to keep memory bounded).
ValuationOracle grid_oracle(const FnDescriptor& f, std::uint64_t p, std::uint64_t A_max,
                            std::uint64_t horizon);

struct ConjectureStructure {
  std::uint64_t P = 1;
  std::vector<std::uint64_t> primes;  // p_1 <= ... <= p_{k-1}
  std::uint64_t G_prime_omega = 0;    // prime factors of G' with multiplicity
  std::uint64_t nu2_sigma0_G_prime = 0;
  bool P_divides_B = false;
  bool P_squared_divides_A = false;
};

struct StructureCheck {
  std::optional<ConjectureStructure> structure;
  std::string failure;  // empty when the structure exists and divides as required

  bool ok() const { return failure.empty(); }
};

struct SearchHit {
  std::uint64_t A = 0;
  std::uint64_t B = 0;
  std::uint64_t p = 0;
  std::uint64_t k = 0;
  Certificate certificate;
  // Only for sigma_0 modulo 2^k with k >= 2.
  std::optional<StructureCheck> structure_check;
};

struct NearMiss {
  std::uint64_t A = 0;
  std::uint64_t B = 0;
  std::uint64_t witness = 0;
};

struct CellFailure {
  std::uint64_t A = 0;
  std::uint64_t B = 0;
  std::string error;
};

struct SearchResult {
  std::string function;
  std::uint64_t p = 0;
  std::uint64_t k = 0;
  std::uint64_t A_max = 0;
  EngineConfig config;
  std::uint64_t cells = 0;
  std::uint64_t refuted = 0;
  std::vector<SearchHit> hits;           // sorted by (A, B)
  std::vector<NearMiss> near_misses;     // scan value k - 1
  std::vector<CellFailure> failures;

  std::size_t structure_failures() const;
};

// All non-Refuted cells 1 <= B <= A <= A_max for f(An+B) = 0 (mod p^k).
SearchResult search_congruences(const FnDescriptor& f, std::uint64_t p, std::uint64_t k,
                                std::uint64_t A_max, const EngineConfig& config);
// Same with a prebuilt oracle and, optionally, a grid scan at config.n_horizon.
SearchResult search_congruences(const ValuationOracle& oracle, std::uint64_t k,
                                std::uint64_t A_max, const EngineConfig& config,
                                const GridScan* grid = nullptr);

// For a sigma_0 congruence modulo 2^k (k >= 2): builds P from the prime
// factors of G' and checks P | B and P^2 | A.
StructureCheck conjecture_structure_check(const SearchHit& hit);

struct SuiteRow {
  std::string group;  // "exact-values" or "mod-7"
  std::string id;
  std::uint64_t sigma_k = 0;
  std::uint64_t p = 0;
  std::uint64_t A = 0;
  std::uint64_t B = 0;
  std::string expectation;  // "= v", ">= v" or "report"
  std::uint64_t expected = 0;
  ExtendedNat scan;
  std::uint64_t witness = 0;
  ExtendedNat rhs;
  Certainty rhs_certainty = Certainty::UpperBoundAtHorizon;
  bool asserted = true;
  bool passed = false;
};

struct SuiteReport {
  std::vector<SuiteRow> rows;

  std::size_t failures(const std::string& group = {}) const;
};

// The odd-k exact values and the mod-7 congruences (b in {3,5,6}), with the
// b = 4 outcome reported but not asserted.
SuiteReport corollary_suite(const EngineConfig& config);

struct TwoSquaresRow {
  std::uint64_t k = 0;
  std::uint64_t non_sums = 0;
  std::uint64_t failed = 0;
  std::optional<std::uint64_t> first_failure;
};

struct TwoSquaresReport {
  std::uint64_t N = 0;
  std::uint64_t cross_checked_up_to = 0;
  std::uint64_t criterion_mismatches = 0;
  std::optional<std::uint64_t> first_mismatch;
  std::vector<TwoSquaresRow> rows;

  bool all_passed() const;
};

// True iff some prime q = 3 (mod 4) divides n to an odd power.
bool fails_two_squares_criterion(std::uint64_t n);

TwoSquaresReport two_squares_audit(std::uint64_t N, const std::vector<std::uint64_t>& k_list,
                                   unsigned parallelism = 1);

// Closed form for V_p(A, B; phi) when B' != 1 (mod p); nullopt otherwise.
std::optional<ExtendedNat> phi_closed_form(std::uint64_t p, std::uint64_t A, std::uint64_t B);

struct CellMismatch {
  std::uint64_t A = 0;
  std::uint64_t B = 0;
  ExtendedNat expected;
  ExtendedNat scan;
};

struct PhiAgreementRow {
  std::uint64_t p = 0;
  std::uint64_t applicable = 0;
  std::uint64_t inapplicable = 0;
  std::vector<CellMismatch> mismatches;
};

struct PhiAgreementReport {
  std::uint64_t A_max = 0;
  std::vector<PhiAgreementRow> rows;

  std::uint64_t mismatches() const;
};

PhiAgreementReport phi_closed_form_audit(std::uint64_t A_max, const std::vector<std::uint64_t>& primes,
                                         const EngineConfig& config);

struct ConsistencyRow {
  std::string function;
  std::uint64_t p = 0;
  std::uint64_t cells = 0;
  std::uint64_t exact_cells = 0;
  std::uint64_t scan_below_rhs = 0;   // scan < rhs
  std::uint64_t exact_unequal = 0;    // rhs exact and scan != rhs
  std::vector<CellMismatch> examples; // first few violations, by (A, B)
  std::vector<CellFailure> failures;
};

struct ConsistencyReport {
  std::uint64_t A_max = 0;
  std::vector<ConsistencyRow> rows;

  std::uint64_t violations() const;
};

// Decomposition against scan over every cell, for each (f, p).
ConsistencyReport theorem_consistency_audit(const std::vector<FnDescriptor>& functions,
                                            const std::vector<std::uint64_t>& primes,
                                            std::uint64_t A_max, const EngineConfig& config);

struct Conjecture1Report {
  std::uint64_t A_max = 0;
  std::vector<SearchResult> searches;  // one per k

  std::uint64_t failures() const;
};

// sigma_0 modulo 2^k for each k, every hit through conjecture_structure_check.
Conjecture1Report conjecture1_audit(const std::vector<std::uint64_t>& k_list, std::uint64_t A_max,
                                    const EngineConfig& config, const GridScan* sigma0_p2 = nullptr);

struct SquareClassHit {
  std::uint64_t A = 0;
  std::uint64_t B = 0;
  int kronecker = 0;
  bool is_square_mod = false;
};

struct Corollary3Report {
  std::uint64_t A_max = 0;
  std::uint64_t coprime_hits_mod2 = 0;
  // Coprime mod-2 hits whose B is a square mod A (expected none).
  std::vector<SquareClassHit> square_class_hits;
  // Coprime mod-2 hits with Kronecker symbol +1 although B is not a square mod A.
  std::vector<SquareClassHit> symbol_residue_gaps;
  struct PrimeRow {
    std::uint64_t p = 0;
    std::uint64_t cells = 0;
    std::vector<CellMismatch> above_floor;  // scan > nu_p(sigma_0(G'))
  };
  std::vector<PrimeRow> odd_primes;

  std::uint64_t violations() const;
};

Corollary3Report corollary3_audit(std::uint64_t A_max, const EngineConfig& config,
                                  const GridScan* sigma0_p2 = nullptr);

struct Conjecture8Row {
  std::uint64_t p = 0;
  std::uint64_t coprime_cells = 0;
  std::vector<CellMismatch> hits;  // scan >= 1; expected = 1
};

struct Conjecture8Report {
  std::uint64_t A_max = 0;
  std::vector<Conjecture8Row> rows;

  std::uint64_t hits() const;
};

// phi(A'n + B') = 0 (mod p) over coprime cells; evidence only.
Conjecture8Report conjecture8_evidence(const std::vector<std::uint64_t>& primes,
                                       std::uint64_t A_max, const EngineConfig& config);

}  // namespace ramcong
