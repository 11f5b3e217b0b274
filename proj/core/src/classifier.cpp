#include "ramcong/classifier.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ramcong/arith.hpp"
#include "ramcong/errors.hpp"
#include "ramcong/parallel.hpp"

namespace ramcong {

namespace {

// 128 MiB of dense table at most; larger grids fall back to direct evaluation.
constexpr std::uint64_t kMaxDenseBound = std::uint64_t{1} << 27;
constexpr std::size_t kMaxExamples = 10;

bool is_sigma0(const FnDescriptor& f) { return f.is_sigma_family() && f.sigma_k() == 0u; }

EngineConfig serial(EngineConfig config) {
  config.parallelism = 1;
  return config;
}

}  // namespace

GridScan::GridScan(std::uint64_t A_max, std::uint64_t horizon) : A_max_(A_max), horizon_(horizon) {
  if (A_max == 0 || horizon == 0) throw DomainError("GridScan: A_max and horizon must be >= 1");
  cells_.resize(A_max * (A_max + 1) / 2);
}

ScanCell& GridScan::cell(std::uint64_t A, std::uint64_t B) {
  if (A == 0 || A > A_max_ || B == 0 || B > A) throw DomainError("GridScan: cell out of range");
  return cells_[A * (A - 1) / 2 + (B - 1)];
}

const ScanCell& GridScan::cell(std::uint64_t A, std::uint64_t B) const {
  return const_cast<GridScan*>(this)->cell(A, B);
}

CertainNat GridScan::result(std::uint64_t A, std::uint64_t B) const {
  const ScanCell& c = cell(A, B);
  if (!c.error.empty()) throw std::runtime_error(c.error);
  return make_scan_result(c.value, c.witness, horizon_, c.infinite_count, c.stopped_early);
}

GridScan grid_scan(const ValuationOracle& oracle, std::uint64_t A_max, std::uint64_t horizon,
                   unsigned parallelism) {
  GridScan grid(A_max, horizon);
  if (u128(A_max) * horizon > std::numeric_limits<std::uint64_t>::max()) {
    throw DomainError("grid_scan: A_max * horizon exceeds 64 bits");
  }
  // Largest A first: those rows carry the most work.
  parallel_for(A_max, parallelism, [&](std::size_t i) {
    const std::uint64_t A = A_max - i;
    std::vector<std::uint64_t> active(A);
    std::iota(active.begin(), active.end(), 1);
    for (std::uint64_t n = 0; n < horizon && !active.empty(); ++n) {
      const std::uint64_t base = A * n;
      for (std::size_t j = 0; j < active.size();) {
        const std::uint64_t B = active[j];
        ScanCell& c = grid.cell(A, B);
        bool drop = false;
        try {
          const ExtendedNat v = oracle.at(base + B);
          if (v.is_infinite()) ++c.infinite_count;
          if (n == 0 || v < c.value) {
            c.value = v;
            c.witness = n;
          }
          if (v == ExtendedNat(0)) {
            c.stopped_early = n + 1 < horizon;
            drop = true;
          }
        } catch (const std::exception& e) {
          c.error = std::string(e.what()) + " (at n = " + std::to_string(n) + ")";
          drop = true;
        }
        if (drop) {
          active[j] = active.back();
          active.pop_back();
        } else {
          ++j;
        }
      }
    }
  });
  return grid;
}

ValuationOracle grid_oracle(const FnDescriptor& f, std::uint64_t p, std::uint64_t A_max,
                            std::uint64_t horizon) {
  const u128 bound = u128(A_max) * horizon;
  return ValuationOracle(f, p, bound <= kMaxDenseBound ? static_cast<std::uint64_t>(bound) : 0);
}

std::size_t SearchResult::structure_failures() const {
  return static_cast<std::size_t>(std::count_if(hits.begin(), hits.end(), [](const SearchHit& h) {
    return h.structure_check && !h.structure_check->ok();
  }));
}

SearchResult search_congruences(const FnDescriptor& f, std::uint64_t p, std::uint64_t k,
                                std::uint64_t A_max, const EngineConfig& config) {
  return search_congruences(grid_oracle(f, p, A_max, config.n_horizon), k, A_max, config);
}

SearchResult search_congruences(const ValuationOracle& oracle, std::uint64_t k,
                                std::uint64_t A_max, const EngineConfig& config,
                                const GridScan* grid) {
  if (A_max == 0) throw DomainError("search_congruences: A_max must be >= 1");
  if (k == 0) throw DomainError("search_congruences: k must be >= 1");
  std::optional<GridScan> local;
  if (grid == nullptr) {
    local.emplace(grid_scan(oracle, A_max, config.n_horizon, config.parallelism));
    grid = &*local;
  } else if (grid->A_max() < A_max || grid->horizon() != config.n_horizon) {
    throw DomainError("search_congruences: grid scan does not match A_max / horizon");
  }

  SearchResult out;
  out.function = oracle.function().name();
  out.p = oracle.prime();
  out.k = k;
  out.A_max = A_max;
  out.config = config;

  struct Candidate {
    std::uint64_t A, B;
  };
  std::vector<Candidate> candidates;
  for (std::uint64_t A = 1; A <= A_max; ++A) {
    for (std::uint64_t B = 1; B <= A; ++B) {
      ++out.cells;
      const ScanCell& c = grid->cell(A, B);
      if (!c.error.empty()) {
        out.failures.push_back({A, B, c.error});
      } else if (c.value < ExtendedNat(k)) {
        ++out.refuted;
        if (c.value == ExtendedNat(k - 1)) out.near_misses.push_back({A, B, c.witness});
      } else {
        candidates.push_back({A, B});
      }
    }
  }

  const bool structure = is_sigma0(oracle.function()) && oracle.prime() == 2 && k >= 2;
  const EngineConfig cell_config = serial(config);
  std::vector<std::optional<SearchHit>> hits(candidates.size());
  std::vector<std::string> errors(candidates.size());
  parallel_for(candidates.size(), config.parallelism, [&](std::size_t i) {
    const auto [A, B] = candidates[i];
    try {
      SearchHit hit{A, B, oracle.prime(), k,
                    certify_congruence(oracle, k, A, B, cell_config, grid->result(A, B)), {}};
      if (structure) hit.structure_check = conjecture_structure_check(hit);
      hits[i] = std::move(hit);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (hits[i]) {
      out.hits.push_back(std::move(*hits[i]));
    } else {
      out.failures.push_back({candidates[i].A, candidates[i].B, errors[i]});
    }
  }
  std::sort(out.failures.begin(), out.failures.end(), [](const CellFailure& a, const CellFailure& b) {
    return std::tie(a.A, a.B) < std::tie(b.A, b.B);
  });
  return out;
}

StructureCheck conjecture_structure_check(const SearchHit& hit) {
  StructureCheck check;
  if (hit.k < 2) {
    check.failure = "structure check needs k >= 2";
    return check;
  }
  if (hit.certificate.status == CertificateStatus::Refuted) {
    check.failure = "certificate is Refuted";
    return check;
  }
  const Progression pr = decompose_progression(hit.A, hit.B);
  ConjectureStructure s;
  for (const PrimePower& pe : pr.G_prime_factors.factors) {
    s.G_prime_omega += pe.exponent;
    s.nu2_sigma0_G_prime += nu_u64(2, pe.exponent + 1).value();
  }
  const std::uint64_t need = hit.k - 1;
  if (s.G_prime_omega < need) {
    check.failure = "G' = " + std::to_string(pr.G_prime) + " has " +
                    std::to_string(s.G_prime_omega) + " prime factor(s), need " +
                    std::to_string(need);
    check.structure = s;
    return check;
  }
  for (const PrimePower& pe : pr.G_prime_factors.factors) {
    for (std::uint32_t i = 0; i < pe.exponent && s.primes.size() < need; ++i) {
      s.primes.push_back(pe.prime);
      s.P *= pe.prime;
    }
  }
  s.P_divides_B = hit.B % s.P == 0;
  s.P_squared_divides_A = hit.A % (s.P * s.P) == 0;
  if (!s.P_divides_B) check.failure = "P = " + std::to_string(s.P) + " does not divide B";
  if (!s.P_squared_divides_A) check.failure = "P^2 does not divide A (P = " + std::to_string(s.P) + ")";
  check.structure = s;
  return check;
}

std::size_t SuiteReport::failures(const std::string& group) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const SuiteRow& r) {
    return r.asserted && !r.passed && (group.empty() || r.group == group);
  }));
}

SuiteReport corollary_suite(const EngineConfig& config) {
  struct Probe {
    const char* group;
    std::uint64_t p, A, B;
    const char* expectation;
    std::uint64_t expected;
  };
  static constexpr Probe kExact[] = {
      {"exact-values", 2, 4, 3, "=", 2}, {"exact-values", 2, 8, 7, "=", 3},
      {"exact-values", 2, 8, 5, "=", 1}, {"exact-values", 2, 8, 3, "=", 2},
      {"exact-values", 3, 3, 2, "=", 1}, {"exact-values", 5, 5, 2, "=", 1},
      {"exact-values", 5, 5, 3, "=", 1},
  };
  static constexpr Probe kSeven[] = {
      {"mod-7", 7, 7, 3, ">=", 1},
      {"mod-7", 7, 7, 5, ">=", 1},
      {"mod-7", 7, 7, 6, ">=", 1},
      {"mod-7", 7, 7, 4, "report", 0},
  };

  SuiteReport report;
  for (const std::uint64_t k : {1, 3, 5, 7, 9, 11}) {
    const FnDescriptor f = sigma_function(k);
    std::vector<Probe> probes(std::begin(kExact), std::end(kExact));
    if (k % 6 == 3) probes.insert(probes.end(), std::begin(kSeven), std::end(kSeven));
    std::optional<ValuationOracle> oracle;
    for (const Probe& pr : probes) {
      if (!oracle || oracle->prime() != pr.p) oracle.emplace(grid_oracle(f, pr.p, 8, config.n_horizon));
      SuiteRow row;
      row.group = pr.group;
      row.sigma_k = k;
      row.p = pr.p;
      row.A = pr.A;
      row.B = pr.B;
      row.id = "V_" + std::to_string(pr.p) + "(" + std::to_string(pr.A) + "," +
               std::to_string(pr.B) + ";sigma_" + std::to_string(k) + ")";
      const std::string kind = pr.expectation;
      row.expectation = kind == "report" ? "report" : kind + " " + std::to_string(pr.expected);
      row.expected = pr.expected;
      const CertainNat scan = scan_valuation(*oracle, pr.A, pr.B, config.n_horizon, config.parallelism);
      const Decomposition d = theorem_decomposition(*oracle, pr.A, pr.B, config, &scan);
      row.scan = scan.value;
      row.witness = scan.witness_n.value_or(0);
      row.rhs = d.rhs_total.value;
      row.rhs_certainty = d.rhs_total.certainty;
      if (kind == "=") {
        row.passed = scan.value == ExtendedNat(pr.expected);
      } else if (kind == ">=") {
        row.passed = ExtendedNat(pr.expected) <= scan.value;
      } else {
        row.asserted = false;
        row.passed = true;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

bool TwoSquaresReport::all_passed() const {
  return criterion_mismatches == 0 &&
         std::all_of(rows.begin(), rows.end(), [](const TwoSquaresRow& r) { return r.failed == 0; });
}

bool fails_two_squares_criterion(std::uint64_t n) {
  if (n == 0) throw DomainError("fails_two_squares_criterion: n must be >= 1");
  for (const PrimePower& pe : factorize_u64(n).factors) {
    if (pe.prime % 4 == 3 && pe.exponent % 2 == 1) return true;
  }
  return false;
}

TwoSquaresReport two_squares_audit(std::uint64_t N, const std::vector<std::uint64_t>& k_list,
                                   unsigned parallelism) {
  if (N == 0) throw DomainError("two_squares_audit: N must be >= 1");
  TwoSquaresReport report;
  report.N = N;
  std::vector<char> fails(N + 1, 0);
  parallel_chunks(N, parallelism, 4096, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fails[i + 1] = fails_two_squares_criterion(i + 1);
  });

  const std::uint64_t M = std::min<std::uint64_t>(N, 10'000);
  report.cross_checked_up_to = M;
  std::vector<char> is_sum(M + 1, 0);
  for (std::uint64_t a = 0; a * a <= M; ++a) {
    for (std::uint64_t b = a; a * a + b * b <= M; ++b) is_sum[a * a + b * b] = 1;
  }
  for (std::uint64_t n = 1; n <= M; ++n) {
    if (bool(is_sum[n]) == bool(fails[n])) {
      ++report.criterion_mismatches;
      if (!report.first_mismatch) report.first_mismatch = n;
    }
  }

  for (const std::uint64_t k : k_list) {
    if (k == 0) throw DomainError("two_squares_audit: k must be >= 1");
    const FnDescriptor f = sigma_function(k);
    std::vector<char> bad(N + 1, 0);
    parallel_chunks(N, parallelism, 1024, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const std::uint64_t n = i + 1;
        if (fails[n]) bad[n] = eval_mod(f, n, 4) != 0;
      }
    });
    TwoSquaresRow row;
    row.k = k;
    for (std::uint64_t n = 1; n <= N; ++n) {
      row.non_sums += fails[n] ? 1 : 0;
      if (bad[n]) {
        ++row.failed;
        if (!row.first_failure) row.first_failure = n;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

std::optional<ExtendedNat> phi_closed_form(std::uint64_t p, std::uint64_t A, std::uint64_t B) {
  if (!is_prime(p)) throw DomainError("phi_closed_form: p = " + std::to_string(p) + " is not prime");
  const Progression pr = decompose_progression(A, B);
  if (pr.B_prime % p == 1 % p) return std::nullopt;
  ExtendedNat v = eval_valuation(phi_function(), p, pr.G_prime);
  for (const PrimePower& pe : pr.G_factors.factors) {
    if (pr.A_prime % pe.prime == 0) continue;
    v += nu_u64(p, pe.prime - 1);
    if (pe.prime == p) v += ExtendedNat(pe.exponent - 1);
  }
  return v;
}

std::uint64_t PhiAgreementReport::mismatches() const {
  std::uint64_t total = 0;
  for (const auto& r : rows) total += r.mismatches.size();
  return total;
}

PhiAgreementReport phi_closed_form_audit(std::uint64_t A_max, const std::vector<std::uint64_t>& primes,
                                         const EngineConfig& config) {
  PhiAgreementReport report;
  report.A_max = A_max;
  const FnDescriptor phi = phi_function();
  for (const std::uint64_t p : primes) {
    const ValuationOracle oracle = grid_oracle(phi, p, A_max, config.n_horizon);
    const GridScan grid = grid_scan(oracle, A_max, config.n_horizon, config.parallelism);
    PhiAgreementRow row;
    row.p = p;
    for (std::uint64_t A = 1; A <= A_max; ++A) {
      for (std::uint64_t B = 1; B <= A; ++B) {
        const auto expected = phi_closed_form(p, A, B);
        if (!expected) {
          ++row.inapplicable;
          continue;
        }
        ++row.applicable;
        const ScanCell& c = grid.cell(A, B);
        if (!c.error.empty() || c.value != *expected) row.mismatches.push_back({A, B, *expected, c.value});
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::uint64_t ConsistencyReport::violations() const {
  std::uint64_t total = 0;
  for (const auto& r : rows) total += r.scan_below_rhs + r.exact_unequal + r.failures.size();
  return total;
}

ConsistencyReport theorem_consistency_audit(const std::vector<FnDescriptor>& functions,
                                            const std::vector<std::uint64_t>& primes,
                                            std::uint64_t A_max, const EngineConfig& config) {
  ConsistencyReport report;
  report.A_max = A_max;
  const EngineConfig cell_config = serial(config);
  for (const FnDescriptor& f : functions) {
    for (const std::uint64_t p : primes) {
      const ValuationOracle oracle = grid_oracle(f, p, A_max, config.n_horizon);
      const GridScan grid = grid_scan(oracle, A_max, config.n_horizon, config.parallelism);
      std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
      for (std::uint64_t A = 1; A <= A_max; ++A) {
        for (std::uint64_t B = 1; B <= A; ++B) cells.emplace_back(A, B);
      }
      struct Outcome {
        ExtendedNat scan, rhs;
        bool exact = false;
        std::string error;
      };
      std::vector<Outcome> outcomes(cells.size());
      parallel_for(cells.size(), config.parallelism, [&](std::size_t i) {
        const auto [A, B] = cells[i];
        Outcome& o = outcomes[i];
        try {
          const CertainNat scan = grid.result(A, B);
          const Decomposition d = theorem_decomposition(oracle, A, B, cell_config, &scan);
          o.scan = scan.value;
          o.rhs = d.rhs_total.value;
          o.exact = d.rhs_total.exact();
        } catch (const std::exception& e) {
          o.error = e.what();
        }
      });
      ConsistencyRow row;
      row.function = f.name();
      row.p = p;
      std::size_t i = 0;
      for (std::uint64_t A = 1; A <= A_max; ++A) {
        for (std::uint64_t B = 1; B <= A; ++B, ++i) {
          const Outcome& o = outcomes[i];
          ++row.cells;
          if (!o.error.empty()) {
            row.failures.push_back({A, B, o.error});
            continue;
          }
          bool bad = false;
          if (o.scan < o.rhs) {
            ++row.scan_below_rhs;
            bad = true;
          }
          if (o.exact) {
            ++row.exact_cells;
            if (o.scan != o.rhs) {
              ++row.exact_unequal;
              bad = true;
            }
          }
          if (bad && row.examples.size() < kMaxExamples) row.examples.push_back({A, B, o.rhs, o.scan});
        }
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::uint64_t Conjecture1Report::failures() const {
  std::uint64_t total = 0;
  for (const auto& s : searches) total += s.structure_failures() + s.failures.size();
  return total;
}

Conjecture1Report conjecture1_audit(const std::vector<std::uint64_t>& k_list, std::uint64_t A_max,
                                    const EngineConfig& config, const GridScan* sigma0_p2) {
  Conjecture1Report report;
  report.A_max = A_max;
  const ValuationOracle oracle = grid_oracle(sigma_function(0), 2, A_max, config.n_horizon);
  std::optional<GridScan> local;
  if (sigma0_p2 == nullptr) {
    local.emplace(grid_scan(oracle, A_max, config.n_horizon, config.parallelism));
    sigma0_p2 = &*local;
  }
  for (const std::uint64_t k : k_list) {
    report.searches.push_back(search_congruences(oracle, k, A_max, config, sigma0_p2));
  }
  return report;
}

std::uint64_t Corollary3Report::violations() const {
  std::uint64_t total = square_class_hits.size();
  for (const auto& r : odd_primes) total += r.above_floor.size();
  return total;
}

Corollary3Report corollary3_audit(std::uint64_t A_max, const EngineConfig& config,
                                  const GridScan* sigma0_p2) {
  Corollary3Report report;
  report.A_max = A_max;
  const FnDescriptor s0 = sigma_function(0);
  std::optional<GridScan> local;
  if (sigma0_p2 == nullptr) {
    local.emplace(grid_scan(grid_oracle(s0, 2, A_max, config.n_horizon), A_max, config.n_horizon,
                            config.parallelism));
    sigma0_p2 = &*local;
  }
  for (std::uint64_t A = 2; A <= A_max; ++A) {
    for (std::uint64_t B = 1; B <= A; ++B) {
      if (std::gcd(A, B) != 1) continue;
      const ScanCell& c = sigma0_p2->cell(A, B);
      if (!c.error.empty() || c.value < ExtendedNat(1)) continue;
      ++report.coprime_hits_mod2;
      const QuadraticClass qc = quadratic_class(B, A);
      const SquareClassHit h{A, B, qc.kronecker, qc.is_square_mod};
      if (qc.is_square_mod) report.square_class_hits.push_back(h);
      if (qc.kronecker == 1 && !qc.is_square_mod) report.symbol_residue_gaps.push_back(h);
    }
  }
  for (const std::uint64_t p : {3, 5, 7}) {
    const ValuationOracle oracle = grid_oracle(s0, p, A_max, config.n_horizon);
    const GridScan grid = grid_scan(oracle, A_max, config.n_horizon, config.parallelism);
    Corollary3Report::PrimeRow row;
    row.p = p;
    for (std::uint64_t A = 1; A <= A_max; ++A) {
      for (std::uint64_t B = 1; B <= A; ++B) {
        ++row.cells;
        const ScanCell& c = grid.cell(A, B);
        const ExtendedNat floor = oracle.at(decompose_progression(A, B).G_prime);
        if (!c.error.empty() || floor < c.value) row.above_floor.push_back({A, B, floor, c.value});
      }
    }
    report.odd_primes.push_back(std::move(row));
  }
  return report;
}

std::uint64_t Conjecture8Report::hits() const {
  std::uint64_t total = 0;
  for (const auto& r : rows) total += r.hits.size();
  return total;
}

Conjecture8Report conjecture8_evidence(const std::vector<std::uint64_t>& primes,
                                       std::uint64_t A_max, const EngineConfig& config) {
  Conjecture8Report report;
  report.A_max = A_max;
  const FnDescriptor phi = phi_function();
  for (const std::uint64_t p : primes) {
    const ValuationOracle oracle = grid_oracle(phi, p, A_max, config.n_horizon);
    const GridScan grid = grid_scan(oracle, A_max, config.n_horizon, config.parallelism);
    Conjecture8Row row;
    row.p = p;
    for (std::uint64_t A = 1; A <= A_max; ++A) {
      for (std::uint64_t B = 1; B <= A; ++B) {
        if (std::gcd(A, B) != 1) continue;
        ++row.coprime_cells;
        const ScanCell& c = grid.cell(A, B);
        if (!c.error.empty() || ExtendedNat(1) <= c.value) row.hits.push_back({A, B, 0, c.value});
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace ramcong
