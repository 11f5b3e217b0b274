#include "ramcong/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <numeric>

#include "ramcong/errors.hpp"
#include "ramcong/parallel.hpp"

namespace ramcong {

namespace {

constexpr std::size_t kScanChunk = 4096;
constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

struct ScanOutcome {
  ExtendedNat value = ExtendedNat::infinity();
  std::uint64_t witness = 0;
  // Number of n with value infinity; only meaningful when the scan was not cut short.
  std::uint64_t infinite_count = 0;
  bool cut_short = false;
};

struct ChunkResult {
  ExtendedNat value = ExtendedNat::infinity();
  std::uint64_t witness = kNone;
  std::uint64_t infinite_count = 0;
  std::uint64_t stop = kNone;  // first n with value 0 or an error
  std::exception_ptr error;
  bool skipped = false;
};

// min over 0 <= n < count of value_at(n), smallest minimising n.
//
// Chunks stop at the first 0 or the first error; chunks that start past an
// already known stop point are skipped. The merge walks chunks in order, so
// the outcome (including which error is raised) equals a sequential scan.
template <typename ValueAt>
ScanOutcome scan_min(std::uint64_t count, unsigned workers, ValueAt&& value_at) {
  const std::size_t chunks = (count + kScanChunk - 1) / kScanChunk;
  std::vector<ChunkResult> results(chunks);
  std::atomic<std::uint64_t> stop_at{kNone};
  parallel_chunks(chunks, workers, 1, [&](std::size_t c, std::size_t) {
    ChunkResult& r = results[c];
    const std::uint64_t begin = c * kScanChunk;
    const std::uint64_t end = std::min<std::uint64_t>(count, begin + kScanChunk);
    if (begin > stop_at.load(std::memory_order_relaxed)) {
      r.skipped = true;
      return;
    }
    for (std::uint64_t n = begin; n < end; ++n) {
      ExtendedNat v;
      try {
        v = value_at(n);
      } catch (...) {
        r.error = std::current_exception();
        r.stop = n;
        break;
      }
      if (v.is_infinite()) ++r.infinite_count;
      if (v < r.value || r.witness == kNone) {
        r.value = v;
        r.witness = n;
      }
      if (v == ExtendedNat(0)) {
        r.stop = n;
        break;
      }
    }
    if (r.stop != kNone) {
      std::uint64_t cur = stop_at.load(std::memory_order_relaxed);
      while (r.stop < cur && !stop_at.compare_exchange_weak(cur, r.stop)) {
      }
    }
  });

  ScanOutcome out;
  bool have = false;
  for (ChunkResult& r : results) {
    if (r.skipped) {
      out.cut_short = true;
      break;
    }
    if (r.witness != kNone && (!have || r.value < out.value)) {
      out.value = r.value;
      out.witness = r.witness;
      have = true;
    }
    out.infinite_count += r.infinite_count;
    if (r.error) std::rethrow_exception(r.error);
    if (r.stop != kNone) {
      out.cut_short = r.stop + 1 < count;
      break;
    }
  }
  return out;
}

void check_progression_fits(std::uint64_t A, std::uint64_t B, std::uint64_t horizon) {
  const u128 last = u128(A) * (horizon - 1) + B;
  if (last > std::numeric_limits<std::uint64_t>::max()) {
    throw DomainError("scan: A*(horizon-1)+B exceeds 64 bits");
  }
}

std::string zero_note(std::uint64_t count) {
  return std::to_string(count) + " value(s) of f were 0 (valuation inf)";
}

std::uint64_t checked_u64(const std::string& what, std::uint64_t v) {
  if (v == 0) throw DomainError(what + " must be >= 1");
  return v;
}

}  // namespace

std::string to_string(Certainty c) {
  return c == Certainty::CertifiedExact ? "CertifiedExact" : "UpperBoundAtHorizon";
}

Certainty parse_certainty(std::string_view s) {
  if (s == "CertifiedExact") return Certainty::CertifiedExact;
  if (s == "UpperBoundAtHorizon") return Certainty::UpperBoundAtHorizon;
  throw ParseError(0, "unknown certainty '" + std::string(s) + "'");
}

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::Certified:
      return "Certified";
    case CertificateStatus::VerifiedToHorizon:
      return "VerifiedToHorizon";
    case CertificateStatus::Refuted:
      return "Refuted";
  }
  return "?";
}

CertificateStatus parse_status(std::string_view s) {
  if (s == "Certified") return CertificateStatus::Certified;
  if (s == "VerifiedToHorizon") return CertificateStatus::VerifiedToHorizon;
  if (s == "Refuted") return CertificateStatus::Refuted;
  throw ParseError(0, "unknown status '" + std::string(s) + "'");
}

CertainNat make_scan_result(ExtendedNat value, std::uint64_t witness, std::uint64_t horizon,
                            std::uint64_t infinite_count, bool stopped_early) {
  CertainNat out;
  out.value = value;
  out.certainty = Certainty::UpperBoundAtHorizon;
  out.witness_n = witness;
  out.horizon = horizon;
  out.justification = "scan over n < " + std::to_string(horizon);
  if (value.is_infinite()) {
    out.justification += "; no finite witness found";
  } else if (!stopped_early && infinite_count > 0) {
    out.justification += "; " + zero_note(infinite_count);
  }
  return out;
}

CertainNat scan_valuation(const ValuationOracle& oracle, std::uint64_t A, std::uint64_t B,
                          std::uint64_t horizon, unsigned parallelism) {
  checked_u64("scan_valuation: A", A);
  checked_u64("scan_valuation: B", B);
  checked_u64("scan_valuation: horizon", horizon);
  check_progression_fits(A, B, horizon);
  const ScanOutcome s = scan_min(horizon, parallelism, [&](std::uint64_t n) {
    try {
      return oracle.at(A * n + B);
    } catch (const CoverageError& e) {
      throw CoverageError(e.prime(), e.exponent(),
                          std::string(e.what()) + " (at n = " + std::to_string(n) + ")");
    }
  });
  return make_scan_result(s.value, s.witness, horizon, s.infinite_count, s.cut_short);
}

CertainNat scan_valuation(const FnDescriptor& f, std::uint64_t p, std::uint64_t A, std::uint64_t B,
                          std::uint64_t horizon, unsigned parallelism) {
  return scan_valuation(ValuationOracle(f, p), A, B, horizon, parallelism);
}

CertainNat compute_U(const FnDescriptor& f, std::uint64_t p, std::uint64_t A_prime,
                     std::uint64_t B_prime, std::uint64_t a, std::uint64_t q,
                     std::uint64_t exponent_horizon) {
  checked_u64("compute_U: A'", A_prime);
  checked_u64("compute_U: B'", B_prime);
  checked_u64("compute_U: exponent horizon", exponent_horizon);
  if (!is_prime(p)) throw DomainError("compute_U: p = " + std::to_string(p) + " is not prime");
  if (!is_prime(q)) throw DomainError("compute_U: q = " + std::to_string(q) + " is not prime");
  if (std::gcd(A_prime, B_prime) != 1) throw DomainError("compute_U: gcd(A', B') must be 1");
  if (A_prime % q == 0) {
    throw ContractViolation("compute_U: q = " + std::to_string(q) +
                            " divides A'; its contribution belongs to the fixed term");
  }

  CertainNat out;
  out.horizon = exponent_horizon;
  if (const auto profile = f.registered_profile(p, q); profile && profile->minimum_from) {
    if (const auto m = profile->minimum_from(a)) {
      out.value = m->value;
      out.certainty = Certainty::CertifiedExact;
      out.witness_exponent = ExponentWitness{q, m->exponent};
      out.justification = "registered profile: " + profile->rule;
      return out;
    }
  }

  bool have = false;
  for (std::uint64_t e = a; e <= a + exponent_horizon; ++e) {
    ExtendedNat v;
    try {
      v = f.prime_power_valuation(p, q, e);
    } catch (const CoverageError&) {
      if (!have) throw;
      out.justification = "sampled exponents " + std::to_string(a) + ".." + std::to_string(e - 1) +
                          " (coverage ends at e = " + std::to_string(e) + ")";
      return out;
    }
    if (!have || v < out.value) {
      out.value = v;
      out.witness_exponent = ExponentWitness{q, e};
      have = true;
    }
    if (v == ExtendedNat(0)) {
      out.certainty = Certainty::CertifiedExact;
      out.justification = "zero lower bound attained at e = " + std::to_string(e);
      return out;
    }
  }
  out.certainty = Certainty::UpperBoundAtHorizon;
  out.justification = "sampled exponents " + std::to_string(a) + ".." +
                      std::to_string(a + exponent_horizon);
  return out;
}

namespace {

CertainNat compute_M_impl(const ValuationOracle& oracle, std::uint64_t A_prime,
                          std::uint64_t B_prime, std::uint64_t C, const EngineConfig& config,
                          const CertainNat* plain_scan) {
  checked_u64("compute_M: A'", A_prime);
  checked_u64("compute_M: B'", B_prime);
  checked_u64("compute_M: C", C);
  checked_u64("compute_M: n horizon", config.n_horizon);
  if (std::gcd(A_prime, B_prime) != 1) throw DomainError("compute_M: gcd(A', B') must be 1");
  check_progression_fits(A_prime, B_prime, config.n_horizon);

  std::vector<std::uint64_t> c_primes;
  for (const auto& pe : factorize_u64(C).factors) c_primes.push_back(pe.prime);

  ScanOutcome s;
  if (plain_scan && C == 1) {
    s.value = plain_scan->value;
    s.witness = plain_scan->witness_n.value_or(0);
  } else {
    s = scan_min(config.n_horizon, config.parallelism, [&](std::uint64_t n) {
      return oracle.at(coprime_part(A_prime * n + B_prime, c_primes));
    });
  }

  CertainNat out;
  out.horizon = config.n_horizon;
  out.value = s.value;
  out.witness_n = s.witness;
  if (s.value == ExtendedNat(0)) {
    out.certainty = Certainty::CertifiedExact;
    out.justification = "zero lower bound attained at n = " + std::to_string(s.witness);
    return out;
  }

  const FnDescriptor& f = oracle.function();
  const std::uint64_t p = oracle.prime();
  const PrimeSearch search = primes_in_progression(A_prime, B_prime, C, config.witness_budget,
                                                   config.candidate_bound, B_prime);
  for (const std::uint64_t q : search.primes) {
    ExtendedNat v;
    try {
      v = f.prime_power_valuation(p, q, 1);
    } catch (const CoverageError&) {
      continue;
    }
    if (v == ExtendedNat(0)) {
      out.value = 0;
      out.certainty = Certainty::CertifiedExact;
      out.witness_n = (q - B_prime) / A_prime;
      out.justification = "prime witness q = " + std::to_string(q) + " in the progression";
      return out;
    }
  }

  // sigma_k(m) is odd when m is a square, and for k >= 1 also when m is twice
  // a square. Removing the primes of C from such m keeps that shape.
  if (f.is_sigma_family() && p == 2 && A_prime > 1) {
    const QuadraticClass qc = quadratic_class(B_prime, A_prime);
    auto try_root = [&](std::optional<std::uint64_t> root, std::uint64_t scale) -> bool {
      if (!root) return false;
      for (u128 x = *root; x < u128(*root) + 4 * A_prime + 4; x += A_prime) {
        const u128 m = scale * x * x;
        if (x == 0 || m < B_prime) continue;
        if (m > std::numeric_limits<std::uint64_t>::max()) return false;
        const std::uint64_t n = static_cast<std::uint64_t>((m - B_prime) / A_prime);
        const ExtendedNat v =
            oracle.at(coprime_part(static_cast<std::uint64_t>(m), c_primes));
        if (v != ExtendedNat(0)) return false;
        out.value = 0;
        out.certainty = Certainty::CertifiedExact;
        out.witness_n = n;
        out.justification = std::string(scale == 1 ? "square" : "twice-square") +
                            " witness " + to_string(static_cast<i128>(m));
        return true;
      }
      return false;
    };
    if (try_root(qc.square_root, 1)) return out;
    if (f.sigma_k().value_or(0) >= 1 && try_root(qc.twice_square_root, 2)) return out;
  }

  out.certainty = Certainty::UpperBoundAtHorizon;
  out.justification = "scan over n < " + std::to_string(config.n_horizon) + "; " +
                      std::to_string(search.primes.size()) + " prime candidate(s) gave no zero";
  if (s.value.is_infinite()) out.justification += "; no finite witness found";
  return out;
}

}  // namespace

CertainNat compute_M(const ValuationOracle& oracle, std::uint64_t A_prime, std::uint64_t B_prime,
                     std::uint64_t C, const EngineConfig& config) {
  return compute_M_impl(oracle, A_prime, B_prime, C, config, nullptr);
}

CertainNat compute_M(const FnDescriptor& f, std::uint64_t p, std::uint64_t A_prime,
                     std::uint64_t B_prime, std::uint64_t C, const EngineConfig& config) {
  return compute_M(ValuationOracle(f, p), A_prime, B_prime, C, config);
}

Decomposition theorem_decomposition(const ValuationOracle& oracle, std::uint64_t A,
                                    std::uint64_t B, const EngineConfig& config,
                                    const CertainNat* scan_of_AB) {
  Decomposition d;
  d.progression = decompose_progression(A, B);
  const Progression& pr = d.progression;
  const FnDescriptor& f = oracle.function();
  const std::uint64_t p = oracle.prime();

  d.term_fixed = oracle.at(pr.G_prime);
  for (const auto& pe : pr.G_factors.factors) {
    if (pr.A_prime % pe.prime == 0) continue;
    d.terms_U.push_back(UTerm{pe.prime, pe.exponent,
                              compute_U(f, p, pr.A_prime, pr.B_prime, pe.exponent, pe.prime,
                                        config.exponent_horizon)});
  }
  d.term_M = compute_M_impl(oracle, pr.A_prime, pr.B_prime, pr.G, config, scan_of_AB);

  CertainNat& total = d.rhs_total;
  total.value = d.term_fixed;
  bool exact = d.term_M.exact();
  for (const UTerm& u : d.terms_U) {
    total.value += u.value.value;
    exact = exact && u.value.exact();
  }
  total.value += d.term_M.value;
  total.certainty = exact ? Certainty::CertifiedExact : Certainty::UpperBoundAtHorizon;
  total.horizon = config.n_horizon;
  total.justification = exact ? "sum of certified terms" : "sum with at least one horizon bound";
  return d;
}

Decomposition theorem_decomposition(const FnDescriptor& f, std::uint64_t p, std::uint64_t A,
                                    std::uint64_t B, const EngineConfig& config) {
  return theorem_decomposition(ValuationOracle(f, p), A, B, config);
}

Certificate certify_congruence(const ValuationOracle& oracle, std::uint64_t k, std::uint64_t A,
                               std::uint64_t B, const EngineConfig& config) {
  if (k == 0) throw DomainError("certify_congruence: k must be >= 1");
  return certify_congruence(oracle, k, A, B, config,
                            scan_valuation(oracle, A, B, config.n_horizon, config.parallelism));
}

Certificate certify_congruence(const ValuationOracle& oracle, std::uint64_t k, std::uint64_t A,
                               std::uint64_t B, const EngineConfig& config, CertainNat scan) {
  if (k == 0) throw DomainError("certify_congruence: k must be >= 1");
  Certificate cert;
  cert.function = oracle.function().name();
  cert.p = oracle.prime();
  cert.k = k;
  cert.config = config;

  cert.scan_V = std::move(scan);
  Decomposition d = theorem_decomposition(oracle, A, B, config, &cert.scan_V);
  cert.progression = std::move(d.progression);
  cert.term_fixed = d.term_fixed;
  cert.terms_U = std::move(d.terms_U);
  cert.term_M = std::move(d.term_M);
  cert.rhs_total = std::move(d.rhs_total);
  cert.rhs_attained = cert.scan_V.value == cert.rhs_total.value;

  if (cert.scan_V.value < ExtendedNat(k)) {
    cert.status = CertificateStatus::Refuted;
    cert.refutation_witness = cert.scan_V.witness_n;
  } else if (cert.rhs_total.exact() && ExtendedNat(k) <= cert.rhs_total.value) {
    cert.status = CertificateStatus::Certified;
  } else {
    cert.status = CertificateStatus::VerifiedToHorizon;
  }

  if (cert.scan_V.value < cert.rhs_total.value) {
    cert.notes.push_back("decomposition value " + cert.rhs_total.value.to_string() +
                         " exceeds scanned value " + cert.scan_V.value.to_string());
  }
  if (cert.rhs_total.exact() && cert.rhs_total.value < cert.scan_V.value) {
    cert.notes.push_back("scanned value " + cert.scan_V.value.to_string() +
                         " exceeds the certified decomposition value " +
                         cert.rhs_total.value.to_string());
  }
  if (cert.scan_V.value.is_infinite()) {
    cert.notes.push_back("no finite witness found; finiteness of V is not asserted");
  }
  return cert;
}

Certificate certify_congruence(const FnDescriptor& f, std::uint64_t p, std::uint64_t k,
                               std::uint64_t A, std::uint64_t B, const EngineConfig& config) {
  return certify_congruence(ValuationOracle(f, p), k, A, B, config);
}

std::vector<std::string> certificate_invariant_violations(const Certificate& cert) {
  std::vector<std::string> bad;
  ExtendedNat sum = cert.term_fixed;
  bool exact = cert.term_M.exact();
  for (const UTerm& u : cert.terms_U) {
    sum += u.value.value;
    exact = exact && u.value.exact();
  }
  sum += cert.term_M.value;
  if (sum != cert.rhs_total.value) bad.push_back("rhs_total differs from the sum of its terms");
  if (exact != cert.rhs_total.exact()) bad.push_back("rhs_total certainty does not follow its terms");
  if (cert.scan_V.exact()) bad.push_back("scan value claims exactness");
  if (cert.rhs_attained != (cert.scan_V.value == cert.rhs_total.value)) {
    bad.push_back("rhs_attained flag is inconsistent");
  }
  const ExtendedNat k(cert.k);
  switch (cert.status) {
    case CertificateStatus::Refuted:
      if (!cert.refutation_witness) bad.push_back("Refuted without a witness");
      if (!(cert.scan_V.value < k)) bad.push_back("Refuted but scan value >= k");
      break;
    case CertificateStatus::Certified:
      if (!cert.rhs_total.exact()) bad.push_back("Certified without an exact rhs");
      if (cert.rhs_total.value < k) bad.push_back("Certified with rhs below k");
      [[fallthrough]];
    case CertificateStatus::VerifiedToHorizon:
      if (cert.scan_V.value < k) bad.push_back("not Refuted but scan value < k");
      if (cert.refutation_witness) bad.push_back("refutation witness on a non-Refuted certificate");
      break;
  }
  for (const CertainNat* c : {&cert.term_M, &cert.rhs_total, &cert.scan_V}) {
    if (c->exact() && c->justification.empty()) bad.push_back("exact value without justification");
  }
  for (const UTerm& u : cert.terms_U) {
    if (u.value.exact() && u.value.justification.empty()) {
      bad.push_back("exact U term without justification");
    }
  }
  return bad;
}

std::vector<std::string> reverify_certificate(const Certificate& cert, const FnDescriptor& f) {
  std::vector<std::string> bad = certificate_invariant_violations(cert);
  const Progression pr = decompose_progression(cert.progression.A, cert.progression.B);
  if (pr.G != cert.progression.G || pr.A_prime != cert.progression.A_prime ||
      pr.B_prime != cert.progression.B_prime || pr.G_prime != cert.progression.G_prime) {
    bad.push_back("progression fields do not match A, B");
    return bad;
  }
  const std::uint64_t p = cert.p;
  if (eval_valuation(f, p, pr.G_prime) != cert.term_fixed) bad.push_back("term_fixed mismatch");

  auto value_at = [&](std::uint64_t n) { return eval_valuation(f, p, pr.A * n + pr.B); };
  if (cert.scan_V.witness_n && value_at(*cert.scan_V.witness_n) != cert.scan_V.value) {
    bad.push_back("scan witness does not reproduce the scan value");
  }
  if (cert.refutation_witness &&
      !(value_at(*cert.refutation_witness) < ExtendedNat(cert.k))) {
    bad.push_back("refutation witness does not refute");
  }
  for (const UTerm& u : cert.terms_U) {
    if (const auto& w = u.value.witness_exponent) {
      if (w->q != u.q || w->e < u.a) {
        bad.push_back("U witness for q = " + std::to_string(u.q) + " out of range");
      } else if (f.prime_power_valuation(p, w->q, w->e) != u.value.value) {
        bad.push_back("U witness for q = " + std::to_string(u.q) + " does not reproduce");
      }
    }
  }
  if (const auto& w = cert.term_M.witness_n) {
    const std::uint64_t m = coprime_part(pr.A_prime * *w + pr.B_prime, pr.G);
    if (eval_valuation(f, p, m) != cert.term_M.value) {
      bad.push_back("M witness does not reproduce");
    }
  }
  return bad;
}

}  // namespace ramcong
