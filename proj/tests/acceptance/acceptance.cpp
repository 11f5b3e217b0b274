// Acceptance runner: `ramcong_acceptance <criterion> [report-dir]`.
// Prints one "PASS criterion N: ..." or "FAIL criterion N: ..." line and
// exits 0 / 1 accordingly. Detail lines go to stdout before the verdict.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "ramcong/classifier.hpp"
#include "ramcong/report.hpp"
#include "ramcong/tau.hpp"

using namespace ramcong;

namespace {

// Pinned parameters; changing any of them changes what is being accepted.
constexpr std::uint64_t kHorizon = 100'000;
constexpr std::uint64_t kConsistencyAMax = 60;
constexpr std::uint64_t kConjectureAMax = 400;
constexpr std::uint64_t kTauN = 10'000;
constexpr std::uint64_t kSdN = 5'000;
constexpr std::uint64_t kTwoSquaresN = 10'000;
constexpr std::uint64_t kPhiAMax = 60;

struct Outcome {
  bool pass = false;
  std::string summary;
  std::string body;  // report body compared by criterion 10
};

// Shared, per-parallelism state: the sigma_0 / p = 2 grid is used by 4 and 9.
class Context {
 public:
  explicit Context(unsigned parallelism) : parallelism_(parallelism) {}

  unsigned parallelism() const { return parallelism_; }

  EngineConfig config() const {
    EngineConfig c;
    c.n_horizon = kHorizon;
    c.parallelism = parallelism_;
    return c;
  }

  const GridScan& sigma0_grid() {
    if (!grid_) {
      const ValuationOracle oracle = grid_oracle(sigma_function(0), 2, kConjectureAMax, kHorizon);
      grid_ = std::make_unique<GridScan>(grid_scan(oracle, kConjectureAMax, kHorizon, parallelism_));
    }
    return *grid_;
  }

  std::shared_ptr<const TauTable> tau(std::uint64_t N) {
    if (!tau_ || tau_->horizon() < N) {
      tau_ = load_or_build_tau_table(N, default_cache_dir() / "tau-table.txt");
    }
    return tau_;
  }

 private:
  unsigned parallelism_;
  std::unique_ptr<GridScan> grid_;
  std::shared_ptr<const TauTable> tau_;
};

std::string show(const SuiteRow& r) {
  std::ostringstream s;
  s << "sigma_" << r.sigma_k << " V_" << r.p << "(" << r.A << "," << r.B << ") scan " << r.scan << " expected "
    << r.expectation << " (witness n=" << r.witness << ")";
  return s.str();
}

Outcome criterion1(Context& ctx, std::ostream& log) {
  const SuiteReport r = corollary_suite(ctx.config());
  std::size_t rows = 0;
  for (const SuiteRow& row : r.rows) {
    if (row.group != "exact-values") continue;
    ++rows;
    if (!row.passed) log << "  mismatch: " << show(row) << "\n";
  }
  const std::size_t bad = r.failures("exact-values");
  return {bad == 0, std::to_string(rows - bad) + "/" + std::to_string(rows) + " exact values match at horizon " +
                        std::to_string(kHorizon),
          body_json(r)};
}

Outcome criterion2(Context& ctx, std::ostream& log) {
  const SuiteReport r = corollary_suite(ctx.config());
  std::size_t asserted = 0;
  for (const SuiteRow& row : r.rows) {
    if (row.group != "mod-7") continue;
    if (!row.asserted) {
      log << "  probe (not asserted): " << show(row) << "\n";
      continue;
    }
    ++asserted;
    if (!row.passed) log << "  mismatch: " << show(row) << "\n";
  }
  const std::size_t bad = r.failures("mod-7");
  return {bad == 0 && asserted == 6,
          std::to_string(asserted - bad) + "/" + std::to_string(asserted) +
              " mod-7 progressions hold for all n < " + std::to_string(kHorizon),
          body_json(r)};
}

Outcome criterion3(Context& ctx, std::ostream& log) {
  const ConsistencyReport r = theorem_consistency_audit(
      {sigma_function(0), sigma_function(1), sigma_function(2), sigma_function(3), phi_function()}, {2, 3, 5, 7},
      kConsistencyAMax, ctx.config());
  std::uint64_t below = 0, unequal = 0, failures = 0;
  for (const ConsistencyRow& row : r.rows) {
    below += row.scan_below_rhs;
    unequal += row.exact_unequal;
    failures += row.failures.size();
    if (row.scan_below_rhs || row.exact_unequal || !row.failures.empty()) {
      log << "  " << row.function << " p=" << row.p << ": scan<rhs " << row.scan_below_rhs
          << ", exact but unequal " << row.exact_unequal << "/" << row.exact_cells << ", errors "
          << row.failures.size();
      if (!row.examples.empty()) {
        const CellMismatch& m = row.examples.front();
        log << " (first: " << m.A << "," << m.B << " rhs " << m.expected << " scan " << m.scan << ")";
      }
      log << "\n";
    }
  }
  return {r.violations() == 0 && failures == 0,
          "scan < rhs in " + std::to_string(below) + " cells, exact-but-unequal in " + std::to_string(unequal) +
              " cells, " + std::to_string(failures) + " evaluation errors",
          body_json(r)};
}

Outcome criterion4(Context& ctx, std::ostream& log) {
  const Conjecture1Report r = conjecture1_audit({2, 3}, kConjectureAMax, ctx.config(), &ctx.sigma0_grid());
  std::uint64_t hits = 0, cell_failures = 0;
  for (const SearchResult& s : r.searches) {
    hits += s.hits.size();
    cell_failures += s.failures.size();
    log << "  k=" << s.k << ": " << s.hits.size() << " hits, " << s.structure_failures() << " structure failures\n";
    for (const SearchHit& h : s.hits) {
      if (h.structure_check && !h.structure_check->ok()) {
        log << "    (" << h.A << "," << h.B << "): " << h.structure_check->failure << "\n";
      }
    }
  }
  return {r.failures() == 0 && cell_failures == 0,
          std::to_string(hits) + " hits checked, " + std::to_string(r.failures()) + " structure failures",
          body_json(r)};
}

Outcome criterion5(Context& ctx, std::ostream& log) {
  const auto table = ctx.tau(kTauN);
  const TauAudit a = audit_tau_table(*table, kTauN, ctx.parallelism());
  log << "  leading values " << (a.leading_values_ok ? "ok" : "WRONG") << "; multiplicativity "
      << a.multiplicativity_failures << "/" << a.multiplicativity_checks << " failures; recurrence "
      << a.recurrence_failures << "/" << a.recurrence_checks << "; parity " << a.parity_failures << "/"
      << a.parity_checks << "\n";
  return {a.ok(), "tau(1..5) exact, multiplicativity, recurrence and parity checked for n <= " +
                      std::to_string(kTauN),
          body_json(a)};
}

Outcome criterion6(Context& ctx, std::ostream& log) {
  const auto table = ctx.tau(sd_required_horizon(kSdN));
  const SdReport r = verify_sd_congruences(*table, kSdN, ctx.parallelism());
  std::uint64_t failed = 0;
  for (const SdRow& row : r.rows) {
    failed += row.failed;
    log << "  " << row.id << ": " << row.passed << " passed, " << row.failed << " failed, " << row.inapplicable
        << " inapplicable\n";
  }
  return {r.all_passed(), std::to_string(r.rows.size()) + " congruence rows, " + std::to_string(failed) +
                              " failures for n <= " + std::to_string(kSdN),
          body_json(r)};
}

Outcome criterion7(Context& ctx, std::ostream& log) {
  const TwoSquaresReport r = two_squares_audit(kTwoSquaresN, {1, 2, 3}, ctx.parallelism());
  std::uint64_t failed = 0;
  for (const TwoSquaresRow& row : r.rows) {
    failed += row.failed;
    log << "  k=" << row.k << ": " << row.non_sums << " non-sums, " << row.failed << " failures\n";
  }
  log << "  criterion vs enumeration mismatches up to " << r.cross_checked_up_to << ": " << r.criterion_mismatches
      << "\n";
  return {r.all_passed(), std::to_string(failed) + " non-sums of two squares n <= " + std::to_string(kTwoSquaresN) +
                              " with sigma_k(n) != 0 (mod 4), k in {1,2,3}; " +
                              std::to_string(r.criterion_mismatches) + " criterion mismatches",
          body_json(r)};
}

Outcome criterion8(Context& ctx, std::ostream& log) {
  const PhiAgreementReport r = phi_closed_form_audit(kPhiAMax, {2, 3, 5}, ctx.config());
  for (const PhiAgreementRow& row : r.rows) {
    log << "  p=" << row.p << ": " << row.applicable << " applicable, " << row.mismatches.size() << " mismatches";
    if (!row.mismatches.empty()) {
      const CellMismatch& m = row.mismatches.front();
      log << " (first: " << m.A << "," << m.B << " formula " << m.expected << " scan " << m.scan << ")";
    }
    log << "\n";
  }
  return {r.mismatches() == 0, std::to_string(r.mismatches()) + " mismatches between the closed form and the scan",
          body_json(r)};
}

Outcome criterion9(Context& ctx, std::ostream& log) {
  const Corollary3Report r = corollary3_audit(kConjectureAMax, ctx.config(), &ctx.sigma0_grid());
  log << "  coprime mod-2 hits: " << r.coprime_hits_mod2 << ", in a square class: " << r.square_class_hits.size()
      << ", symbol/residue gaps: " << r.symbol_residue_gaps.size() << "\n";
  for (const auto& row : r.odd_primes) {
    log << "  p=" << row.p << ": " << row.cells << " cells, " << row.above_floor.size() << " above floor\n";
  }
  return {r.violations() == 0, std::to_string(r.violations()) + " structure violations on A <= " +
                                   std::to_string(kConjectureAMax),
          body_json(r)};
}

using Criterion = Outcome (*)(Context&, std::ostream&);
constexpr Criterion kCriteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                   criterion6, criterion7, criterion8, criterion9};

Outcome criterion10(std::ostream& log) {
  Context serial(1), wide(8);
  std::ostringstream discard;
  std::size_t differing = 0;
  for (std::size_t i = 0; i < std::size(kCriteria); ++i) {
    const std::string a = kCriteria[i](serial, discard).body;
    const std::string b = kCriteria[i](wide, discard).body;
    const bool same = a == b;
    differing += !same;
    log << "  criterion " << i + 1 << ": " << (same ? "identical" : "DIFFERENT") << " (" << a.size() << " bytes)\n";
  }
  return {differing == 0, std::to_string(std::size(kCriteria) - differing) + "/" + std::to_string(std::size(kCriteria)) +
                              " report bodies byte-identical at parallelism 1 and 8",
          {}};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " <criterion 1-10> [report-dir]\n";
    return 2;
  }
  const int n = std::atoi(argv[1]);
  if (n < 1 || n > 10) {
    std::cerr << "criterion must be 1..10\n";
    return 2;
  }
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    if (n == 10) {
      out = criterion10(std::cout);
    } else {
      Context ctx(1);
      out = kCriteria[n - 1](ctx, std::cout);
    }
  } catch (const std::exception& e) {
    out = {false, std::string("error: ") + e.what(), {}};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (argc > 2 && !out.body.empty()) {
    const std::filesystem::path dir(argv[2]);
    std::filesystem::create_directories(dir);
    write_text_atomic(dir / ("criterion_" + std::to_string(n) + ".json"),
                      json_report("acceptance/" + std::to_string(n), make_meta(1), out.body));
  }
  std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << out.summary << " [" << std::fixed;
  std::cout.precision(1);
  std::cout << secs << " s]\n";
  return out.pass ? 0 : 1;
}
