#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ramcong/bigint.hpp"
#include "ramcong/mult_fn.hpp"

namespace ramcong {

// Expansion cost grows like N^1.5; larger tables are refused.
inline constexpr std::uint64_t kMaxTauHorizon = 200'000;

// tau(1..N) from q * prod (1 - q^n)^24, exact.
class TauTable {
 public:
  // values[i] = tau(i + 1).
  explicit TauTable(std::vector<i128> values);

  std::uint64_t horizon() const { return values_.size(); }
  // 1 <= n <= horizon(); throws CoverageError otherwise.
  i128 at(std::uint64_t n) const;
  BigInt value(std::uint64_t n) const { return to_bigint(at(n)); }
  const std::vector<i128>& values() const { return values_; }

 private:
  std::vector<i128> values_;
};

TauTable tau_table(std::uint64_t N);

// tau(q^e) by the Mordell recurrence from tau(q) in the table.
BigInt tau_prime_power(const TauTable& table, std::uint64_t q, std::uint64_t e);
std::uint64_t tau_prime_power_mod(const TauTable& table, std::uint64_t q, std::uint64_t e,
                                  std::uint64_t m);

// tau as a multiplicative function. Prime powers q^e need q <= horizon.
// Valuation profiles are registered from the recurrence's periodicity mod p^L.
FnDescriptor tau_function(std::shared_ptr<const TauTable> table);

// Text cache: "ramcong-tau-table 1", "horizon N", then "n tau(n)" lines.
void write_tau_cache(const TauTable& table, const std::filesystem::path& path);
// Validates header, count and tau(1..5) before trusting the data.
TauTable read_tau_cache(const std::filesystem::path& path);
// RAMCONG_CACHE_DIR, else $XDG_CACHE_HOME/ramcong, else $HOME/.cache/ramcong.
std::filesystem::path default_cache_dir();
// Reads `cache` when it holds at least N values, else builds and (if a path is
// given) rewrites it.
std::shared_ptr<const TauTable> load_or_build_tau_table(
    std::uint64_t N, const std::optional<std::filesystem::path>& cache);

struct TauAudit {
  std::uint64_t N = 0;
  bool leading_values_ok = false;
  std::uint64_t multiplicativity_checks = 0;
  std::uint64_t multiplicativity_failures = 0;
  std::uint64_t recurrence_checks = 0;
  std::uint64_t recurrence_failures = 0;
  std::uint64_t parity_checks = 0;
  std::uint64_t parity_failures = 0;
  std::uint64_t deligne_checks = 0;
  std::uint64_t deligne_failures = 0;

  bool ok() const {
    return leading_values_ok && multiplicativity_failures == 0 && recurrence_failures == 0 &&
           parity_failures == 0 && deligne_failures == 0;
  }
};

// Checks tau(1..5), multiplicativity over every coprime splitting, recurrence
// against the table, the parity law and |tau(q)| < 2 q^{11/2}, for n <= N.
TauAudit audit_tau_table(const TauTable& table, std::uint64_t N, unsigned parallelism = 1);

struct SdRow {
  std::string id;
  std::string statement;
  std::uint64_t modulus = 0;
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t inapplicable = 0;
  std::optional<std::uint64_t> first_failure;  // argument m of tau(m)
};

struct SdReport {
  std::uint64_t N = 0;
  std::uint64_t table_horizon = 0;
  std::vector<SdRow> rows;
  bool all_passed() const;
};

// Table horizon needed to verify the congruences for n <= N.
constexpr std::uint64_t sd_required_horizon(std::uint64_t N) { return 8 * N + 7; }

// The nine Swinnerton-Dyer congruences plus tau(7n + b) = 0 (mod 7) for
// b in {3, 5, 6}. Progression rows run over index n = 0..N, the others over
// argument n = 1..N.
SdReport verify_sd_congruences(const TauTable& table, std::uint64_t N, unsigned parallelism = 1);

}  // namespace ramcong
