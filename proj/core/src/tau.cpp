#include "ramcong/tau.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ramcong/arith.hpp"
#include "ramcong/errors.hpp"
#include "ramcong/parallel.hpp"

namespace ramcong {

namespace {

constexpr std::array<std::int64_t, 5> kLeadingTau = {1, -24, 252, -1472, 4830};

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceLimitError("tau expansion overflowed 128 bits");
  return r;
}

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceLimitError("tau expansion overflowed 128 bits");
  return r;
}

}  // namespace

TauTable::TauTable(std::vector<i128> values) : values_(std::move(values)) {}

i128 TauTable::at(std::uint64_t n) const {
  if (n == 0 || n > values_.size()) {
    throw CoverageError(n, 1,
                        "tau(" + std::to_string(n) + ") outside table horizon " +
                            std::to_string(values_.size()));
  }
  return values_[n - 1];
}

TauTable tau_table(std::uint64_t N) {
  if (N == 0) throw DomainError("tau_table: N must be >= 1");
  if (N > kMaxTauHorizon) {
    throw ResourceLimitError("tau_table: N = " + std::to_string(N) + " exceeds limit " +
                             std::to_string(kMaxTauHorizon));
  }
  // prod (1 - q^n)^3 = sum_k (-1)^k (2k + 1) q^{k(k+1)/2}  (Jacobi), so the
  // 24th power is the 8th power of this sparse series, truncated at degree N-1.
  std::vector<std::pair<std::uint64_t, i128>> jacobi;
  for (std::uint64_t k = 0; k * (k + 1) / 2 < N; ++k) {
    jacobi.emplace_back(k * (k + 1) / 2, (k % 2 ? -1 : 1) * i128(2 * k + 1));
  }
  std::vector<i128> series(N, 0);
  for (const auto& [deg, c] : jacobi) series[deg] = c;
  std::vector<i128> next(N);
  for (int step = 1; step < 8; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (std::uint64_t i = 0; i < N; ++i) {
      const i128 a = series[i];
      if (a == 0) continue;
      for (const auto& [deg, c] : jacobi) {
        if (i + deg >= N) break;
        next[i + deg] = checked_add(next[i + deg], checked_mul(a, c));
      }
    }
    series.swap(next);
  }
  return TauTable(std::move(series));
}

BigInt tau_prime_power(const TauTable& table, std::uint64_t q, std::uint64_t e) {
  if (e == 0) return 1;
  const BigInt t = table.value(q);
  if (e == 1) return t;
  BigInt q11;
  mpz_ui_pow_ui(q11.get_mpz_t(), q, 11);
  BigInt prev = 1, cur = t;
  for (std::uint64_t m = 1; m < e; ++m) {
    BigInt nxt = t * cur - q11 * prev;
    prev = std::move(cur);
    cur = std::move(nxt);
  }
  return cur;
}

std::uint64_t tau_prime_power_mod(const TauTable& table, std::uint64_t q, std::uint64_t e,
                                  std::uint64_t m) {
  if (e == 0) return 1 % m;
  const std::uint64_t t = mod_u64(table.at(q), m);
  if (e == 1) return t;
  const std::uint64_t c = pow_mod(q, 11, m);
  std::uint64_t prev = 1 % m, cur = t;
  for (std::uint64_t i = 1; i < e; ++i) {
    const std::uint64_t nxt = (mul_mod(t, cur, m) + m - mul_mod(c, prev, m)) % m;
    prev = cur;
    cur = nxt;
  }
  return cur;
}

namespace {

constexpr std::uint64_t kPeriodBudget = std::uint64_t{1} << 22;

// Cycle of the state (tau(q^e), tau(q^{e+1})) mod p^L, found with Brent's
// method. Returns (preperiod, period).
std::optional<std::pair<std::uint64_t, std::uint64_t>> recurrence_cycle(
    std::uint64_t t, std::uint64_t c, std::uint64_t m) {
  using State = std::pair<std::uint64_t, std::uint64_t>;
  auto step = [&](const State& s) {
    return State{s.second, (mul_mod(t, s.second, m) + m - mul_mod(c, s.first, m)) % m};
  };
  const State start{1 % m, t};
  std::uint64_t power = 1, lam = 1, steps = 0;
  State tortoise = start, hare = step(start);
  while (tortoise != hare) {
    if (++steps > kPeriodBudget) return std::nullopt;
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare = step(hare);
    ++lam;
  }
  tortoise = hare = start;
  for (std::uint64_t i = 0; i < lam; ++i) hare = step(hare);
  std::uint64_t mu = 0;
  while (tortoise != hare) {
    tortoise = step(tortoise);
    hare = step(hare);
    if (++mu > kPeriodBudget) return std::nullopt;
  }
  return std::pair{mu, lam};
}

std::optional<ValuationProfile> tau_periodic_profile(const TauTable& table, std::uint64_t p,
                                                     std::uint64_t q) {
  std::uint64_t pl = 1;
  for (std::uint64_t L = 1; pl <= (std::uint64_t{1} << 62) / p; ++L) {
    pl *= p;
    const std::uint64_t t = mod_u64(table.at(q), pl);
    const std::uint64_t c = pow_mod(q, 11, pl);
    const auto cyc = recurrence_cycle(t, c, pl);
    if (!cyc) return std::nullopt;
    const auto [mu, lam] = *cyc;

    std::vector<ExtendedNat> values;
    values.reserve(mu + lam);
    std::uint64_t cur = 1 % pl, nxt = t;
    for (std::uint64_t e = 0; e < mu + lam; ++e) {
      values.push_back(cur == 0 ? ExtendedNat(L) : min(nu_u64(p, cur), ExtendedNat(L)));
      const std::uint64_t after = (mul_mod(t, nxt, pl) + pl - mul_mod(c, cur, pl)) % pl;
      cur = nxt;
      nxt = after;
    }
    ExtendedNat periodic_min = ExtendedNat::infinity();
    for (std::uint64_t e = mu; e < mu + lam; ++e) periodic_min = min(periodic_min, values[e]);
    if (periodic_min >= ExtendedNat(L)) continue;

    ValuationProfile vp;
    vp.p = p;
    vp.q = q;
    vp.kind = ProfileKind::EventuallyPeriodic;
    vp.registered = true;
    vp.q_class = "q = " + std::to_string(q);
    vp.rule = "tau(q^e) mod " + std::to_string(p) + "^" + std::to_string(L) +
              " via Mordell recurrence: preperiod " + std::to_string(mu) + ", period " +
              std::to_string(lam);
    vp.preperiod = mu;
    vp.period = lam;
    vp.cap = L;
    auto shared = std::make_shared<const std::vector<ExtendedNat>>(values);
    vp.values = std::move(values);
    vp.minimum_from = [shared, mu, lam, L](std::uint64_t a) -> std::optional<ProfileMinimum> {
      const std::uint64_t hi = std::max(a, mu) + lam;
      std::optional<ProfileMinimum> best;
      for (std::uint64_t e = a; e < hi; ++e) {
        const std::uint64_t idx = e < mu ? e : mu + (e - mu) % lam;
        const ExtendedNat v = (*shared)[idx];
        if (!best || v < best->value) best = ProfileMinimum{v, e};
      }
      if (!best || best->value >= ExtendedNat(L)) return std::nullopt;
      return best;
    };
    return vp;
  }
  return std::nullopt;
}

class TauRule final : public PrimePowerRule {
 public:
  explicit TauRule(std::shared_ptr<const TauTable> table) : table_(std::move(table)) {}

  BigInt value(std::uint64_t q, std::uint64_t e) const override {
    check(q, e);
    return tau_prime_power(*table_, q, e);
  }

  std::uint64_t value_mod(std::uint64_t q, std::uint64_t e, std::uint64_t m) const override {
    check(q, e);
    if (e == 1) return mod_u64(table_->at(q), m);
    return tau_prime_power_mod(*table_, q, e, m);
  }

  std::optional<ValuationProfile> registered_profile(std::uint64_t p,
                                                     std::uint64_t q) const override {
    if (q > table_->horizon()) return std::nullopt;
    return tau_periodic_profile(*table_, p, q);
  }

 private:
  void check(std::uint64_t q, std::uint64_t e) const {
    if (q > table_->horizon()) {
      throw CoverageError(q, e,
                          "tau(" + std::to_string(q) + "^" + std::to_string(e) +
                              ") needs tau(" + std::to_string(q) + ") beyond table horizon " +
                              std::to_string(table_->horizon()));
    }
  }

  std::shared_ptr<const TauTable> table_;
};

}  // namespace

FnDescriptor tau_function(std::shared_ptr<const TauTable> table) {
  return FnDescriptor("tau", FnFamily::Tau, std::make_shared<TauRule>(std::move(table)), true);
}

void write_tau_cache(const TauTable& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write tau cache " + tmp.string());
    out << "ramcong-tau-table 1\n" << "horizon " << table.horizon() << "\n";
    for (std::uint64_t n = 1; n <= table.horizon(); ++n) {
      out << n << ' ' << to_string(table.at(n)) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for tau cache " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

TauTable read_tau_cache(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tau cache " + path.string());
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    return true;
  };
  if (!next_line() || line != "ramcong-tau-table 1") {
    throw ParseError(lineno, path.string() + ": bad tau cache header");
  }
  std::uint64_t horizon = 0;
  {
    if (!next_line()) throw ParseError(lineno, path.string() + ": missing horizon line");
    std::istringstream is(line);
    std::string key;
    if (!(is >> key >> horizon) || key != "horizon" || horizon == 0) {
      throw ParseError(lineno, path.string() + ": malformed horizon line");
    }
    if (horizon > kMaxTauHorizon) throw ParseError(lineno, "tau cache horizon exceeds limit");
  }
  std::vector<i128> values;
  values.reserve(horizon);
  while (next_line()) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::uint64_t n = 0;
    std::string v;
    if (!(is >> n >> v) || n != values.size() + 1) {
      throw ParseError(lineno, path.string() + ": expected entry for n = " +
                                   std::to_string(values.size() + 1));
    }
    BigInt b;
    if (b.set_str(v, 10) != 0) throw ParseError(lineno, "not an integer: " + v);
    values.push_back(to_i128(b));
  }
  if (values.size() != horizon) {
    throw ParseError(lineno, path.string() + ": expected " + std::to_string(horizon) +
                                 " entries, found " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < kLeadingTau.size() && i < values.size(); ++i) {
    if (values[i] != kLeadingTau[i]) {
      throw ParseError(i + 3, path.string() + ": tau(" + std::to_string(i + 1) +
                                  ") does not match the q-expansion");
    }
  }
  return TauTable(std::move(values));
}

std::filesystem::path default_cache_dir() {
  if (const char* dir = std::getenv("RAMCONG_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "ramcong";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "ramcong";
  }
  return std::filesystem::temp_directory_path() / "ramcong";
}

std::shared_ptr<const TauTable> load_or_build_tau_table(
    std::uint64_t N, const std::optional<std::filesystem::path>& cache) {
  if (cache && std::filesystem::exists(*cache)) {
    TauTable cached = read_tau_cache(*cache);
    if (cached.horizon() >= N) return std::make_shared<const TauTable>(std::move(cached));
  }
  auto table = std::make_shared<const TauTable>(tau_table(N));
  if (cache) write_tau_cache(*table, *cache);
  return table;
}

TauAudit audit_tau_table(const TauTable& table, std::uint64_t N, unsigned parallelism) {
  if (N > table.horizon()) throw CoverageError(N, 1, "audit_tau_table: N beyond table horizon");
  TauAudit audit;
  audit.N = N;
  audit.leading_values_ok = true;
  for (std::size_t i = 0; i < kLeadingTau.size() && i < N; ++i) {
    if (table.at(i + 1) != kLeadingTau[i]) audit.leading_values_ok = false;
  }

  struct Local {
    std::uint64_t mult_checks = 0, mult_fail = 0, rec_checks = 0, rec_fail = 0;
    std::uint64_t parity_checks = 0, parity_fail = 0, deligne_checks = 0, deligne_fail = 0;
  };
  std::vector<Local> locals(N + 1);
  parallel_chunks(N, parallelism, 512, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t n = i + 1;
      Local& loc = locals[n];
      const auto fac = factorize_u64(n);
      const std::size_t w = fac.factors.size();
      // Every unitary split n = a * b with gcd(a, b) = 1, a < b.
      if (w >= 2) {
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << w); ++mask) {
          std::uint64_t a = 1;
          for (std::size_t j = 0; j < w; ++j) {
            if (mask >> j & 1) {
              for (std::uint32_t r = 0; r < fac.factors[j].exponent; ++r) a *= fac.factors[j].prime;
            }
          }
          const std::uint64_t b = n / a;
          if (a > b) continue;
          ++loc.mult_checks;
          i128 prod;
          if (__builtin_mul_overflow(table.at(a), table.at(b), &prod) || prod != table.at(n)) {
            ++loc.mult_fail;
          }
        }
      }
      if (w == 1) {
        const auto [q, e] = fac.factors[0];
        if (e >= 2) {
          ++loc.rec_checks;
          if (tau_prime_power(table, q, e) != table.value(n)) ++loc.rec_fail;
        } else {
          ++loc.deligne_checks;
          // tau(q)^2 < 4 q^11
          BigInt lhs = table.value(q);
          lhs *= lhs;
          BigInt rhs;
          mpz_ui_pow_ui(rhs.get_mpz_t(), q, 11);
          rhs *= 4;
          if (!(lhs < rhs)) ++loc.deligne_fail;
        }
      }
      ++loc.parity_checks;
      const std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
      std::uint64_t root = r;
      while (root * root > n) --root;
      while ((root + 1) * (root + 1) <= n) ++root;
      const bool odd_square = n % 2 == 1 && root * root == n;
      const bool odd_value = (table.at(n) & 1) != 0;
      if (odd_value != odd_square) ++loc.parity_fail;
    }
  });
  for (const auto& loc : locals) {
    audit.multiplicativity_checks += loc.mult_checks;
    audit.multiplicativity_failures += loc.mult_fail;
    audit.recurrence_checks += loc.rec_checks;
    audit.recurrence_failures += loc.rec_fail;
    audit.parity_checks += loc.parity_checks;
    audit.parity_failures += loc.parity_fail;
    audit.deligne_checks += loc.deligne_checks;
    audit.deligne_failures += loc.deligne_fail;
  }
  return audit;
}

bool SdReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const SdRow& r) { return r.failed == 0; });
}

namespace {

struct SdSpec {
  const char* id;
  const char* statement;
  std::uint64_t modulus;
  // Progression rows: m = step * n + offset for n = 0..N; otherwise m = n for n = 1..N.
  std::uint64_t step;
  std::uint64_t offset;
  std::uint64_t sigma_k;  // 0: right-hand side is 0
  // Right-hand multiplier: constant, or m^power (power may be negative).
  std::uint64_t constant;
  std::int64_t power;
  bool uses_power;
  // Residues of m mod `residue_modulus` for which the row applies (empty: all).
  std::uint64_t residue_modulus;
  std::vector<std::uint64_t> residues;
};

const std::vector<SdSpec>& sd_specs() {
  static const std::vector<SdSpec> specs = {
      {"sd-2-11", "tau(8n+1) = sigma_11(8n+1) (mod 2^11)", 1u << 11, 8, 1, 11, 1, 0, false, 0, {}},
      {"sd-2-13", "tau(8n+3) = 1217 sigma_11(8n+3) (mod 2^13)", 1u << 13, 8, 3, 11, 1217, 0, false, 0, {}},
      {"sd-2-12", "tau(8n+5) = 1537 sigma_11(8n+5) (mod 2^12)", 1u << 12, 8, 5, 11, 1537, 0, false, 0, {}},
      {"sd-2-14", "tau(8n+7) = 705 sigma_11(8n+7) (mod 2^14)", 1u << 14, 8, 7, 11, 705, 0, false, 0, {}},
      {"sd-3-6", "tau(3n+1) = (3n+1)^-610 sigma_1231(3n+1) (mod 3^6)", 729, 3, 1, 1231, 1, -610, true, 0, {}},
      {"sd-3-7", "tau(3n+2) = (3n+2)^-610 sigma_1231(3n+2) (mod 3^7)", 2187, 3, 2, 1231, 1, -610, true, 0, {}},
      {"sd-5-3", "tau(n) = n^-30 sigma_71(n) (mod 5^3), n != 0 (mod 5)", 125, 0, 0, 71, 1, -30, true, 5, {1, 2, 3, 4}},
      {"sd-7-1", "tau(n) = n sigma_9(n) (mod 7), n = 0,1,2,4 (mod 7)", 7, 0, 0, 9, 1, 1, true, 7, {0, 1, 2, 4}},
      {"sd-7-2", "tau(n) = n sigma_9(n) (mod 7^2), n = 3,5,6 (mod 7)", 49, 0, 0, 9, 1, 1, true, 7, {3, 5, 6}},
      {"ram-7-3", "tau(7n+3) = 0 (mod 7)", 7, 7, 3, 0, 0, 0, false, 0, {}},
      {"ram-7-5", "tau(7n+5) = 0 (mod 7)", 7, 7, 5, 0, 0, 0, false, 0, {}},
      {"ram-7-6", "tau(7n+6) = 0 (mod 7)", 7, 7, 6, 0, 0, 0, false, 0, {}},
  };
  return specs;
}

}  // namespace

SdReport verify_sd_congruences(const TauTable& table, std::uint64_t N, unsigned parallelism) {
  if (sd_required_horizon(N) > table.horizon()) {
    throw CoverageError(sd_required_horizon(N), 1,
                        "verify_sd_congruences: table horizon " + std::to_string(table.horizon()) +
                            " < required " + std::to_string(sd_required_horizon(N)));
  }
  SdReport report;
  report.N = N;
  report.table_horizon = table.horizon();
  const auto& specs = sd_specs();
  report.rows.resize(specs.size());
  parallel_for(specs.size(), parallelism, [&](std::size_t i) {
    const SdSpec& s = specs[i];
    SdRow row;
    row.id = s.id;
    row.statement = s.statement;
    row.modulus = s.modulus;
    const FnDescriptor sig = sigma_function(s.sigma_k);
    const std::uint64_t first = s.step ? 0 : 1;
    for (std::uint64_t n = first; n <= N; ++n) {
      const std::uint64_t m = s.step ? s.step * n + s.offset : n;
      if (s.residue_modulus &&
          std::find(s.residues.begin(), s.residues.end(), m % s.residue_modulus) == s.residues.end()) {
        ++row.inapplicable;
        continue;
      }
      const std::uint64_t M = s.modulus;
      std::uint64_t rhs = 0;
      if (s.sigma_k != 0) {
        std::uint64_t factor = s.constant % M;
        if (s.uses_power) {
          if (s.power >= 0) {
            factor = pow_mod(m, static_cast<std::uint64_t>(s.power), M);
          } else {
            const auto inv = inverse_mod(m % M, M);
            if (!inv) {
              ++row.inapplicable;
              continue;
            }
            factor = pow_mod(*inv, static_cast<std::uint64_t>(-s.power), M);
          }
        }
        rhs = mul_mod(factor, eval_mod(sig, m, M), M);
      }
      ++row.checked;
      if (mod_u64(table.at(m), M) == rhs) {
        ++row.passed;
      } else {
        ++row.failed;
        if (!row.first_failure) row.first_failure = m;
      }
    }
    report.rows[i] = std::move(row);
  });
  return report;
}

}  // namespace ramcong
