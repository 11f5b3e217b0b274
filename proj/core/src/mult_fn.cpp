#include "ramcong/mult_fn.hpp"

#include <algorithm>

#include "ramcong/arith.hpp"
#include "ramcong/errors.hpp"

namespace ramcong {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::ClosedForm: return "ClosedForm";
    case ProfileKind::EventuallyPeriodic: return "EventuallyPeriodic";
    case ProfileKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<ExtendedNat> ValuationProfile::at(std::uint64_t e) const {
  if (kind == ProfileKind::ClosedForm && evaluate) return evaluate(e);
  if (kind == ProfileKind::EventuallyPeriodic && period > 0) {
    std::uint64_t idx = e < preperiod ? e : preperiod + (e - preperiod) % period;
    if (idx >= values.size()) return std::nullopt;
    if (cap && values[idx] == ExtendedNat(*cap)) return std::nullopt;
    return values[idx];
  }
  if (e < samples.size()) return samples[e];
  return std::nullopt;
}

FnDescriptor::FnDescriptor(std::string name, FnFamily family,
                           std::shared_ptr<const PrimePowerRule> rule, bool zero_possible,
                           std::optional<std::uint64_t> sigma_k)
    : name_(std::move(name)),
      family_(family),
      rule_(std::move(rule)),
      zero_possible_(zero_possible),
      sigma_k_(sigma_k) {}

BigInt FnDescriptor::prime_power(std::uint64_t q, std::uint64_t e) const {
  if (e == 0) return 1;
  return rule_->value(q, e);
}

std::uint64_t FnDescriptor::prime_power_mod(std::uint64_t q, std::uint64_t e,
                                            std::uint64_t m) const {
  if (e == 0) return 1 % m;
  return rule_->value_mod(q, e, m);
}

ExtendedNat FnDescriptor::prime_power_valuation(std::uint64_t p, std::uint64_t q,
                                                std::uint64_t e) const {
  if (e == 0) return 0;
  const auto [pl, L] = max_prime_power_u62(p);
  (void)L;
  const std::uint64_t r = rule_->value_mod(q, e, pl);
  if (r != 0) return nu_u64(p, r);
  return nu(p, rule_->value(q, e));
}

std::optional<ValuationProfile> FnDescriptor::registered_profile(std::uint64_t p,
                                                                 std::uint64_t q) const {
  return rule_->registered_profile(p, q);
}

namespace {

std::uint64_t multiplicative_order(std::uint64_t r, std::uint64_t p) {
  std::uint64_t order = p - 1;
  for (const auto& [f, e] : factorize_u64(p - 1).factors) {
    for (std::uint32_t i = 0; i < e; ++i) {
      if (pow_mod(r, order / f, p) == 1) {
        order /= f;
      } else {
        break;
      }
    }
  }
  return order;
}

// nu_p(q^m - 1) exactly.
ExtendedNat nu_power_minus_one(std::uint64_t p, std::uint64_t q, std::uint64_t m) {
  const auto [pl, L] = max_prime_power_u62(p);
  (void)L;
  const std::uint64_t r = (pow_mod(q, m, pl) + pl - 1) % pl;
  if (r != 0) return nu_u64(p, r);
  BigInt v;
  mpz_ui_pow_ui(v.get_mpz_t(), q, m);
  return nu(p, BigInt(v - 1));
}

std::uint64_t nu_small(std::uint64_t p, std::uint64_t n) { return nu_u64(p, n).value(); }

ProfileMinimum first_zero_from(std::uint64_t a, std::uint64_t divisor) {
  // e + 1 not divisible by divisor >= 2: one of a, a + 1 qualifies.
  return {0, (a + 1) % divisor != 0 ? a : a + 1};
}

class SigmaRule final : public PrimePowerRule {
 public:
  explicit SigmaRule(std::uint64_t k) : k_(k) {}

  BigInt value(std::uint64_t q, std::uint64_t e) const override {
    if (k_ == 0) return to_bigint(e + 1);
    BigInt x;
    mpz_ui_pow_ui(x.get_mpz_t(), q, k_);
    BigInt xe;
    mpz_pow_ui(xe.get_mpz_t(), x.get_mpz_t(), e + 1);
    BigInt r = (xe - 1);
    mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), BigInt(x - 1).get_mpz_t());
    return r;
  }

  std::uint64_t value_mod(std::uint64_t q, std::uint64_t e, std::uint64_t m) const override {
    if (k_ == 0) return (e + 1) % m;
    const std::uint64_t x = pow_mod(q, k_, m);
    std::uint64_t term = 1 % m, sum = 0;
    for (std::uint64_t i = 0; i <= e; ++i) {
      sum = (sum + term) % m;
      term = mul_mod(term, x, m);
    }
    return sum;
  }

  std::optional<ValuationProfile> registered_profile(std::uint64_t p,
                                                     std::uint64_t q) const override {
    ValuationProfile vp;
    vp.p = p;
    vp.q = q;
    vp.kind = ProfileKind::ClosedForm;
    vp.registered = true;
    if (k_ == 0) {
      vp.q_class = "all q";
      vp.rule = "nu_p(e + 1)";
      vp.evaluate = [p](std::uint64_t e) { return ExtendedNat(nu_small(p, e + 1)); };
      vp.minimum_from = [p](std::uint64_t a) { return std::optional(first_zero_from(a, p)); };
      return vp;
    }
    if (q == p) {
      vp.q_class = "q = p";
      vp.rule = "0 (sigma_k(p^e) = 1 mod p)";
      vp.evaluate = [](std::uint64_t) { return ExtendedNat(0); };
      vp.minimum_from = [](std::uint64_t a) { return std::optional(ProfileMinimum{0, a}); };
      return vp;
    }
    if (p == 2) {
      const std::uint64_t t = nu_power_plus_one_2(q);
      vp.q_class = "q odd";
      vp.rule = "0 if e even, else nu_2(q^k + 1) + nu_2(e + 1) - 1 with nu_2(q^k + 1) = " +
                std::to_string(t);
      vp.evaluate = [t](std::uint64_t e) {
        if ((e + 1) % 2 != 0) return ExtendedNat(0);
        return ExtendedNat(t + nu_small(2, e + 1) - 1);
      };
      vp.minimum_from = [](std::uint64_t a) { return std::optional(first_zero_from(a, 2)); };
      return vp;
    }
    const std::uint64_t r = pow_mod(q, k_, p);
    if (r == 1) {
      vp.q_class = "q^k = 1 (mod p)";
      vp.rule = "nu_p(e + 1)";
      vp.evaluate = [p](std::uint64_t e) { return ExtendedNat(nu_small(p, e + 1)); };
      vp.minimum_from = [p](std::uint64_t a) { return std::optional(first_zero_from(a, p)); };
      return vp;
    }
    const std::uint64_t d = multiplicative_order(r, p);
    const ExtendedNat w = nu_power_minus_one(p, q, k_ * d);
    vp.q_class = "q^k of order " + std::to_string(d) + " mod p";
    vp.rule = "0 unless " + std::to_string(d) + " | e + 1, then " + w.to_string() +
              " + nu_p((e + 1) / " + std::to_string(d) + ")";
    vp.evaluate = [p, d, w](std::uint64_t e) {
      if ((e + 1) % d != 0) return ExtendedNat(0);
      return w + ExtendedNat(nu_small(p, (e + 1) / d));
    };
    vp.minimum_from = [d](std::uint64_t a) { return std::optional(first_zero_from(a, d)); };
    return vp;
  }

 private:
  std::uint64_t nu_power_plus_one_2(std::uint64_t q) const {
    constexpr std::uint64_t kMod = std::uint64_t{1} << 62;
    const std::uint64_t r = (pow_mod(q, k_, kMod) + 1) % kMod;
    if (r != 0) return nu_small(2, r);
    BigInt v;
    mpz_ui_pow_ui(v.get_mpz_t(), q, k_);
    return nu(2, BigInt(v + 1)).value();
  }

  std::uint64_t k_;
};

class PhiRule final : public PrimePowerRule {
 public:
  BigInt value(std::uint64_t q, std::uint64_t e) const override {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), q, e - 1);
    return r * to_bigint(q - 1);
  }

  std::uint64_t value_mod(std::uint64_t q, std::uint64_t e, std::uint64_t m) const override {
    return mul_mod(pow_mod(q, e - 1, m), (q - 1) % m, m);
  }

  std::optional<ValuationProfile> registered_profile(std::uint64_t p,
                                                     std::uint64_t q) const override {
    ValuationProfile vp;
    vp.p = p;
    vp.q = q;
    vp.kind = ProfileKind::ClosedForm;
    vp.registered = true;
    const std::uint64_t base = q == 2 ? 0 : nu_small(p, q - 1);
    const bool same = q == p;
    vp.q_class = same ? "q = p" : "q != p";
    vp.rule = same ? "e - 1 for e >= 1" : "nu_p(q - 1) = " + std::to_string(base) + " for e >= 1";
    vp.evaluate = [base, same](std::uint64_t e) {
      if (e == 0) return ExtendedNat(0);
      return ExtendedNat(base + (same ? e - 1 : 0));
    };
    // Non-decreasing in e, so the minimum over e >= a sits at e = a.
    vp.minimum_from = [f = vp.evaluate](std::uint64_t a) {
      return std::optional(ProfileMinimum{f(a), a});
    };
    return vp;
  }
};

class TableRule final : public PrimePowerRule {
 public:
  explicit TableRule(PrimePowerTable table) : table_(std::move(table)) {}

  BigInt value(std::uint64_t q, std::uint64_t e) const override {
    auto it = table_.find({q, e});
    if (it == table_.end()) {
      throw CoverageError(q, e,
                          "table function has no value at q = " + std::to_string(q) +
                              ", e = " + std::to_string(e));
    }
    return it->second;
  }

 private:
  PrimePowerTable table_;
};

}  // namespace

FnDescriptor sigma_function(std::uint64_t k) {
  return FnDescriptor("sigma_" + std::to_string(k), FnFamily::Sigma,
                      std::make_shared<SigmaRule>(k), false, k);
}

FnDescriptor phi_function() {
  return FnDescriptor("phi", FnFamily::Phi, std::make_shared<PhiRule>(), false);
}

FnDescriptor table_function(std::string name, PrimePowerTable table) {
  bool zero = std::any_of(table.begin(), table.end(), [](const auto& kv) { return kv.second == 0; });
  return FnDescriptor(std::move(name), FnFamily::Table,
                      std::make_shared<TableRule>(std::move(table)), zero);
}

BigInt eval_prime_power(const FnDescriptor& f, std::uint64_t q, std::uint64_t e) {
  if (!is_prime(q)) throw DomainError("eval_prime_power: " + std::to_string(q) + " is not prime");
  return f.prime_power(q, e);
}

BigInt eval(const FnDescriptor& f, std::uint64_t n) {
  if (n == 0) throw DomainError("eval: n must be >= 1");
  BigInt r = 1;
  for (const auto& [q, e] : factorize_u64(n).factors) r *= f.prime_power(q, e);
  return r;
}

std::uint64_t eval_mod(const FnDescriptor& f, std::uint64_t n, std::uint64_t M) {
  if (M < 2) throw DomainError("eval_mod: modulus must be >= 2");
  if (n == 0) throw DomainError("eval_mod: n must be >= 1");
  std::uint64_t r = 1;
  for (const auto& [q, e] : factorize_u64(n).factors) {
    r = mul_mod(r, f.prime_power_mod(q, e, M), M);
  }
  return r;
}

ExtendedNat eval_valuation(const FnDescriptor& f, std::uint64_t p, std::uint64_t n) {
  if (n == 0) throw DomainError("eval_valuation: n must be >= 1");
  ExtendedNat total = 0;
  for (const auto& [q, e] : factorize_u64(n).factors) {
    total += f.prime_power_valuation(p, q, e);
  }
  return total;
}

namespace {

// Smallest (period, preperiod) explaining the samples with at least two full
// periods observed.
std::optional<std::pair<std::uint64_t, std::uint64_t>> detect_period(
    const std::vector<ExtendedNat>& s) {
  const std::size_t n = s.size();
  for (std::size_t per = 1; per * 2 <= n; ++per) {
    std::size_t pre = n - per;
    while (pre > 0 && s[pre - 1] == s[pre - 1 + per]) --pre;
    if (n - pre >= 2 * per) return std::pair{per, pre};
  }
  return std::nullopt;
}

}  // namespace

ValuationProfile valuation_profile(const FnDescriptor& f, std::uint64_t p, std::uint64_t q,
                                   std::uint64_t horizon) {
  if (!is_prime(p) || !is_prime(q)) throw DomainError("valuation_profile: p and q must be prime");
  if (auto reg = f.registered_profile(p, q)) return *reg;

  ValuationProfile vp;
  vp.p = p;
  vp.q = q;
  vp.q_class = "q = " + std::to_string(q);
  for (std::uint64_t e = 0; e <= horizon; ++e) {
    try {
      vp.samples.push_back(f.prime_power_valuation(p, q, e));
    } catch (const CoverageError&) {
      break;
    }
  }
  if (auto pp = detect_period(vp.samples)) {
    vp.kind = ProfileKind::EventuallyPeriodic;
    vp.period = pp->first;
    vp.preperiod = pp->second;
    vp.values.assign(vp.samples.begin(),
                     vp.samples.begin() + static_cast<std::ptrdiff_t>(vp.preperiod + vp.period));
    vp.rule = "detected from " + std::to_string(vp.samples.size()) + " samples (unproven)";
  } else {
    vp.kind = ProfileKind::Unknown;
    vp.rule = "no structure detected in " + std::to_string(vp.samples.size()) + " samples";
  }
  return vp;
}

}  // namespace ramcong
