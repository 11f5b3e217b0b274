#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ramcong/bigint.hpp"
#include "ramcong/extended_nat.hpp"

namespace ramcong {

enum class ProfileKind { ClosedForm, EventuallyPeriodic, Unknown };

std::string to_string(ProfileKind kind);

struct ProfileMinimum {
  ExtendedNat value;
  std::uint64_t exponent = 0;  // e >= a attaining the minimum
};

// Behaviour of e -> nu_p(f(q^e)).
//
// `registered` profiles are structural facts about the function (closed forms,
// recurrence periodicity) and may certify minima over all e. Profiles built
// from samples are never registered.
struct ValuationProfile {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  ProfileKind kind = ProfileKind::Unknown;
  bool registered = false;
  std::string q_class;  // regime the rule belongs to, e.g. "q^k = 1 (mod p)"
  std::string rule;

  // ClosedForm evaluator.
  std::function<ExtendedNat(std::uint64_t)> evaluate;
  // Exact min over e >= a; nullopt when the profile cannot decide it.
  std::function<std::optional<ProfileMinimum>(std::uint64_t)> minimum_from;

  // EventuallyPeriodic: values[e] for e < preperiod + period. Entries equal to
  // `cap` (when set) are lower bounds only.
  std::uint64_t preperiod = 0;
  std::uint64_t period = 0;
  std::vector<ExtendedNat> values;
  std::optional<std::uint64_t> cap;

  // Unknown / detected: direct samples for e = 0 .. samples.size() - 1.
  std::vector<ExtendedNat> samples;

  // Value at e for ClosedForm / EventuallyPeriodic (nullopt if capped/unknown).
  std::optional<ExtendedNat> at(std::uint64_t e) const;
};

// Exact values of a multiplicative function at prime powers q^e, e >= 1.
class PrimePowerRule {
 public:
  virtual ~PrimePowerRule() = default;
  virtual BigInt value(std::uint64_t q, std::uint64_t e) const = 0;
  // value(q, e) mod m in [0, m); m >= 2.
  virtual std::uint64_t value_mod(std::uint64_t q, std::uint64_t e, std::uint64_t m) const {
    return mod_u64(value(q, e), m);
  }
  virtual std::optional<ValuationProfile> registered_profile(std::uint64_t /*p*/,
                                                             std::uint64_t /*q*/) const {
    return std::nullopt;
  }
};

enum class FnFamily { Sigma, Phi, Tau, Table };

// Immutable handle to a multiplicative function; cheap to copy.
class FnDescriptor {
 public:
  FnDescriptor(std::string name, FnFamily family, std::shared_ptr<const PrimePowerRule> rule,
               bool zero_possible, std::optional<std::uint64_t> sigma_k = std::nullopt);

  const std::string& name() const { return name_; }
  FnFamily family() const { return family_; }
  bool zero_possible() const { return zero_possible_; }
  // k for the sigma family.
  std::optional<std::uint64_t> sigma_k() const { return sigma_k_; }
  bool is_sigma_family() const { return family_ == FnFamily::Sigma; }

  BigInt prime_power(std::uint64_t q, std::uint64_t e) const;
  std::uint64_t prime_power_mod(std::uint64_t q, std::uint64_t e, std::uint64_t m) const;
  // nu_p(|f(q^e)|), infinity when f(q^e) = 0.
  ExtendedNat prime_power_valuation(std::uint64_t p, std::uint64_t q, std::uint64_t e) const;
  std::optional<ValuationProfile> registered_profile(std::uint64_t p, std::uint64_t q) const;

 private:
  std::string name_;
  FnFamily family_;
  std::shared_ptr<const PrimePowerRule> rule_;
  bool zero_possible_;
  std::optional<std::uint64_t> sigma_k_;
};

FnDescriptor sigma_function(std::uint64_t k);
FnDescriptor phi_function();

using PrimePowerTable = std::map<std::pair<std::uint64_t, std::uint64_t>, BigInt>;
// Lookups outside the table raise CoverageError naming (q, e).
FnDescriptor table_function(std::string name, PrimePowerTable table);

BigInt eval_prime_power(const FnDescriptor& f, std::uint64_t q, std::uint64_t e);
// Multiplicative extension; throws DomainError for n == 0.
BigInt eval(const FnDescriptor& f, std::uint64_t n);
// eval(f, n) mod M without materialising f(n); M >= 2.
std::uint64_t eval_mod(const FnDescriptor& f, std::uint64_t n, std::uint64_t M);
// nu_p(|f(n)|) summed over the prime-power factors of n.
ExtendedNat eval_valuation(const FnDescriptor& f, std::uint64_t p, std::uint64_t n);

inline constexpr std::uint64_t kDefaultExponentHorizon = 64;

// Registered profile when the function has one; otherwise samples e <= horizon
// and attempts period detection (unregistered).
ValuationProfile valuation_profile(const FnDescriptor& f, std::uint64_t p, std::uint64_t q,
                                   std::uint64_t horizon = kDefaultExponentHorizon);

}  // namespace ramcong
