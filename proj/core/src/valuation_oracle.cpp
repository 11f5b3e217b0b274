#include "ramcong/valuation_oracle.hpp"

#include "ramcong/arith.hpp"
#include "ramcong/errors.hpp"

namespace ramcong {

namespace {

constexpr std::uint8_t kUnknownCode = 254;
constexpr std::uint8_t kInfinityCode = 255;

std::uint8_t encode(ExtendedNat v) {
  if (v.is_infinite()) return kInfinityCode;
  return v.value() < kUnknownCode ? static_cast<std::uint8_t>(v.value()) : kUnknownCode;
}

std::uint8_t combine(std::uint8_t a, std::uint8_t b) {
  if (a == kInfinityCode || b == kInfinityCode) return kInfinityCode;
  if (a == kUnknownCode || b == kUnknownCode) return kUnknownCode;
  const unsigned s = unsigned(a) + b;
  return s < kUnknownCode ? static_cast<std::uint8_t>(s) : kUnknownCode;
}

}  // namespace

ValuationOracle::ValuationOracle(FnDescriptor f, std::uint64_t p, std::uint64_t dense_bound)
    : f_(std::move(f)), p_(p) {
  if (!is_prime(p)) throw DomainError("ValuationOracle: p = " + std::to_string(p) + " is not prime");
  if (dense_bound < 2) return;
  table_.assign(dense_bound + 1, 0);
  const PrimeSieve sieve(dense_bound);
  for (const std::uint64_t q : sieve.primes()) {
    std::uint8_t v1;
    try {
      v1 = encode(f_.prime_power_valuation(p_, q, 1));
    } catch (const CoverageError&) {
      v1 = kUnknownCode;
    }
    std::uint64_t residue = 0;  // j mod q
    for (std::uint64_t j = 1, m = q; m <= dense_bound; ++j, m += q) {
      if (++residue == q) residue = 0;
      std::uint8_t v = v1;
      if (residue == 0) {
        std::uint64_t e = 2;
        for (std::uint64_t r = j / q; r % q == 0; r /= q) ++e;
        try {
          v = encode(f_.prime_power_valuation(p_, q, e));
        } catch (const CoverageError&) {
          v = kUnknownCode;
        }
      }
      table_[m] = combine(table_[m], v);
    }
  }
}

}  // namespace ramcong
