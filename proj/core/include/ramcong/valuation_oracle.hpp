#pragma once

#include <cstdint>
#include <vector>

#include "ramcong/extended_nat.hpp"
#include "ramcong/mult_fn.hpp"

namespace ramcong {

// nu_p(|f(m)|) for m >= 1.
//
// Values for m <= dense_bound come from a table filled by sieving prime
// powers; larger m (and table cells that could not be filled, e.g. tau beyond
// its coverage) are evaluated by factorization. Immutable after construction.
class ValuationOracle {
 public:
  ValuationOracle(FnDescriptor f, std::uint64_t p, std::uint64_t dense_bound = 0);

  const FnDescriptor& function() const { return f_; }
  std::uint64_t prime() const { return p_; }
  std::uint64_t dense_bound() const { return table_.empty() ? 0 : table_.size() - 1; }

  ExtendedNat at(std::uint64_t m) const {
    if (m < table_.size()) {
      const std::uint8_t code = table_[m];
      if (code < kUnknown) return code;
      if (code == kInfinity) return ExtendedNat::infinity();
    }
    return eval_valuation(f_, p_, m);
  }

 private:
  static constexpr std::uint8_t kUnknown = 254;
  static constexpr std::uint8_t kInfinity = 255;

  FnDescriptor f_;
  std::uint64_t p_;
  std::vector<std::uint8_t> table_;
};

}  // namespace ramcong
