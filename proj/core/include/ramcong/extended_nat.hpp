#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace ramcong {

// A valuation: a finite non-negative integer or +infinity (nu_p(0)).
class ExtendedNat {
 public:
  constexpr ExtendedNat() = default;
  constexpr ExtendedNat(std::uint64_t v) : finite_(true), value_(v) {}  // NOLINT

  static constexpr ExtendedNat infinity() {
    ExtendedNat r;
    r.finite_ = false;
    return r;
  }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_infinite() const { return !finite_; }

  // Precondition: is_finite().
  std::uint64_t value() const;
  constexpr std::optional<std::uint64_t> finite_value() const {
    return finite_ ? std::optional<std::uint64_t>(value_) : std::nullopt;
  }

  friend constexpr ExtendedNat operator+(ExtendedNat a, ExtendedNat b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return ExtendedNat(a.value_ + b.value_);
  }
  ExtendedNat& operator+=(ExtendedNat b) { return *this = *this + b; }

  friend constexpr bool operator==(ExtendedNat a, ExtendedNat b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(ExtendedNat a, ExtendedNat b) {
    if (!a.finite_ || !b.finite_) {
      if (a.finite_ == b.finite_) return std::strong_ordering::equal;
      return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.value_ <=> b.value_;
  }

  // "inf" for infinity, decimal otherwise.
  std::string to_string() const;
  static ExtendedNat parse(const std::string& text);

 private:
  bool finite_ = true;
  std::uint64_t value_ = 0;
};

constexpr ExtendedNat min(ExtendedNat a, ExtendedNat b) { return b < a ? b : a; }

std::ostream& operator<<(std::ostream& os, ExtendedNat v);

}  // namespace ramcong
