#include "ramcong/extended_nat.hpp"

#include <charconv>
#include <stdexcept>

namespace ramcong {

std::uint64_t ExtendedNat::value() const {
  if (!finite_) throw std::logic_error("ExtendedNat::value() on infinity");
  return value_;
}

std::string ExtendedNat::to_string() const {
  return finite_ ? std::to_string(value_) : std::string("inf");
}

ExtendedNat ExtendedNat::parse(const std::string& text) {
  if (text == "inf") return infinity();
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a valuation: '" + text + "'");
  }
  return ExtendedNat(v);
}

std::ostream& operator<<(std::ostream& os, ExtendedNat v) { return os << v.to_string(); }

}  // namespace ramcong
