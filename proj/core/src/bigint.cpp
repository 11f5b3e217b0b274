#include "ramcong/bigint.hpp"

#include <algorithm>
#include <stdexcept>

namespace ramcong {

BigInt to_bigint(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

BigInt to_bigint(std::int64_t v) {
  if (v >= 0) return to_bigint(static_cast<std::uint64_t>(v));
  BigInt r = to_bigint(static_cast<std::uint64_t>(-(v + 1)));
  r += 1;
  return -r;
}

BigInt to_bigint(i128 v) {
  const bool negative = v < 0;
  u128 mag = negative ? u128(-(v + 1)) + 1 : u128(v);
  std::uint64_t words[2] = {static_cast<std::uint64_t>(mag),
                            static_cast<std::uint64_t>(mag >> 64)};
  BigInt r;
  mpz_import(r.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  return negative ? BigInt(-r) : r;
}

i128 to_i128(const BigInt& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 126) {
    throw std::overflow_error("integer does not fit in 128 bits: " + v.get_str());
  }
  std::uint64_t words[2] = {0, 0};
  std::size_t count = 0;
  mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
  u128 mag = (u128(words[1]) << 64) | words[0];
  return sgn(v) < 0 ? -i128(mag) : i128(mag);
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  u128 mag = negative ? u128(-(v + 1)) + 1 : u128(v);
  std::string s;
  while (mag) {
    s.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_string(const BigInt& v) { return v.get_str(); }

std::uint64_t mod_u64(const BigInt& v, std::uint64_t m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), to_bigint(m).get_mpz_t());
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, -1, sizeof(out), 0, 0, r.get_mpz_t());
  return out;
}

std::uint64_t mod_u64(i128 v, std::uint64_t m) {
  i128 r = v % i128(m);
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

}  // namespace ramcong
