#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace ramcong {

// Arbitrary-precision signed integer used for every exact value that can
// leave the 64-bit range (sigma_k at large k, tau at prime powers).
using BigInt = mpz_class;

using i128 = __int128;
using u128 = unsigned __int128;

BigInt to_bigint(i128 v);
BigInt to_bigint(std::uint64_t v);
BigInt to_bigint(std::int64_t v);

// Throws std::overflow_error when the value does not fit.
i128 to_i128(const BigInt& v);

std::string to_string(i128 v);
std::string to_string(const BigInt& v);

// Least non-negative residue of v modulo m (m >= 1).
std::uint64_t mod_u64(const BigInt& v, std::uint64_t m);
std::uint64_t mod_u64(i128 v, std::uint64_t m);

}  // namespace ramcong
