#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ramcong/bigint.hpp"
#include "ramcong/extended_nat.hpp"

namespace ramcong {

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// sign * prod prime^exponent, primes strictly increasing.
struct Factorization {
  int sign = 1;
  std::vector<PrimePower> factors;

  BigInt value() const;
  // Exponent of q in the factorization (0 if absent).
  std::uint32_t exponent_of(std::uint64_t q) const;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

// Sieve of Eratosthenes over odd numbers.
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint64_t bound);

  std::uint64_t bound() const { return bound_; }
  bool is_prime(std::uint64_t n) const;
  // All primes <= bound, increasing.
  std::span<const std::uint32_t> primes() const { return primes_; }

 private:
  std::uint64_t bound_;
  std::vector<bool> odd_composite_;
  std::vector<std::uint32_t> primes_;
};

// Shared sieve used for trial division; bound 2^20.
const PrimeSieve& small_prime_sieve();

// Deterministic Miller-Rabin over the full 64-bit range.
bool is_prime(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m);

// Largest power p^L with p^L <= 2^62; returns (p^L, L).
std::pair<std::uint64_t, std::uint32_t> max_prime_power_u62(std::uint64_t p);

// Throws DomainError for n == 0.
Factorization factorize(std::int64_t n);
Factorization factorize_u64(std::uint64_t n);
Factorization factorize(const BigInt& n);

// nu_p(m); infinity for m == 0; the sign of m is ignored.
// Throws DomainError if p is not prime.
ExtendedNat nu(std::uint64_t p, std::int64_t m);
ExtendedNat nu(std::uint64_t p, const BigInt& m);
ExtendedNat nu_u64(std::uint64_t p, std::uint64_t m);

// Exact form of A n + B split along G = gcd(A, B).
struct Progression {
  std::uint64_t A = 0;
  std::uint64_t B = 0;
  std::uint64_t G = 0;
  std::uint64_t A_prime = 0;
  std::uint64_t B_prime = 0;
  // prod over primes q | G, q | A' of q^{nu_q(G)}.
  std::uint64_t G_prime = 0;
  Factorization G_factors;
  Factorization A_prime_factors;
  Factorization G_prime_factors;
};

Progression decompose_progression(std::uint64_t A, std::uint64_t B);

// Largest divisor of n coprime to C.
std::uint64_t coprime_part(std::uint64_t n, std::uint64_t C);
// Same, with the primes of C given up front.
std::uint64_t coprime_part(std::uint64_t n, std::span<const std::uint64_t> c_primes);

// Kronecker symbol (a / n).
int kronecker(std::int64_t a, std::uint64_t n);

struct QuadraticClass {
  bool is_square_mod = false;
  bool is_twice_square_mod = false;
  int kronecker = 0;
  // Smallest x in [0, A') with x^2 = B' (resp. 2x^2 = B') mod A', when one exists.
  std::optional<std::uint64_t> square_root;
  std::optional<std::uint64_t> twice_square_root;
};

// Residue tests by enumeration of x mod A'. Requires gcd(A', B') = 1.
QuadraticClass quadratic_class(std::uint64_t B_prime, std::uint64_t A_prime);

struct PrimeSearch {
  std::vector<std::uint64_t> primes;
  // True when the candidate horizon ran out before the budget was met.
  bool horizon_exhausted = false;
  std::uint64_t candidate_bound = 0;
};

inline constexpr std::uint64_t kDefaultCandidateBound = 1'000'000;

// Up to `budget` primes q = B (mod A) with min_value <= q <= candidate_bound and
// q not dividing `exclude`. Requires gcd(A, B) = 1.
PrimeSearch primes_in_progression(std::uint64_t A, std::uint64_t B, std::uint64_t exclude,
                                  std::size_t budget,
                                  std::uint64_t candidate_bound = kDefaultCandidateBound,
                                  std::uint64_t min_value = 0);

}  // namespace ramcong
