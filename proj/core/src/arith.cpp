#include "ramcong/arith.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "ramcong/errors.hpp"

namespace ramcong {

BigInt Factorization::value() const {
  BigInt r = 1;
  for (const auto& [q, e] : factors) {
    BigInt t;
    mpz_pow_ui(t.get_mpz_t(), to_bigint(q).get_mpz_t(), e);
    r *= t;
  }
  return sign < 0 ? BigInt(-r) : r;
}

std::uint32_t Factorization::exponent_of(std::uint64_t q) const {
  for (const auto& f : factors) {
    if (f.prime == q) return f.exponent;
  }
  return 0;
}

PrimeSieve::PrimeSieve(std::uint64_t bound) : bound_(bound), odd_composite_(bound / 2 + 1) {
  for (std::uint64_t i = 3; i * i <= bound; i += 2) {
    if (odd_composite_[i / 2]) continue;
    for (std::uint64_t j = i * i; j <= bound; j += 2 * i) odd_composite_[j / 2] = true;
  }
  if (bound >= 2) primes_.push_back(2);
  for (std::uint64_t i = 3; i <= bound; i += 2) {
    if (!odd_composite_[i / 2]) primes_.push_back(static_cast<std::uint32_t>(i));
  }
}

bool PrimeSieve::is_prime(std::uint64_t n) const {
  if (n > bound_) throw DomainError("PrimeSieve::is_prime beyond sieve bound");
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  return !odd_composite_[n / 2];
}

const PrimeSieve& small_prime_sieve() {
  static const PrimeSieve sieve(1u << 20);
  return sieve;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(u128(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 0) return std::nullopt;
  i128 old_r = a % m, r = m, old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  if (old_r != 1) return m == 1 ? std::optional<std::uint64_t>(0) : std::nullopt;
  old_s %= i128(m);
  if (old_s < 0) old_s += m;
  return static_cast<std::uint64_t>(old_s);
}

std::pair<std::uint64_t, std::uint32_t> max_prime_power_u62(std::uint64_t p) {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
  std::uint64_t pk = p;
  std::uint32_t L = 1;
  while (pk <= kLimit / p) {
    pk *= p;
    ++L;
  }
  return {pk, L};
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  std::uint64_t d = n - 1;
  int s = std::countr_zero(d);
  d >>= s;
  for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    std::uint64_t x = pow_mod(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

// Brent's variant of Pollard rho; n is odd composite.
std::uint64_t pollard_brent(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    constexpr std::uint64_t m = 128;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rest(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_brent(n);
  factor_rest(d, out);
  factor_rest(n / d, out);
}

Factorization collect(std::vector<std::uint64_t>& primes, int sign) {
  std::sort(primes.begin(), primes.end());
  Factorization f;
  f.sign = sign;
  for (std::uint64_t q : primes) {
    if (!f.factors.empty() && f.factors.back().prime == q) {
      ++f.factors.back().exponent;
    } else {
      f.factors.push_back({q, 1});
    }
  }
  return f;
}

constexpr std::uint64_t kTrialBound = 1u << 16;

}  // namespace

Factorization factorize_u64(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize: 0 has no factorization");
  std::vector<std::uint64_t> primes;
  for (std::uint32_t q : small_prime_sieve().primes()) {
    if (q > kTrialBound || std::uint64_t{q} * q > n) break;
    while (n % q == 0) {
      primes.push_back(q);
      n /= q;
    }
  }
  if (n > 1) {
    if (n < kTrialBound * kTrialBound) {
      primes.push_back(n);
    } else {
      factor_rest(n, primes);
    }
  }
  return collect(primes, 1);
}

Factorization factorize(std::int64_t n) {
  if (n == 0) throw DomainError("factorize: 0 has no factorization");
  std::uint64_t mag = n < 0 ? std::uint64_t(-(n + 1)) + 1 : std::uint64_t(n);
  Factorization f = factorize_u64(mag);
  f.sign = n < 0 ? -1 : 1;
  return f;
}

namespace {

BigInt pollard_brent_big(const BigInt& n) {
  for (unsigned long c = 1;; ++c) {
    auto f = [&](const BigInt& x) {
      BigInt r = x * x + c;
      mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
      return r;
    };
    BigInt x = 2, y = 2, g = 1;
    while (g == 1) {
      x = f(x);
      y = f(f(y));
      BigInt diff = abs(x - y);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (g != n) return g;
  }
}

void factor_big(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (mpz_fits_ulong_p(n.get_mpz_t())) {
    for (const auto& [q, e] : factorize_u64(n.get_ui()).factors) {
      for (std::uint32_t i = 0; i < e; ++i) out.push_back(to_bigint(q));
    }
    return;
  }
  if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
    out.push_back(n);
    return;
  }
  BigInt d = pollard_brent_big(n);
  factor_big(d, out);
  factor_big(n / d, out);
}

}  // namespace

Factorization factorize(const BigInt& n) {
  if (n == 0) throw DomainError("factorize: 0 has no factorization");
  BigInt mag = abs(n);
  std::vector<BigInt> big_primes;
  std::vector<std::uint64_t> primes;
  for (std::uint32_t q : small_prime_sieve().primes()) {
    if (q > kTrialBound || mpz_fits_ulong_p(mag.get_mpz_t())) break;
    while (mpz_divisible_ui_p(mag.get_mpz_t(), q)) {
      primes.push_back(q);
      mpz_divexact_ui(mag.get_mpz_t(), mag.get_mpz_t(), q);
    }
  }
  factor_big(mag, big_primes);
  for (const auto& q : big_primes) {
    if (!mpz_fits_ulong_p(q.get_mpz_t())) {
      throw ResourceLimitError("factorize: prime factor exceeds 64 bits: " + q.get_str());
    }
    primes.push_back(q.get_ui());
  }
  return collect(primes, sgn(n) < 0 ? -1 : 1);
}

namespace {
void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("nu: " + std::to_string(p) + " is not prime");
}
}  // namespace

ExtendedNat nu_u64(std::uint64_t p, std::uint64_t m) {
  require_prime(p);
  if (m == 0) return ExtendedNat::infinity();
  std::uint64_t count = 0;
  while (m % p == 0) {
    m /= p;
    ++count;
  }
  return count;
}

ExtendedNat nu(std::uint64_t p, std::int64_t m) {
  return nu_u64(p, m < 0 ? std::uint64_t(-(m + 1)) + 1 : std::uint64_t(m));
}

ExtendedNat nu(std::uint64_t p, const BigInt& m) {
  require_prime(p);
  if (m == 0) return ExtendedNat::infinity();
  if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) return 0;
  BigInt rest;
  return static_cast<std::uint64_t>(
      mpz_remove(rest.get_mpz_t(), m.get_mpz_t(), to_bigint(p).get_mpz_t()));
}

Progression decompose_progression(std::uint64_t A, std::uint64_t B) {
  if (A == 0 || B == 0) throw DomainError("decompose_progression: A and B must be >= 1");
  Progression pr;
  pr.A = A;
  pr.B = B;
  pr.G = std::gcd(A, B);
  pr.A_prime = A / pr.G;
  pr.B_prime = B / pr.G;
  pr.G_factors = factorize_u64(pr.G);
  pr.A_prime_factors = factorize_u64(pr.A_prime);
  pr.G_prime = 1;
  for (const auto& pe : pr.G_factors.factors) {
    if (pr.A_prime % pe.prime == 0) {
      pr.G_prime_factors.factors.push_back(pe);
      for (std::uint32_t i = 0; i < pe.exponent; ++i) pr.G_prime *= pe.prime;
    }
  }
  return pr;
}

std::uint64_t coprime_part(std::uint64_t n, std::span<const std::uint64_t> c_primes) {
  if (n == 0) throw DomainError("coprime_part: n must be >= 1");
  for (std::uint64_t q : c_primes) {
    while (n % q == 0) n /= q;
  }
  return n;
}

std::uint64_t coprime_part(std::uint64_t n, std::uint64_t C) {
  if (n == 0 || C == 0) throw DomainError("coprime_part: n and C must be >= 1");
  std::vector<std::uint64_t> primes;
  for (const auto& pe : factorize_u64(C).factors) primes.push_back(pe.prime);
  return coprime_part(n, primes);
}

int kronecker(std::int64_t a, std::uint64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  // Strip factors of 2 from n using (a/2).
  int twos = std::countr_zero(n);
  n >>= twos;
  if (twos > 0) {
    if (a % 2 == 0) return 0;
    std::int64_t r = ((a % 8) + 8) % 8;
    if ((twos & 1) && (r == 3 || r == 5)) result = -result;
  }
  // n odd now: Jacobi symbol.
  std::uint64_t aa = static_cast<std::uint64_t>(((a % std::int64_t(n)) + std::int64_t(n)) % std::int64_t(n));
  if (n == 1) return result;
  std::uint64_t nn = n;
  while (aa != 0) {
    int t = std::countr_zero(aa);
    aa >>= t;
    if ((t & 1) && (nn % 8 == 3 || nn % 8 == 5)) result = -result;
    if (aa % 4 == 3 && nn % 4 == 3) result = -result;
    std::swap(aa, nn);
    aa %= nn;
  }
  return nn == 1 ? result : 0;
}

QuadraticClass quadratic_class(std::uint64_t B_prime, std::uint64_t A_prime) {
  if (A_prime == 0 || B_prime == 0) throw DomainError("quadratic_class: arguments must be >= 1");
  if (std::gcd(A_prime, B_prime) != 1) {
    throw DomainError("quadratic_class: gcd(A', B') must be 1");
  }
  QuadraticClass qc;
  qc.kronecker = kronecker(static_cast<std::int64_t>(B_prime), A_prime);
  const std::uint64_t target = B_prime % A_prime;
  for (std::uint64_t x = 0; x < A_prime; ++x) {
    const std::uint64_t sq = mul_mod(x, x, A_prime);
    if (!qc.square_root && sq == target) qc.square_root = x;
    if (!qc.twice_square_root && mul_mod(2, sq, A_prime) == target) qc.twice_square_root = x;
    if (qc.square_root && qc.twice_square_root) break;
  }
  qc.is_square_mod = qc.square_root.has_value();
  qc.is_twice_square_mod = qc.twice_square_root.has_value();
  return qc;
}

PrimeSearch primes_in_progression(std::uint64_t A, std::uint64_t B, std::uint64_t exclude,
                                  std::size_t budget, std::uint64_t candidate_bound,
                                  std::uint64_t min_value) {
  if (A == 0 || B == 0 || exclude == 0) {
    throw DomainError("primes_in_progression: A, B and exclude must be >= 1");
  }
  if (std::gcd(A, B) != 1) throw DomainError("primes_in_progression: gcd(A, B) must be 1");
  PrimeSearch out;
  out.candidate_bound = candidate_bound;
  std::uint64_t start = B % A;
  if (start < min_value) start += (min_value - start + A - 1) / A * A;
  for (std::uint64_t q = start; q <= candidate_bound && out.primes.size() < budget; q += A) {
    if (q >= 2 && exclude % q != 0 && is_prime(q)) out.primes.push_back(q);
    if (candidate_bound - q < A) break;
  }
  out.horizon_exhausted = out.primes.size() < budget;
  return out;
}

}  // namespace ramcong
