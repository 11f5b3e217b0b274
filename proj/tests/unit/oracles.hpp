#pragma once

// Slow, independent reference implementations. They share nothing with the
// library except the BigInt type.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace oracle {

inline mpz_class divisor_sum(std::uint64_t k, std::uint64_t n) {
  mpz_class s = 0;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), d, k);
    s += t;
  }
  return s;
}

inline std::uint64_t totient(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t i = 1; i <= n; ++i) c += std::gcd(i, n) == 1;
  return c;
}

// nullopt stands for infinity.
inline std::optional<std::uint64_t> nu(std::uint64_t p, mpz_class m) {
  if (m == 0) return std::nullopt;
  std::uint64_t v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
    m /= static_cast<unsigned long>(p);
    ++v;
  }
  return v;
}

// tau(1..N) by multiplying out prod (1 - q^n)^24 one factor at a time.
inline std::vector<mpz_class> tau(std::size_t N) {
  std::vector<mpz_class> c(N + 1, 0);
  c[0] = 1;
  for (std::size_t n = 1; n <= N; ++n) {
    for (int r = 0; r < 24; ++r) {
      for (std::size_t i = N; i >= n; --i) c[i] -= c[i - n];
    }
  }
  std::vector<mpz_class> t(N + 1, 0);
  for (std::size_t i = 1; i <= N; ++i) t[i] = c[i - 1];
  return t;
}

inline bool is_sum_of_two_squares(std::uint64_t n) {
  for (std::uint64_t a = 0; a * a <= n; ++a) {
    const std::uint64_t r = n - a * a;
    std::uint64_t b = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(r)));
    while (b * b > r) --b;
    while ((b + 1) * (b + 1) <= r) ++b;
    if (b * b == r) return true;
  }
  return false;
}

// min over n < horizon of nu_p(f(A n + B)) for f given as a callable.
template <typename F>
std::optional<std::uint64_t> scan(F&& f, std::uint64_t p, std::uint64_t A, std::uint64_t B,
                                  std::uint64_t horizon) {
  std::optional<std::uint64_t> best;
  bool any_finite = false;
  for (std::uint64_t n = 0; n < horizon; ++n) {
    auto v = nu(p, f(A * n + B));
    if (!v) continue;
    if (!any_finite || *v < *best) best = v;
    any_finite = true;
    if (*best == 0) break;
  }
  return best;
}

}  // namespace oracle
