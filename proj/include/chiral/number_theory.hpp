#pragma once

// Integer helpers: 128-bit modular arithmetic, primality, Pollard-Brent
// factorization and cyclotomic splitting of p^d - 1 and p^d + 1.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "chiral/error.hpp"

namespace chiral {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Prime factorization as (prime, exponent) pairs, sorted by prime.
using Factorization = std::vector<std::pair<u128, unsigned>>;

inline std::string to_string_u128(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline u128 parse_u128(const std::string& s) {
  if (s.empty()) throw Error(ErrorKind::Parse, "empty integer");
  u128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw Error(ErrorKind::Parse, "bad integer '" + s + "'");
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  return v;
}

inline u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u128 mulmod(u128 a, u128 b, u128 m) {
  if (m <= (u128{1} << 64)) return (a % m) * (b % m) % m;
  // Shift-and-add for wide moduli; only hit for factor pieces above 2^64.
  a %= m;
  b %= m;
  u128 r = 0;
  while (b > 0) {
    if (b & 1) {
      r = (r >= m - a) ? r - (m - a) : r + a;
    }
    a = (a >= m - a) ? a - (m - a) : a + a;
    b >>= 1;
  }
  return r;
}

inline u128 powmod(u128 base, u128 exp, u128 m) {
  u128 r = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

/// Deterministic for n < 3.3e24 (first 13 prime bases), which covers every
/// value this library factors.
inline bool is_prime(u128 n) {
  if (n < 2) return false;
  static constexpr unsigned kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned p : kSmall) {
    if (n % p == 0) return n == p;
  }
  u128 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned a : kSmall) {
    u128 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

inline u128 pollard_brent(u128 n, u64 seed) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 rng(seed);
  for (;;) {
    u128 y = rng() % n;
    u128 c = rng() % (n - 1) + 1;
    const u128 m = 128;
    u128 g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u128 v) {
      u128 s = mulmod(v, v, n) + c;
      return s >= n ? s - n : s;
    };
    do {
      x = y;
      for (u128 i = 0; i < r; ++i) y = f(y);
      u128 k = 0;
      do {
        ys = y;
        for (u128 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u128(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd_u128(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(u128 n, std::map<u128, unsigned>& out) {
  if (n <= 1) return;
  for (u64 p = 2; p < 1000 && static_cast<u128>(p) * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  // Trial division up to 10^7 only pays off for values with small cofactors.
  if (n < (u128{1} << 62)) {
    u64 small = static_cast<u64>(n);
    for (u64 p = 1001; p <= 10'000'000 && p * p <= small; p += 2) {
      while (small % p == 0) {
        ++out[p];
        small /= p;
      }
    }
    n = small;
    if (n == 1) return;
    if (is_prime(n)) {
      ++out[n];
      return;
    }
  }
  u128 d = pollard_brent(n, static_cast<u64>(n % 1000003) + 7);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

inline Factorization factorize(u128 n) {
  std::map<u128, unsigned> m;
  detail::factor_into(n, m);
  return Factorization(m.begin(), m.end());
}

inline Factorization merge(const Factorization& a, const Factorization& b) {
  std::map<u128, unsigned> m(a.begin(), a.end());
  for (auto [p, e] : b) m[p] += e;
  return Factorization(m.begin(), m.end());
}

inline u128 ipow(u128 base, unsigned exp) {
  u128 r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out;
  for (u64 i = 1; i * i <= n; ++i) {
    if (n % i == 0) {
      out.push_back(i);
      if (i != n / i) out.push_back(n / i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline u64 euler_phi(u64 n) {
  u64 r = n;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  }
  if (n > 1) r -= r / n;
  return r;
}

/// Integer coefficients (constant term first) of the k-th cyclotomic polynomial.
inline std::vector<long long> cyclotomic_poly(unsigned k) {
  // x^k - 1 divided by Phi_m for every proper divisor m of k.
  std::vector<long long> num(k + 1, 0);
  num[0] = -1;
  num[k] = 1;
  for (u64 m : divisors(k)) {
    if (m == k) continue;
    auto den = cyclotomic_poly(static_cast<unsigned>(m));
    std::vector<long long> quot(num.size() - den.size() + 1, 0);
    for (std::size_t i = quot.size(); i-- > 0;) {
      long long c = num[i + den.size() - 1];  // den is monic
      quot[i] = c;
      for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    num = quot;
  }
  return num;
}

/// Phi_k(x) evaluated at x; the result must fit in 128 bits.
inline u128 cyclotomic_value(unsigned k, u128 x) {
  auto c = cyclotomic_poly(k);
  // Horner in signed arithmetic over __int128 is unsafe near the top; evaluate
  // positive and negative parts separately.
  u128 pos = 0, neg = 0, pw = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] > 0) pos += static_cast<u128>(c[i]) * pw;
    if (c[i] < 0) neg += static_cast<u128>(-c[i]) * pw;
    if (i + 1 < c.size()) pw *= x;
  }
  return pos - neg;
}

/// Factorization of p^d - 1 assembled from the cyclotomic pieces Phi_k(p), k | d.
inline Factorization factor_prime_power_minus_one(u64 p, unsigned d) {
  Factorization out;
  for (u64 k : divisors(d)) out = merge(out, factorize(cyclotomic_value(static_cast<unsigned>(k), p)));
  return out;
}

/// Factorization of p^d + 1 = prod Phi_k(p) over k | 2d with k not dividing d.
inline Factorization factor_prime_power_plus_one(u64 p, unsigned d) {
  Factorization out;
  for (u64 k : divisors(2ull * d)) {
    if (d % k == 0) continue;
    out = merge(out, factorize(cyclotomic_value(static_cast<unsigned>(k), p)));
  }
  return out;
}

/// (p, d) with q = p^d, or nullopt if q is not a prime power.
inline std::optional<std::pair<u64, unsigned>> prime_power_decompose(u128 q) {
  if (q < 2) return std::nullopt;
  auto f = factorize(q);
  if (f.size() != 1) return std::nullopt;
  return std::make_pair(static_cast<u64>(f[0].first), f[0].second);
}

inline bool is_prime_power(u64 n) { return n >= 2 && factorize(n).size() == 1; }

/// Order of x in a cyclic group of order n = prod factors, where pow_is_one(e)
/// reports whether x^e is the identity.
template <class PowIsOne>
u128 order_from_factorization(u128 n, const Factorization& factors, PowIsOne&& pow_is_one) {
  u128 m = n;
  for (auto [r, e] : factors) {
    for (unsigned i = 0; i < e; ++i) {
      if (m % r == 0 && pow_is_one(m / r)) {
        m /= r;
      } else {
        break;
      }
    }
  }
  return m;
}

}  // namespace chiral
