#pragma once

// Exact arithmetic in GF(p^d).
//
// Two backends share one interface so that the group-theoretic code can be
// written once as templates:
//
//   Field       dense coefficient vectors; any q < 2^127 (used for the large
//               fields of the conjecture search).
//   SmallField  elements are integer codes sum c_i p^i with log/antilog
//               tables; q <= 2^20 (used by enumeration and constructions).
//
// Both are built from the same FieldSpec, and code <-> coefficient vector is a
// bijection, so results agree bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "chiral/error.hpp"
#include "chiral/field_spec.hpp"
#include "chiral/number_theory.hpp"

namespace chiral {

namespace detail {

/// Lazily computed factorizations of q - 1 and q + 1, guarded by call_once.
class FactorCache {
 public:
  const Factorization& minus_one(u64 p, unsigned d) const {
    std::call_once(minus_flag_, [&] { minus_ = factor_prime_power_minus_one(p, d); });
    return minus_;
  }
  const Factorization& plus_one(u64 p, unsigned d) const {
    std::call_once(plus_flag_, [&] { plus_ = factor_prime_power_plus_one(p, d); });
    return plus_;
  }

 private:
  mutable std::once_flag minus_flag_, plus_flag_;
  mutable Factorization minus_, plus_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Field: general backend
// ---------------------------------------------------------------------------

class Field {
 public:
  using Elem = std::vector<u64>;

  explicit Field(FieldSpec spec) : spec_(std::move(spec)), q_(spec_.q()) {
    if (spec_.d > kMaxDegree) throw Error(ErrorKind::PreconditionFailed, "degree too large");
    if (spec_.d * std::log2(static_cast<double>(spec_.p)) > 126)
      throw Error(ErrorKind::UnsupportedScale, "q must stay below 2^126");
  }
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  const FieldSpec& spec() const { return spec_; }
  u64 p() const { return spec_.p; }
  unsigned d() const { return spec_.d; }
  u128 q() const { return q_; }

  Elem zero() const { return Elem(spec_.d, 0); }
  Elem one() const { return scalar(1); }
  Elem scalar(long long v) const {
    Elem e(spec_.d, 0);
    long long m = v % static_cast<long long>(spec_.p);
    if (m < 0) m += static_cast<long long>(spec_.p);
    e[0] = static_cast<u64>(m);
    return e;
  }
  /// x, the class of the indeterminate (a generator of the field over GF(p)).
  Elem generator() const {
    if (spec_.d == 1) return scalar(static_cast<long long>((p() - spec_.modulus[0]) % p()));
    Elem e(spec_.d, 0);
    e[1] = 1;
    return e;
  }
  Elem from_coeffs(std::vector<u64> c) const {
    if (c.size() > spec_.d) throw Error(ErrorKind::PreconditionFailed, "too many coefficients");
    c.resize(spec_.d, 0);
    for (auto& v : c) v %= spec_.p;
    return c;
  }
  std::vector<u64> coeffs(const Elem& a) const { return a; }
  /// Integer code sum c_i p^i (enumeration order).
  u128 code(const Elem& a) const {
    u128 v = 0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * spec_.p + a[i];
    return v;
  }
  Elem from_code(u128 v) const {
    Elem e(spec_.d, 0);
    for (unsigned i = 0; i < spec_.d; ++i) {
      e[i] = static_cast<u64>(v % spec_.p);
      v /= spec_.p;
    }
    return e;
  }

  bool is_zero(const Elem& a) const {
    return std::all_of(a.begin(), a.end(), [](u64 c) { return c == 0; });
  }
  bool is_one(const Elem& a) const { return a == one(); }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r(spec_.d);
    for (unsigned i = 0; i < spec_.d; ++i) {
      u64 s = a[i] + b[i];
      r[i] = s >= spec_.p ? s - spec_.p : s;
    }
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r(spec_.d);
    for (unsigned i = 0; i < spec_.d; ++i) r[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + spec_.p - b[i];
    return r;
  }
  Elem neg(const Elem& a) const { return sub(zero(), a); }
  Elem mul(const Elem& a, const Elem& b) const {
    const unsigned d = spec_.d;
    const u64 p = spec_.p;
    std::vector<u64> r(2 * d - 1, 0);
    for (unsigned i = 0; i < d; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < d; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    const auto& m = spec_.modulus;
    for (unsigned i = 2 * d - 1; i-- > d;) {
      u64 c = r[i];
      if (c == 0) continue;
      u64 nc = p - c;
      for (unsigned j = 0; j < d; ++j) r[i - d + j] = (r[i - d + j] + nc * m[j]) % p;
    }
    r.resize(d);
    return r;
  }
  Elem pow(Elem base, u128 e) const {
    Elem r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
  Elem inv(const Elem& a) const {
    if (is_zero(a)) throw Error(ErrorKind::ZeroElement, "inverse of zero");
    return pow(a, q_ - 2);
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  /// x -> x^(p^r).
  Elem frobenius(const Elem& a, unsigned r) const {
    Elem x = a;
    for (unsigned i = 0; i < r % spec_.d; ++i) x = pow(x, spec_.p);
    return x;
  }
  std::size_t hash(const Elem& a) const {
    std::size_t h = 1469598103934665603ull;
    for (u64 c : a) h = (h ^ c) * 1099511628211ull;
    return h;
  }

  const Factorization& factor_q_minus_1() const { return factors_.minus_one(spec_.p, spec_.d); }
  const Factorization& factor_q_plus_1() const { return factors_.plus_one(spec_.p, spec_.d); }

 private:
  FieldSpec spec_;
  u128 q_;
  detail::FactorCache factors_;
};

// ---------------------------------------------------------------------------
// SmallField: table backend
// ---------------------------------------------------------------------------

class SmallField {
 public:
  using Elem = std::uint32_t;
  static constexpr u64 kMaxOrder = u64{1} << 20;

  explicit SmallField(FieldSpec spec) : spec_(std::move(spec)) {
    u128 q = spec_.q();
    if (q > kMaxOrder) throw Error(ErrorKind::UnsupportedScale, "SmallField needs q <= 2^20");
    q_ = static_cast<u64>(q);
    build_tables();
  }
  SmallField(const SmallField&) = delete;
  SmallField& operator=(const SmallField&) = delete;

  const FieldSpec& spec() const { return spec_; }
  u64 p() const { return spec_.p; }
  unsigned d() const { return spec_.d; }
  u128 q() const { return q_; }
  u64 size() const { return q_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem scalar(long long v) const {
    long long m = v % static_cast<long long>(spec_.p);
    if (m < 0) m += static_cast<long long>(spec_.p);
    return static_cast<Elem>(m);
  }
  Elem generator() const { return gen_; }
  Elem from_coeffs(std::vector<u64> c) const {
    if (c.size() > spec_.d) throw Error(ErrorKind::PreconditionFailed, "too many coefficients");
    u64 v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * spec_.p + c[i] % spec_.p;
    return static_cast<Elem>(v);
  }
  std::vector<u64> coeffs(Elem a) const {
    std::vector<u64> c(spec_.d);
    for (unsigned i = 0; i < spec_.d; ++i) {
      c[i] = a % spec_.p;
      a = static_cast<Elem>(a / spec_.p);
    }
    return c;
  }
  u128 code(Elem a) const { return a; }
  Elem from_code(u128 v) const { return static_cast<Elem>(v); }

  bool is_zero(Elem a) const { return a == 0; }
  bool is_one(Elem a) const { return a == 1; }

  Elem add(Elem a, Elem b) const {
    if (spec_.d == 1) {
      u64 s = u64{a} + b;
      return static_cast<Elem>(s >= spec_.p ? s - spec_.p : s);
    }
    if (!add_.empty()) return add_[static_cast<std::size_t>(a) * q_ + b];
    return digit_add(a, b);
  }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const {
    if (a == 0) throw Error(ErrorKind::ZeroElement, "inverse of zero");
    return exp_[(q_ - 1) - log_[a]];
  }
  Elem div(Elem a, Elem b) const {
    if (b == 0) throw Error(ErrorKind::ZeroElement, "division by zero");
    if (a == 0) return 0;
    return exp_[log_[a] + (q_ - 1) - log_[b]];
  }
  Elem pow(Elem a, u128 e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    u64 l = static_cast<u64>((static_cast<u128>(log_[a]) * (e % (q_ - 1))) % (q_ - 1));
    return exp_[l];
  }
  Elem frobenius(Elem a, unsigned r) const {
    for (unsigned i = 0; i < r % spec_.d; ++i) a = frob_[a];
    return a;
  }
  std::size_t hash(Elem a) const { return a; }

  /// Discrete log base the canonical primitive element (a != 0).
  u64 log(Elem a) const { return log_[a]; }
  /// Canonical primitive element raised to e.
  Elem exp(u64 e) const { return exp_[e % (q_ - 1)]; }
  Elem primitive() const { return exp_[1]; }

  const Factorization& factor_q_minus_1() const { return factors_.minus_one(spec_.p, spec_.d); }
  const Factorization& factor_q_plus_1() const { return factors_.plus_one(spec_.p, spec_.d); }

 private:
  Elem digit_add(Elem a, Elem b) const {
    u64 r = 0, scale = 1;
    for (unsigned i = 0; i < spec_.d; ++i) {
      u64 s = a % spec_.p + b % spec_.p;
      if (s >= spec_.p) s -= spec_.p;
      r += s * scale;
      scale *= spec_.p;
      a = static_cast<Elem>(a / spec_.p);
      b = static_cast<Elem>(b / spec_.p);
    }
    return static_cast<Elem>(r);
  }

  void build_tables() {
    const u64 q = q_;
    const u64 p = spec_.p;
    auto to_poly = [&](u64 code) {
      gfp_poly::Poly c(spec_.d);
      for (unsigned i = 0; i < spec_.d; ++i) {
        c[i] = code % p;
        code /= p;
      }
      return c;
    };
    auto from_poly = [&](const gfp_poly::Poly& c) {
      u64 v = 0;
      for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
      return v;
    };
    auto poly_mul = [&](u64 a, u64 b) {
      if (spec_.d == 1) return (a * b) % p;
      return from_poly(gfp_poly::mul_mod(to_poly(a), to_poly(b), spec_.modulus, p));
    };
    auto poly_pow = [&](u64 a, u128 e) {
      u64 r = 1;
      while (e > 0) {
        if (e & 1) r = poly_mul(r, a);
        a = poly_mul(a, a);
        e >>= 1;
      }
      return r;
    };
    gen_ = static_cast<Elem>(spec_.d == 1 ? (p - spec_.modulus[0]) % p : p);

    // Canonical primitive element: least code whose order is q - 1.
    const Factorization& fac = factor_q_minus_1();
    u64 prim = 0;
    for (u64 c = 1; c < q; ++c) {
      bool ok = true;
      for (auto [r, e] : fac) {
        if (poly_pow(c, (q - 1) / static_cast<u64>(r)) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        prim = c;
        break;
      }
    }
    if (q == 2) prim = 1;
    exp_.assign(2 * (q - 1) + 1, 0);
    log_.assign(q, 0);
    u64 x = 1;
    for (u64 i = 0; i < q - 1; ++i) {
      exp_[i] = static_cast<Elem>(x);
      log_[x] = static_cast<std::uint32_t>(i);
      x = poly_mul(x, prim);
    }
    for (u64 i = q - 1; i < exp_.size(); ++i) exp_[i] = exp_[i - (q - 1)];

    neg_.assign(q, 0);
    for (u64 a = 0; a < q; ++a) {
      u64 r = 0, scale = 1, v = a;
      for (unsigned i = 0; i < spec_.d; ++i) {
        u64 c = v % p;
        r += ((p - c) % p) * scale;
        scale *= p;
        v /= p;
      }
      neg_[a] = static_cast<Elem>(r);
    }
    if (spec_.d > 1 && q <= 2048) {
      add_.assign(q * q, 0);
      for (u64 a = 0; a < q; ++a)
        for (u64 b = 0; b < q; ++b) add_[a * q + b] = digit_add(static_cast<Elem>(a), static_cast<Elem>(b));
    }
    frob_.assign(q, 0);
    for (u64 a = 0; a < q; ++a) frob_[a] = static_cast<Elem>(a == 0 ? 0 : exp_[(u64{log_[a]} * p) % (q - 1)]);
  }

  FieldSpec spec_;
  u64 q_ = 0;
  Elem gen_ = 0;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> neg_;
  std::vector<Elem> add_;
  std::vector<Elem> frob_;
  detail::FactorCache factors_;
};

// ---------------------------------------------------------------------------
// Algorithms common to both backends
// ---------------------------------------------------------------------------

/// Order of -g given the order m of g (odd characteristic).
inline u64 negate_order(u64 m) {
  if (m % 2 == 1) return 2 * m;
  if (m % 4 == 0) return m;
  return m / 2;
}

template <class F>
u128 element_order(const F& f, const typename F::Elem& g) {
  if (f.is_zero(g)) throw Error(ErrorKind::ZeroElement, "order of zero");
  return order_from_factorization(f.q() - 1, f.factor_q_minus_1(),
                                  [&](u128 e) { return f.is_one(f.pow(g, e)); });
}

template <class F>
bool is_primitive(const F& f, const typename F::Elem& g) {
  if (f.is_zero(g)) throw Error(ErrorKind::ZeroElement, "primitivity of zero");
  for (auto [r, e] : f.factor_q_minus_1()) {
    if (f.is_one(f.pow(g, (f.q() - 1) / r))) return false;
  }
  return true;
}

template <class F>
bool is_square(const F& f, const typename F::Elem& g) {
  if (f.is_zero(g) || f.p() == 2) return true;
  return f.is_one(f.pow(g, (f.q() - 1) / 2));
}

/// Lexicographic comparison of coefficient vectors, constant term first.
template <class F>
bool lex_less(const F& f, const typename F::Elem& a, const typename F::Elem& b) {
  auto ca = f.coeffs(a), cb = f.coeffs(b);
  return ca < cb;
}

/// Square root; of the two roots the lexicographically smaller is returned.
template <class F>
typename F::Elem sqrt(const F& f, const typename F::Elem& g) {
  using E = typename F::Elem;
  if (f.is_zero(g)) return g;
  if (f.p() == 2) return f.pow(g, f.q() / 2);
  if (!is_square(f, g)) throw Error(ErrorKind::NotASquare, "element is not a square");
  const u128 q = f.q();
  E h;
  if (q % 4 == 3) {
    h = f.pow(g, (q + 1) / 4);
  } else {
    // Tonelli-Shanks.
    u128 Q = q - 1;
    unsigned S = 0;
    while (Q % 2 == 0) {
      Q /= 2;
      ++S;
    }
    E z = f.one();
    for (u128 c = 2;; ++c) {
      z = f.from_code(c);
      if (!is_square(f, z)) break;
    }
    unsigned M = S;
    E c = f.pow(z, Q);
    E t = f.pow(g, Q);
    E R = f.pow(g, (Q + 1) / 2);
    while (!f.is_one(t)) {
      unsigned i = 0;
      E t2 = t;
      while (!f.is_one(t2)) {
        t2 = f.mul(t2, t2);
        ++i;
      }
      E b = c;
      for (unsigned k = 0; k + i + 1 < M; ++k) b = f.mul(b, b);
      M = i;
      c = f.mul(b, b);
      t = f.mul(t, c);
      R = f.mul(R, b);
    }
    h = R;
  }
  E other = f.neg(h);
  return lex_less(f, other, h) ? other : h;
}

/// Least element (in code order) that generates the multiplicative group.
template <class F>
typename F::Elem primitive_element(const F& f) {
  if (f.q() == 2) return f.one();
  for (u128 c = 1;; ++c) {
    auto e = f.from_code(c);
    if (is_primitive(f, e)) return e;
  }
}

template <class F>
std::string to_string(const F& f, const typename F::Elem& a) {
  auto c = f.coeffs(a);
  if (f.d() == 1) return std::to_string(c[0]);
  std::ostringstream os;
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  return os.str();
}

/// Degree over GF(p) of the smallest subfield containing a.
template <class F>
unsigned element_degree(const F& f, const typename F::Elem& a) {
  for (u64 e : divisors(f.d())) {
    if (f.frobenius(a, static_cast<unsigned>(e)) == a) return static_cast<unsigned>(e);
  }
  return f.d();
}

}  // namespace chiral
