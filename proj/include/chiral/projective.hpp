#pragma once

// PGL(2,q) elements as canonical 2x2 matrices modulo scalars, and their action
// on the projective line PG(1,q).

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "chiral/error.hpp"
#include "chiral/finite_field.hpp"

namespace chiral {

/// Matrix [[a,b],[c,d]] up to scalars, normalized so that the first nonzero
/// entry in the order a, b, c, d equals 1.
template <class F>
class ProjElement {
 public:
  using Elem = typename F::Elem;

  ProjElement() = default;

  /// Canonicalizes; throws PreconditionFailed on a singular matrix.
  ProjElement(const F& f, Elem a, Elem b, Elem c, Elem d) : f_(&f), m_{a, b, c, d} {
    if (f.is_zero(f.sub(f.mul(a, d), f.mul(b, c)))) throw Error(ErrorKind::PreconditionFailed, "singular matrix");
    canonicalize();
  }

  static ProjElement identity(const F& f) { return ProjElement(f, f.one(), f.zero(), f.zero(), f.one()); }

  const F& field() const { return *f_; }
  const Elem& a() const { return m_[0]; }
  const Elem& b() const { return m_[1]; }
  const Elem& c() const { return m_[2]; }
  const Elem& d() const { return m_[3]; }
  const std::array<Elem, 4>& entries() const { return m_; }

  Elem trace() const { return f_->add(m_[0], m_[3]); }
  Elem det() const { return f_->sub(f_->mul(m_[0], m_[3]), f_->mul(m_[1], m_[2])); }

  bool is_identity() const {
    return f_->is_zero(m_[1]) && f_->is_zero(m_[2]) && f_->is_one(m_[0]) && f_->is_one(m_[3]);
  }

  friend bool operator==(const ProjElement& x, const ProjElement& y) { return x.m_ == y.m_; }

  /// Total order on canonical forms by entry codes.
  friend bool operator<(const ProjElement& x, const ProjElement& y) {
    for (int i = 0; i < 4; ++i) {
      auto cx = x.f_->code(x.m_[i]), cy = y.f_->code(y.m_[i]);
      if (cx != cy) return cx < cy;
    }
    return false;
  }

  std::size_t hash() const {
    std::size_t h = 0;
    for (const auto& e : m_) h = h * 1000003u ^ f_->hash(e);
    return h;
  }

  /// Entries packed into 64 bits; valid while q <= 2^16.
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (const auto& e : m_) k = (k << 16) | static_cast<std::uint64_t>(f_->code(e));
    return k;
  }

  static ProjElement from_raw(const F& f, const std::array<Elem, 4>& m) {
    ProjElement g;
    g.f_ = &f;
    g.m_ = m;
    return g;
  }

 private:
  void canonicalize() {
    const F& f = *f_;
    const Elem& lead = !f.is_zero(m_[0]) ? m_[0] : m_[1];
    if (f.is_one(lead)) return;
    Elem s = f.inv(lead);
    for (auto& e : m_) e = f.mul(e, s);
  }

  const F* f_ = nullptr;
  std::array<Elem, 4> m_{};
};

template <class F>
struct ProjHash {
  std::size_t operator()(const ProjElement<F>& g) const { return g.hash(); }
};

template <class F>
void require_same_field(const ProjElement<F>& g, const ProjElement<F>& h) {
  if (&g.field() != &h.field()) throw Error(ErrorKind::ContextMismatch, "elements over different fields");
}

template <class F>
ProjElement<F> compose(const ProjElement<F>& g, const ProjElement<F>& h) {
  require_same_field(g, h);
  const F& f = g.field();
  auto mm = [&](const auto& x, const auto& y, const auto& z, const auto& w) { return f.add(f.mul(x, y), f.mul(z, w)); };
  return ProjElement<F>(f, mm(g.a(), h.a(), g.b(), h.c()), mm(g.a(), h.b(), g.b(), h.d()),
                        mm(g.c(), h.a(), g.d(), h.c()), mm(g.c(), h.b(), g.d(), h.d()));
}

template <class F>
ProjElement<F> inverse(const ProjElement<F>& g) {
  const F& f = g.field();
  return ProjElement<F>(f, g.d(), f.neg(g.b()), f.neg(g.c()), g.a());
}

template <class F>
ProjElement<F> power(const ProjElement<F>& g, long long n) {
  ProjElement<F> base = n < 0 ? inverse(g) : g;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  ProjElement<F> r = ProjElement<F>::identity(g.field());
  while (e > 0) {
    if (e & 1) r = compose(r, base);
    base = compose(base, base);
    e >>= 1;
  }
  return r;
}

/// h^-1 g h.
template <class F>
ProjElement<F> conjugate(const ProjElement<F>& g, const ProjElement<F>& h) {
  return compose(compose(inverse(h), g), h);
}

template <class F>
ProjElement<F> diag(const F& f, const typename F::Elem& x, const typename F::Elem& y) {
  return ProjElement<F>(f, x, f.zero(), f.zero(), y);
}

/// tr(M)^2 / det(M); a conjugation and scalar invariant.
template <class F>
typename F::Elem trace_invariant(const ProjElement<F>& g) {
  const F& f = g.field();
  auto t = g.trace();
  return f.div(f.mul(t, t), g.det());
}

namespace detail {

/// Lucas sequence V_n(s) with Q = 1: V_0 = 2, V_1 = s, V_n = s V_{n-1} - V_{n-2}.
template <class F>
typename F::Elem lucas_v(const F& f, const typename F::Elem& s, u128 n) {
  auto two = f.scalar(2);
  auto vk = two, vk1 = s;  // (V_k, V_{k+1}), k = 0
  int top = 127;
  while (top >= 0 && ((n >> top) & 1) == 0) --top;
  for (int i = top; i >= 0; --i) {
    if ((n >> i) & 1) {
      vk = f.sub(f.mul(vk, vk1), s);
      vk1 = f.sub(f.mul(vk1, vk1), two);
    } else {
      vk1 = f.sub(f.mul(vk, vk1), s);
      vk = f.sub(f.mul(vk, vk), two);
    }
  }
  return vk;
}

}  // namespace detail

/// Least m >= 1 with g^m scalar, from the eigenvalue ratio mu: mu + 1/mu =
/// tr^2/det - 2, and mu^n = 1 iff V_n(mu + 1/mu) = 2.
template <class F>
u128 proj_order(const ProjElement<F>& g) {
  const F& f = g.field();
  if (g.is_identity()) return 1;
  auto beta = trace_invariant(g);
  if (beta == f.scalar(4)) return f.p();
  auto s = f.sub(beta, f.scalar(2));
  auto two = f.scalar(2);
  const u128 q = f.q();
  if (detail::lucas_v(f, s, q - 1) == two) {
    return order_from_factorization(q - 1, f.factor_q_minus_1(),
                                    [&](u128 e) { return detail::lucas_v(f, s, e) == two; });
  }
  return order_from_factorization(q + 1, f.factor_q_plus_1(),
                                  [&](u128 e) { return detail::lucas_v(f, s, e) == two; });
}

/// Order by repeated multiplication; used to cross-check proj_order.
template <class F>
u128 proj_order_naive(const ProjElement<F>& g, u128 cap) {
  auto x = g;
  for (u128 m = 1; m <= cap; ++m) {
    if (x.is_identity()) return m;
    x = compose(x, g);
  }
  return 0;
}

template <class F>
bool is_involution(const ProjElement<F>& g) {
  if (g.is_identity()) return false;
  if (g.field().p() == 2) return compose(g, g).is_identity();
  return g.field().is_zero(g.trace());
}

template <class F>
bool in_psl(const ProjElement<F>& g) {
  return is_square(g.field(), g.det());
}

/// Point of PG(1,q): either infinity or an affine coordinate.
template <class F>
struct ProjPoint {
  bool infinite = true;
  typename F::Elem x{};

  static ProjPoint infinity() { return ProjPoint{}; }
  static ProjPoint affine(typename F::Elem v) { return ProjPoint{false, std::move(v)}; }

  friend bool operator==(const ProjPoint& u, const ProjPoint& v) {
    return u.infinite == v.infinite && (u.infinite || u.x == v.x);
  }
};

/// z -> (a z + b) / (c z + d).
template <class F>
ProjPoint<F> apply(const ProjElement<F>& g, const ProjPoint<F>& z) {
  const F& f = g.field();
  if (z.infinite) {
    if (f.is_zero(g.c())) return ProjPoint<F>::infinity();
    return ProjPoint<F>::affine(f.div(g.a(), g.c()));
  }
  auto den = f.add(f.mul(g.c(), z.x), g.d());
  auto num = f.add(f.mul(g.a(), z.x), g.b());
  if (f.is_zero(den)) return ProjPoint<F>::infinity();
  return ProjPoint<F>::affine(f.div(num, den));
}

/// Index of a point in 0..q: affine codes first, infinity last.
template <class F>
u64 point_index(const F& f, const ProjPoint<F>& z) {
  return z.infinite ? static_cast<u64>(f.q()) : static_cast<u64>(f.code(z.x));
}

template <class F>
ProjPoint<F> point_from_index(const F& f, u64 i) {
  if (i == static_cast<u64>(f.q())) return ProjPoint<F>::infinity();
  return ProjPoint<F>::affine(f.from_code(i));
}

template <class F>
std::vector<ProjPoint<F>> fixed_points(const ProjElement<F>& g) {
  if (g.is_identity()) throw Error(ErrorKind::IdentityElement, "identity fixes every point");
  const F& f = g.field();
  std::vector<ProjPoint<F>> out;
  // Affine fixed points solve c z^2 + (d - a) z - b = 0.
  auto A = g.c(), B = f.sub(g.d(), g.a()), C = f.neg(g.b());
  if (f.is_zero(A)) {
    out.push_back(ProjPoint<F>::infinity());
    if (!f.is_zero(B)) out.push_back(ProjPoint<F>::affine(f.div(f.neg(C), B)));
    return out;
  }
  if (f.p() == 2) {
    for (u128 v = 0; v < f.q(); ++v) {
      auto z = f.from_code(v);
      if (f.is_zero(f.add(f.add(f.mul(A, f.mul(z, z)), f.mul(B, z)), C))) out.push_back(ProjPoint<F>::affine(z));
    }
    return out;
  }
  auto disc = f.sub(f.mul(B, B), f.mul(f.scalar(4), f.mul(A, C)));
  if (!is_square(f, disc)) return out;
  auto r = sqrt(f, disc);
  auto inv2a = f.inv(f.mul(f.scalar(2), A));
  out.push_back(ProjPoint<F>::affine(f.mul(f.sub(r, B), inv2a)));
  if (!f.is_zero(r)) out.push_back(ProjPoint<F>::affine(f.mul(f.sub(f.neg(r), B), inv2a)));
  return out;
}

/// Entrywise x -> x^(p^r).
template <class F>
ProjElement<F> frobenius(const ProjElement<F>& g, unsigned r) {
  const F& f = g.field();
  return ProjElement<F>(f, f.frobenius(g.a(), r), f.frobenius(g.b(), r), f.frobenius(g.c(), r), f.frobenius(g.d(), r));
}

template <class F>
std::string to_string(const ProjElement<F>& g) {
  const F& f = g.field();
  auto el = [&](const typename F::Elem& e) {
    return f.d() == 1 ? to_string(f, e) : "(" + to_string(f, e) + ")";
  };
  std::ostringstream os;
  os << "[[" << el(g.a()) << "," << el(g.b()) << "],[" << el(g.c()) << "," << el(g.d()) << "]]";
  return os.str();
}

/// Parses the `[[a,b],[c,d]]` form; entries of extension fields are written
/// `(c0,c1,...)` (a bare integer is a prime-field scalar).
template <class F>
ProjElement<F> parse_proj(const F& f, const std::string& text) {
  std::vector<typename F::Elem> entries;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == '[' || text[i] == ']' || text[i] == ',' || text[i] == ' ')) ++i;
  };
  skip();
  while (i < text.size()) {
    if (text[i] == '(') {
      auto close = text.find(')', i);
      if (close == std::string::npos) throw Error(ErrorKind::Parse, "unbalanced parenthesis");
      entries.push_back(f.from_coeffs(parse_u64_list(text.substr(i + 1, close - i - 1))));
      i = close + 1;
    } else {
      std::size_t j = i;
      bool negative = text[j] == '-';
      if (negative) ++j;
      std::size_t k = j;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      if (k == j) throw Error(ErrorKind::Parse, "bad matrix text '" + text + "'");
      long long v = static_cast<long long>(parse_u128(text.substr(j, k - j)) % f.p());
      entries.push_back(f.scalar(negative ? -v : v));
      i = k;
    }
    skip();
  }
  if (entries.size() != 4) throw Error(ErrorKind::Parse, "matrix needs four entries");
  return ProjElement<F>(f, entries[0], entries[1], entries[2], entries[3]);
}

}  // namespace chiral
