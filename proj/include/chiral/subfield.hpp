#pragma once

// Embedding GF(p^e) into GF(p^d) for e | d.
//
// The embedding sends the class of x in the source to a root of the source
// modulus inside the target. Of the e roots we take the lexicographically
// least, so the map is fixed once both field descriptions are fixed.

#include <vector>

#include "chiral/error.hpp"
#include "chiral/finite_field.hpp"

namespace chiral {

namespace detail {

/// Univariate polynomials with coefficients in F, constant term first.
template <class F>
struct PolyOver {
  using E = typename F::Elem;
  using P = std::vector<E>;
  const F& f;

  void trim(P& a) const {
    while (!a.empty() && f.is_zero(a.back())) a.pop_back();
  }

  P rem(P a, const P& b) const {
    trim(a);
    const std::size_t n = b.size() - 1;
    E lead_inv = f.inv(b.back());
    while (a.size() > n) {
      E c = f.mul(a.back(), lead_inv);
      std::size_t shift = a.size() - 1 - n;
      for (std::size_t j = 0; j <= n; ++j) a[shift + j] = f.sub(a[shift + j], f.mul(c, b[j]));
      trim(a);
    }
    return a;
  }

  P mul_mod(const P& a, const P& b, const P& m) const {
    if (a.empty() || b.empty()) return {};
    P r(a.size() + b.size() - 1, f.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    return rem(std::move(r), m);
  }

  P pow_mod(P base, u128 e, const P& m) const {
    P r{f.one()};
    base = rem(std::move(base), m);
    while (e > 0) {
      if (e & 1) r = mul_mod(r, base, m);
      base = mul_mod(base, base, m);
      e >>= 1;
    }
    return r;
  }

  P gcd(P a, P b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      P r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.empty()) {
      E inv = f.inv(a.back());
      for (auto& c : a) c = f.mul(c, inv);
    }
    return a;
  }

  P div_exact(P a, const P& b) const {
    trim(a);
    const std::size_t n = b.size() - 1;
    if (a.size() < b.size()) return {};
    P quot(a.size() - n, f.zero());
    E lead_inv = f.inv(b.back());
    while (a.size() > n) {
      E c = f.mul(a.back(), lead_inv);
      std::size_t shift = a.size() - 1 - n;
      quot[shift] = c;
      for (std::size_t j = 0; j <= n; ++j) a[shift + j] = f.sub(a[shift + j], f.mul(c, b[j]));
      trim(a);
    }
    return quot;
  }

  /// Splitting polynomial for the random split of a squarefree product of
  /// linear factors: (x + delta)^((q-1)/2) - 1 for odd q, the absolute trace
  /// of delta x for even q.
  P splitter(const E& delta, const P& m) const {
    if (f.p() != 2) {
      P r = pow_mod(P{delta, f.one()}, (f.q() - 1) / 2, m);
      if (r.empty()) r.push_back(f.zero());
      r[0] = f.sub(r[0], f.one());
      trim(r);
      return r;
    }
    P term = rem(P{f.zero(), delta}, m), acc;
    for (unsigned i = 0; i < f.d(); ++i) {
      acc.resize(std::max(acc.size(), term.size()), f.zero());
      for (std::size_t k = 0; k < term.size(); ++k) acc[k] = f.add(acc[k], term[k]);
      term = mul_mod(term, term, m);
    }
    trim(acc);
    return acc;
  }

  /// All roots of m, assumed to split into distinct linear factors over F.
  void roots(const P& m, std::vector<E>& out, u128& counter) const {
    if (m.size() <= 1) return;
    if (m.size() == 2) {
      out.push_back(f.neg(f.div(m[0], m[1])));
      return;
    }
    for (;;) {
      E delta = f.from_code(++counter % f.q());
      P g = gcd(m, splitter(delta, m));
      if (g.size() > 1 && g.size() < m.size()) {
        roots(g, out, counter);
        roots(div_exact(m, g), out, counter);
        return;
      }
    }
  }
};

}  // namespace detail

template <class Src, class Dst>
class SubfieldEmbedding {
 public:
  SubfieldEmbedding(const Src& src, const Dst& dst) : src_(src), dst_(dst) {
    if (src.p() != dst.p() || dst.d() % src.d() != 0)
      throw Error(ErrorKind::NoEmbedding,
                  "GF(" + std::to_string(src.p()) + "^" + std::to_string(src.d()) + ") does not embed in GF(" +
                      std::to_string(dst.p()) + "^" + std::to_string(dst.d()) + ")");
    const auto& mod = src.spec().modulus;
    typename Dst::Elem root = dst.zero();
    if (src.d() > 1) {
      detail::PolyOver<Dst> ring{dst};
      std::vector<typename Dst::Elem> m;
      for (u64 c : mod) m.push_back(dst.scalar(static_cast<long long>(c)));
      std::vector<typename Dst::Elem> rs;
      u128 counter = 0;
      ring.roots(m, rs, counter);
      root = rs.front();
      for (const auto& r : rs)
        if (lex_less(dst, r, root)) root = r;
    }
    powers_.push_back(dst.one());
    for (unsigned i = 1; i < src.d(); ++i) powers_.push_back(dst.mul(powers_.back(), root));
  }

  typename Dst::Elem operator()(const typename Src::Elem& a) const {
    auto c = src_.coeffs(a);
    auto r = dst_.zero();
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0) r = dst_.add(r, dst_.mul(dst_.scalar(static_cast<long long>(c[i])), powers_[i]));
    return r;
  }

  /// Image of the class of x.
  const typename Dst::Elem& image_of_generator() const { return powers_.size() > 1 ? powers_[1] : powers_[0]; }

 private:
  const Src& src_;
  const Dst& dst_;
  std::vector<typename Dst::Elem> powers_;
};

template <class Src, class Dst>
typename Dst::Elem subfield_embed(const Src& src, const typename Src::Elem& a, const Dst& dst) {
  return SubfieldEmbedding<Src, Dst>(src, dst)(a);
}

}  // namespace chiral
