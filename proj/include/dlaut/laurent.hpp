#ifndef DLAUT_LAURENT_HPP
#define DLAUT_LAURENT_HPP

#include <cstdint>
#include <map>
#include <utility>

#include <boost/container/small_vector.hpp>

#include "dlaut/scalars.hpp"

namespace dlaut {

/// Exponent of a Laurent monomial x^a, a in Z^n. Ordered lexicographically.
using ExponentVector = boost::container::small_vector<std::int64_t, 4>;

inline ExponentVector zero_exponent(std::size_t n) { return ExponentVector(n, 0); }

inline ExponentVector unit_exponent(std::size_t n, std::size_t i, std::int64_t e = 1) {
  ExponentVector v(n, 0);
  v[i] = e;
  return v;
}

/// Sparse Laurent polynomial in n variables over F_p.
///
/// Terms live in an ordered map keyed by exponent, so iteration order is the
/// canonical (ascending lexicographic) order. Zero coefficients are never stored.
class LaurentPoly {
 public:
  using TermMap = std::map<ExponentVector, std::uint32_t>;

  LaurentPoly(Prime p, std::size_t n) : p_(p), n_(n) {}

  static LaurentPoly constant(Prime p, std::size_t n, std::int64_t c) {
    LaurentPoly f(p, n);
    f.add_term(zero_exponent(n), mod::reduce(c, p));
    return f;
  }

  static LaurentPoly monomial(Prime p, ExponentVector e, std::int64_t c = 1) {
    LaurentPoly f(p, e.size());
    f.add_term(std::move(e), mod::reduce(c, p));
    return f;
  }

  /// x_i^e, with i zero-based.
  static LaurentPoly variable(Prime p, std::size_t n, std::size_t i, std::int64_t e = 1) {
    return monomial(p, unit_exponent(n, i, e));
  }

  Prime prime() const noexcept { return p_; }
  std::size_t nvars() const noexcept { return n_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  std::uint32_t coeff(const ExponentVector& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
  }

  /// Adds c * x^e in place; c is a residue in [0, p).
  void add_term(ExponentVector e, std::uint32_t c) {
    if (e.size() != n_) throw MismatchError("exponent vector has wrong length");
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(std::move(e), c);
    if (fresh) return;
    it->second = mod::add(it->second, c, p_);
    if (it->second == 0) terms_.erase(it);
  }

  LaurentPoly& operator+=(const LaurentPoly& g) {
    check(g);
    for (const auto& [e, c] : g.terms_) add_term(e, c);
    return *this;
  }

  LaurentPoly& operator-=(const LaurentPoly& g) {
    check(g);
    for (const auto& [e, c] : g.terms_) add_term(e, mod::neg(c, p_));
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly f, const LaurentPoly& g) { return f += g; }
  friend LaurentPoly operator-(LaurentPoly f, const LaurentPoly& g) { return f -= g; }

  LaurentPoly operator-() const { return scaled(p_.value() - 1); }

  friend LaurentPoly operator*(const LaurentPoly& f, const LaurentPoly& g) {
    f.check(g);
    LaurentPoly r(f.p_, f.n_);
    for (const auto& [e1, c1] : f.terms_)
      for (const auto& [e2, c2] : g.terms_) r.add_term(add_exponents(e1, e2), mod::mul(c1, c2, f.p_));
    return r;
  }

  LaurentPoly scaled(std::uint32_t c) const {
    LaurentPoly r(p_, n_);
    c %= p_.value();
    if (c == 0) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), e, mod::mul(v, c, p_));
    return r;
  }

  LaurentPoly scaled(Fp c) const { return scaled(c.value()); }

  /// Multiplication by x^shift.
  LaurentPoly shifted(const ExponentVector& shift) const {
    LaurentPoly r(p_, n_);
    for (const auto& [e, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), add_exponents(e, shift), v);
    return r;
  }

  /// f^p. Over F_p this rescales every exponent by p and leaves coefficients alone.
  LaurentPoly frobenius() const {
    LaurentPoly r(p_, n_);
    for (const auto& [e, v] : terms_) {
      ExponentVector pe(e);
      for (auto& a : pe) a *= p_.value();
      r.terms_.emplace_hint(r.terms_.end(), std::move(pe), v);
    }
    return r;
  }

  /// Action of the divided power d_i^[k] (i zero-based): x^b -> C(b_i, k) x^{b - k e_i}.
  LaurentPoly divided_partial(std::size_t i, std::uint64_t k) const {
    if (i >= n_) throw MismatchError("variable index out of range");
    LaurentPoly r(p_, n_);
    for (const auto& [e, v] : terms_) {
      std::uint32_t b = binom_int_mod_p(e[i], k, p_);
      if (b == 0) continue;
      ExponentVector ne(e);
      ne[i] -= static_cast<std::int64_t>(k);
      r.add_term(std::move(ne), mod::mul(v, b, p_));
    }
    return r;
  }

  /// (c, g) with f = c x^g; throws NotAUnit unless f has exactly one term.
  std::pair<Fp, ExponentVector> unit_decompose() const {
    if (terms_.size() != 1)
      throw NotAUnit("Laurent polynomial with " + std::to_string(terms_.size()) +
                     " terms is not a unit");
    const auto& [e, v] = *terms_.begin();
    return {Fp(v, p_), e};
  }

  /// True when every exponent is nonnegative, i.e. f lies in the polynomial ring.
  bool is_polynomial() const noexcept {
    for (const auto& [e, v] : terms_)
      for (auto a : e)
        if (a < 0) return false;
    return true;
  }

  friend bool operator==(const LaurentPoly& f, const LaurentPoly& g) noexcept {
    return f.p_ == g.p_ && f.n_ == g.n_ && f.terms_ == g.terms_;
  }

  static ExponentVector add_exponents(const ExponentVector& a, const ExponentVector& b) {
    ExponentVector r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
  }

  void check(const LaurentPoly& g) const {
    if (!(p_ == g.p_)) throw MismatchError("Laurent polynomials over different primes");
    if (n_ != g.n_) throw MismatchError("Laurent polynomials in different numbers of variables");
  }

 private:
  Prime p_;
  std::size_t n_;
  TermMap terms_;
};

}  // namespace dlaut

#endif  // DLAUT_LAURENT_HPP
