#ifndef DLAUT_SCALARS_HPP
#define DLAUT_SCALARS_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "dlaut/errors.hpp"

namespace dlaut {

/// A prime 2 <= p < 2^16; residues multiply in 64-bit words without overflow.
class Prime {
 public:
  explicit Prime(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
    if (p < 2 || p >= (1u << 16) || !is_prime(p))
      throw std::invalid_argument("not a prime in [2, 65536): " + std::to_string(p));
  }

  std::uint32_t value() const noexcept { return p_; }
  operator std::uint32_t() const noexcept { return p_; }

  friend bool operator==(Prime a, Prime b) noexcept { return a.p_ == b.p_; }

  static bool is_prime(std::uint64_t m) noexcept {
    if (m < 2) return false;
    for (std::uint64_t d = 2; d * d <= m; ++d)
      if (m % d == 0) return false;
    return true;
  }

 private:
  std::uint32_t p_;
};

namespace mod {

inline std::uint32_t add(std::uint32_t a, std::uint32_t b, std::uint32_t p) noexcept {
  std::uint32_t r = a + b;
  return r >= p ? r - p : r;
}

inline std::uint32_t sub(std::uint32_t a, std::uint32_t b, std::uint32_t p) noexcept {
  return a >= b ? a - b : a + p - b;
}

inline std::uint32_t mul(std::uint32_t a, std::uint32_t b, std::uint32_t p) noexcept {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

inline std::uint32_t neg(std::uint32_t a, std::uint32_t p) noexcept { return a == 0 ? 0 : p - a; }

inline std::uint32_t pow(std::uint32_t a, std::uint64_t e, std::uint32_t p) noexcept {
  std::uint32_t r = 1 % p;
  while (e) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

/// Inverse by Fermat; a must be nonzero mod p.
inline std::uint32_t inv(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw std::domain_error("division by zero in F_p");
  return pow(a, p - 2, p);
}

/// Reduction of a signed integer into [0, p).
inline std::uint32_t reduce(std::int64_t m, std::uint32_t p) noexcept {
  std::int64_t r = m % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

/// x^e for a possibly negative exponent; x must be nonzero when e < 0.
inline std::uint32_t pow_signed(std::uint32_t a, std::int64_t e, std::uint32_t p) {
  if (e >= 0) return pow(a, static_cast<std::uint64_t>(e), p);
  return pow(inv(a, p), static_cast<std::uint64_t>(-(e + 1)) + 1, p);
}

}  // namespace mod

/// An element of F_p carrying its prime.
class Fp {
 public:
  Fp(std::int64_t v, Prime p) : v_(mod::reduce(v, p)), p_(p) {}

  std::uint32_t value() const noexcept { return v_; }
  Prime prime() const noexcept { return p_; }
  bool is_zero() const noexcept { return v_ == 0; }

  Fp inverse() const { return {mod::inv(v_, p_), p_}; }

  friend Fp operator+(Fp a, Fp b) { check(a, b); return {mod::add(a.v_, b.v_, a.p_), a.p_}; }
  friend Fp operator-(Fp a, Fp b) { check(a, b); return {mod::sub(a.v_, b.v_, a.p_), a.p_}; }
  friend Fp operator*(Fp a, Fp b) { check(a, b); return {mod::mul(a.v_, b.v_, a.p_), a.p_}; }
  Fp operator-() const { return {mod::neg(v_, p_), p_}; }

  friend bool operator==(Fp a, Fp b) noexcept { return a.v_ == b.v_ && a.p_ == b.p_; }
  friend std::ostream& operator<<(std::ostream& os, Fp a) { return os << a.v_; }

 private:
  static void check(Fp a, Fp b) {
    if (!(a.p_ == b.p_)) throw MismatchError("F_p operands over different primes");
  }

  std::uint32_t v_;
  Prime p_;
};

namespace detail {

struct FactorialTable {
  std::vector<std::uint32_t> fact;
  std::vector<std::uint32_t> inv_fact;
};

// Per-thread cache; tables are at most 2 * 2^16 words.
inline const FactorialTable& factorials(std::uint32_t p) {
  thread_local std::unordered_map<std::uint32_t, FactorialTable> cache;
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  FactorialTable t;
  t.fact.resize(p);
  t.inv_fact.resize(p);
  t.fact[0] = 1;
  for (std::uint32_t i = 1; i < p; ++i) t.fact[i] = mod::mul(t.fact[i - 1], i, p);
  t.inv_fact[p - 1] = mod::inv(t.fact[p - 1], p);
  for (std::uint32_t i = p - 1; i > 0; --i) t.inv_fact[i - 1] = mod::mul(t.inv_fact[i], i, p);
  return cache.emplace(p, std::move(t)).first->second;
}

/// C(a, b) mod p for digits 0 <= a, b < p.
inline std::uint32_t small_binom(std::uint32_t a, std::uint32_t b, std::uint32_t p,
                                 const FactorialTable& t) noexcept {
  if (b > a) return 0;
  return mod::mul(t.fact[a], mod::mul(t.inv_fact[b], t.inv_fact[a - b], p), p);
}

/// Splits off the lowest p-adic digit of m (floor division, so negatives work).
inline std::uint32_t pop_digit(std::int64_t& m, std::uint32_t p) noexcept {
  std::int64_t q = m / static_cast<std::int64_t>(p);
  std::int64_t r = m % static_cast<std::int64_t>(p);
  if (r < 0) {
    r += p;
    q -= 1;
  }
  m = q;
  return static_cast<std::uint32_t>(r);
}

}  // namespace detail

/// Number of base-p digits of k (0 for k = 0).
inline std::size_t padic_length(std::uint64_t k, std::uint32_t p) noexcept {
  std::size_t len = 0;
  while (k) {
    k /= p;
    ++len;
  }
  return len;
}

/// C(m, k) mod p by Lucas' theorem.
inline std::uint32_t binom_nat_mod_p(std::uint64_t m, std::uint64_t k, Prime prime) {
  const std::uint32_t p = prime;
  const auto& t = detail::factorials(p);
  std::uint32_t r = 1;
  while (k) {
    std::uint32_t r_digit = detail::small_binom(static_cast<std::uint32_t>(m % p),
                                        static_cast<std::uint32_t>(k % p), p, t);
    if (r_digit == 0) return 0;
    r = mod::mul(r, r_digit, p);
    m /= p;
    k /= p;
  }
  return r;
}

/// C(m, k) mod p for any integer m: Lucas applied to the p-adic digits of m.
inline std::uint32_t binom_int_mod_p(std::int64_t m, std::uint64_t k, Prime prime) {
  const std::uint32_t p = prime;
  const auto& t = detail::factorials(p);
  std::uint32_t r = 1;
  while (k) {
    std::uint32_t md = detail::pop_digit(m, p);
    std::uint32_t r_digit = detail::small_binom(md, static_cast<std::uint32_t>(k % p), p, t);
    if (r_digit == 0) return 0;
    r = mod::mul(r, r_digit, p);
    k /= p;
  }
  return r;
}

/// All j in [0, bound] with C(m, j) != 0 mod p, paired with that residue.
/// By Lucas these are exactly the j whose digits are dominated by those of m.
inline std::vector<std::pair<std::uint64_t, std::uint32_t>> lucas_support(std::int64_t m,
                                                                         std::uint64_t bound,
                                                                         Prime prime) {
  const std::uint32_t p = prime;
  const auto& t = detail::factorials(p);
  std::size_t len = padic_length(bound, p);
  std::vector<std::uint32_t> mdig(len);
  for (auto& d : mdig) d = detail::pop_digit(m, p);

  std::vector<std::pair<std::uint64_t, std::uint32_t>> out{{0, 1}};
  std::uint64_t place = 1;
  for (std::size_t pos = 0; pos < len; ++pos, place *= p) {
    std::size_t cur = out.size();
    for (std::uint32_t d = 1; d <= mdig[pos]; ++d) {
      std::uint32_t c = detail::small_binom(mdig[pos], d, p, t);
      for (std::size_t q = 0; q < cur; ++q) {
        std::uint64_t j = out[q].first + d * place;
        if (j > bound) continue;
        out.emplace_back(j, mod::mul(out[q].second, c, p));
      }
    }
  }
  return out;
}

/// A p-adic integer known modulo p^K, stored as K little-endian base-p digits.
class PadicInt {
 public:
  PadicInt(Prime p, std::size_t precision) : p_(p), digits_(precision, 0) {
    if (precision == 0) throw std::invalid_argument("p-adic precision must be >= 1");
  }

  PadicInt(Prime p, std::vector<std::uint32_t> digits) : p_(p), digits_(std::move(digits)) {
    if (digits_.empty()) throw std::invalid_argument("p-adic precision must be >= 1");
    for (auto d : digits_)
      if (d >= p_.value()) throw std::invalid_argument("p-adic digit out of range");
  }

  /// m mod p^K; negatives map to their complement representation.
  static PadicInt from_int(std::int64_t m, Prime p, std::size_t precision) {
    PadicInt s(p, precision);
    for (auto& d : s.digits_) d = detail::pop_digit(m, p);
    return s;
  }

  Prime prime() const noexcept { return p_; }
  std::size_t precision() const noexcept { return digits_.size(); }
  const std::vector<std::uint32_t>& digits() const noexcept { return digits_; }
  std::uint32_t digit(std::size_t k) const { return digits_.at(k); }

  bool is_zero() const noexcept {
    for (auto d : digits_)
      if (d) return false;
    return true;
  }

  friend bool operator==(const PadicInt& a, const PadicInt& b) noexcept {
    return a.p_ == b.p_ && a.digits_ == b.digits_;
  }

  friend PadicInt operator+(const PadicInt& a, const PadicInt& b) {
    check(a, b);
    const std::uint32_t p = a.p_;
    PadicInt r(a.p_, a.precision());
    std::uint32_t carry = 0;
    for (std::size_t k = 0; k < a.precision(); ++k) {
      std::uint32_t v = a.digits_[k] + b.digits_[k] + carry;
      carry = v >= p;
      r.digits_[k] = carry ? v - p : v;
    }
    return r;
  }

  PadicInt operator-() const {
    // -s = (~s) + 1 where ~ complements every digit against p - 1.
    PadicInt c(p_, precision());
    for (std::size_t k = 0; k < precision(); ++k) c.digits_[k] = p_.value() - 1 - digits_[k];
    return c + from_int(1, p_, precision());
  }

  friend PadicInt operator-(const PadicInt& a, const PadicInt& b) { return a + (-b); }

  /// Truncated schoolbook product. Digit products are < 2^32, so a column sum
  /// overflows 64 bits only beyond 2^32 digits.
  friend PadicInt operator*(const PadicInt& a, const PadicInt& b) {
    check(a, b);
    const std::uint64_t p = a.p_;
    const std::size_t K = a.precision();
    std::vector<std::uint64_t> acc(K, 0);
    for (std::size_t i = 0; i < K; ++i) {
      if (!a.digits_[i]) continue;
      for (std::size_t j = 0; i + j < K; ++j) acc[i + j] += std::uint64_t{a.digits_[i]} * b.digits_[j];
    }
    PadicInt r(a.p_, K);
    std::uint64_t carry = 0;
    for (std::size_t k = 0; k < K; ++k) {
      std::uint64_t v = acc[k] + carry;
      r.digits_[k] = static_cast<std::uint32_t>(v % p);
      carry = v / p;
    }
    return r;
  }

  /// Multiplication by an ordinary integer.
  PadicInt scaled(std::int64_t m) const { return from_int(m, p_, precision()) * *this; }

  /// Same residue at a different precision; raising precision pads with zero digits,
  /// which is only meaningful when the caller knows the value is a small nonnegative integer.
  PadicInt with_precision(std::size_t precision) const {
    std::vector<std::uint32_t> d(digits_);
    d.resize(precision, 0);
    return PadicInt(p_, std::move(d));
  }

  friend std::ostream& operator<<(std::ostream& os, const PadicInt& s) {
    os << '(';
    for (std::size_t k = 0; k < s.digits_.size(); ++k) os << (k ? "," : "") << s.digits_[k];
    return os << ')';
  }

 private:
  static void check(const PadicInt& a, const PadicInt& b) {
    if (!(a.p_ == b.p_)) throw MismatchError("p-adic operands over different primes");
    if (a.precision() != b.precision())
      throw InsufficientPrecision("p-adic precision mismatch: " + std::to_string(a.precision()) +
                                  " vs " + std::to_string(b.precision()));
  }

  Prime p_;
  std::vector<std::uint32_t> digits_;
};

/// C(s, k) mod p for a p-adic upper argument, via Lucas on the digits of s.
inline std::uint32_t binom_padic(const PadicInt& s, std::uint64_t k) {
  const std::uint32_t p = s.prime();
  const auto& t = detail::factorials(p);
  std::uint32_t r = 1;
  for (std::size_t pos = 0; k; ++pos, k /= p) {
    auto kd = static_cast<std::uint32_t>(k % p);
    if (kd == 0) continue;
    if (pos >= s.precision())
      throw InsufficientPrecision("binomial needs p-adic digit " + std::to_string(pos) +
                                  " but precision is " + std::to_string(s.precision()));
    r = mod::mul(r, detail::small_binom(s.digit(pos), kd, p, t), p);
    if (r == 0) return 0;
  }
  return r;
}

}  // namespace dlaut

#endif  // DLAUT_SCALARS_HPP
