#ifndef DLAUT_DIFFOP_HPP
#define DLAUT_DIFFOP_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "dlaut/laurent.hpp"

namespace dlaut {

/// Multi-index b of a divided power d^[b] = prod_i d_i^{b_i} / b_i!. Entries are >= 0.
using DividedIndex = ExponentVector;

inline std::uint64_t total_degree(const DividedIndex& b) noexcept {
  std::uint64_t s = 0;
  for (auto v : b) s += static_cast<std::uint64_t>(v);
  return s;
}

/// An element of D(L_n) in normal form: sum over b of f_b * d^[b], with the
/// Laurent coefficients written to the left of the divided powers.
class DiffOp {
 public:
  using PartMap = std::map<DividedIndex, LaurentPoly>;

  DiffOp(Prime p, std::size_t n) : p_(p), n_(n) {}

  static DiffOp identity(Prime p, std::size_t n) { return from_poly(LaurentPoly::constant(p, n, 1)); }

  static DiffOp from_poly(const LaurentPoly& f) {
    DiffOp d(f.prime(), f.nvars());
    d.add_part(zero_exponent(f.nvars()), f);
    return d;
  }

  /// d_i^[k], i zero-based.
  static DiffOp divided(Prime p, std::size_t n, std::size_t i, std::uint64_t k) {
    DiffOp d(p, n);
    d.add_term(zero_exponent(n), unit_exponent(n, i, static_cast<std::int64_t>(k)), 1);
    return d;
  }

  static DiffOp term(Prime p, ExponentVector x, DividedIndex b, std::int64_t c = 1) {
    DiffOp d(p, x.size());
    d.add_term(std::move(x), std::move(b), mod::reduce(c, p));
    return d;
  }

  Prime prime() const noexcept { return p_; }
  std::size_t nvars() const noexcept { return n_; }
  const PartMap& parts() const noexcept { return parts_; }
  bool is_zero() const noexcept { return parts_.empty(); }

  std::size_t num_terms() const noexcept {
    std::size_t t = 0;
    for (const auto& [b, f] : parts_) t += f.size();
    return t;
  }

  /// Coefficient polynomial of d^[b] (zero if absent).
  LaurentPoly part(const DividedIndex& b) const {
    auto it = parts_.find(b);
    return it == parts_.end() ? LaurentPoly(p_, n_) : it->second;
  }

  /// Adds f * d^[b].
  void add_part(const DividedIndex& b, const LaurentPoly& f) {
    check_index(b);
    if (f.nvars() != n_ || !(f.prime() == p_)) throw MismatchError("coefficient ring mismatch");
    if (f.is_zero()) return;
    auto [it, fresh] = parts_.try_emplace(b, f);
    if (fresh) return;
    it->second += f;
    if (it->second.is_zero()) parts_.erase(it);
  }

  /// Adds c * x^g * d^[b]; c a residue in [0, p).
  void add_term(ExponentVector g, const DividedIndex& b, std::uint32_t c) {
    check_index(b);
    if (g.size() != n_) throw MismatchError("exponent vector has wrong length");
    if (c == 0) return;
    auto it = parts_.try_emplace(b, p_, n_).first;
    it->second.add_term(std::move(g), c);
    if (it->second.is_zero()) parts_.erase(it);
  }

  /// Largest |b| over nonzero parts; nullopt for the zero operator.
  std::optional<std::uint64_t> order() const noexcept {
    std::optional<std::uint64_t> best;
    for (const auto& [b, f] : parts_) {
      auto d = total_degree(b);
      if (!best || d > *best) best = d;
    }
    return best;
  }

  /// True when every coefficient is an ordinary polynomial, i.e. D lies in D(P_n).
  bool is_polynomial_coefficient() const noexcept {
    for (const auto& [b, f] : parts_)
      if (!f.is_polynomial()) return false;
    return true;
  }

  DiffOp& operator+=(const DiffOp& o) {
    check(o);
    for (const auto& [b, f] : o.parts_) add_part(b, f);
    return *this;
  }

  DiffOp& operator-=(const DiffOp& o) {
    check(o);
    for (const auto& [b, f] : o.parts_) add_part(b, -f);
    return *this;
  }

  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }

  DiffOp scaled(std::uint32_t c) const {
    DiffOp r(p_, n_);
    for (const auto& [b, f] : parts_) r.add_part(b, f.scaled(c));
    return r;
  }

  DiffOp operator-() const { return scaled(p_.value() - 1); }

  /// Left multiplication by a Laurent polynomial.
  friend DiffOp operator*(const LaurentPoly& g, const DiffOp& d) {
    DiffOp r(d.p_, d.n_);
    for (const auto& [b, f] : d.parts_) r.add_part(b, g * f);
    return r;
  }

  friend bool operator==(const DiffOp& a, const DiffOp& b) noexcept {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.parts_ == b.parts_;
  }

  void check(const DiffOp& o) const {
    if (!(p_ == o.p_)) throw MismatchError("operators over different primes");
    if (n_ != o.n_) throw MismatchError("operators in different numbers of variables");
  }

 private:
  void check_index(const DividedIndex& b) const {
    if (b.size() != n_) throw MismatchError("divided index has wrong length");
    for (auto v : b)
      if (v < 0) throw std::invalid_argument("divided index entries must be nonnegative");
  }

  Prime p_;
  std::size_t n_;
  PartMap parts_;
};

namespace detail {

/// Calls fn(index, residue) for every multi-index j <= bound (componentwise)
/// with prod_i C(top_i, j_i) != 0 mod p; residue is that product.
template <class Fn>
void for_each_lucas_multi(const ExponentVector& top, const DividedIndex& bound, Prime p, Fn&& fn) {
  const std::size_t n = top.size();
  std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> supp(n);
  for (std::size_t i = 0; i < n; ++i) {
    supp[i] = lucas_support(top[i], static_cast<std::uint64_t>(bound[i]), p);
  }
  std::vector<std::size_t> pos(n, 0);
  DividedIndex j(n, 0);
  while (true) {
    std::uint32_t c = 1;
    for (std::size_t i = 0; i < n; ++i) {
      j[i] = static_cast<std::int64_t>(supp[i][pos[i]].first);
      c = mod::mul(c, supp[i][pos[i]].second, p);
    }
    fn(static_cast<const DividedIndex&>(j), c);
    std::size_t i = 0;
    while (i < n && ++pos[i] == supp[i].size()) pos[i++] = 0;
    if (i == n) break;
  }
}

}  // namespace detail

/// Product in D(L_n). Term by term,
///   (x^g d^[b]) (x^e d^[c]) = sum_{j <= b} C(e, j) C(b - j + c, c) x^{g + e - j} d^[b - j + c],
/// i.e. Leibniz for divided powers followed by d^[a] d^[c] = C(a + c, c) d^[a + c].
inline DiffOp op_mul(const DiffOp& lhs, const DiffOp& rhs) {
  lhs.check(rhs);
  const Prime p = lhs.prime();
  const std::size_t n = lhs.nvars();
  DiffOp out(p, n);
  for (const auto& [b, f] : lhs.parts()) {
    for (const auto& [c, g] : rhs.parts()) {
      for (const auto& [e, ge] : g.terms()) {
        detail::for_each_lucas_multi(e, b, p, [&](const DividedIndex& j, std::uint32_t cj) {
          DividedIndex nu(n);
          std::uint32_t coef = mod::mul(cj, ge, p);
          for (std::size_t i = 0; i < n && coef; ++i) {
            nu[i] = b[i] - j[i] + c[i];
            coef = mod::mul(coef, binom_nat_mod_p(nu[i], c[i], p), p);
          }
          if (!coef) return;
          ExponentVector shift(e);
          for (std::size_t i = 0; i < n; ++i) shift[i] -= j[i];
          for (const auto& [gf, cf] : f.terms()) {
            out.add_term(LaurentPoly::add_exponents(gf, shift), nu, mod::mul(cf, coef, p));
          }
        });
      }
    }
  }
  return out;
}

inline DiffOp operator*(const DiffOp& a, const DiffOp& b) { return op_mul(a, b); }

inline DiffOp commutator(const DiffOp& a, const DiffOp& b) { return op_mul(a, b) - op_mul(b, a); }

/// D * f, the action of D on L_n.
inline LaurentPoly op_act(const DiffOp& d, const LaurentPoly& f) {
  if (!(d.prime() == f.prime()) || d.nvars() != f.nvars())
    throw MismatchError("operator and polynomial live in different rings");
  const Prime p = d.prime();
  const std::size_t n = d.nvars();
  LaurentPoly out(p, n);
  for (const auto& [b, fb] : d.parts()) {
    for (const auto& [g, c] : f.terms()) {
      std::uint32_t coef = c;
      ExponentVector shift(g);
      for (std::size_t i = 0; i < n && coef; ++i) {
        coef = mod::mul(coef, binom_int_mod_p(g[i], static_cast<std::uint64_t>(b[i]), p), p);
        shift[i] -= b[i];
      }
      if (!coef) continue;
      for (const auto& [gf, cf] : fb.terms())
        out.add_term(LaurentPoly::add_exponents(gf, shift), mod::mul(cf, coef, p));
    }
  }
  return out;
}

inline std::optional<std::uint64_t> op_order(const DiffOp& d) noexcept { return d.order(); }

/// D^k by repeated multiplication; D^0 = 1.
inline DiffOp op_pow(const DiffOp& d, std::uint64_t k) {
  DiffOp r = DiffOp::identity(d.prime(), d.nvars());
  for (std::uint64_t t = 0; t < k; ++t) r = op_mul(r, d);
  return r;
}

/// Image of d_i^[j] given images of the levels d_i^[p^k], k = 0, 1, ...:
///   d_i^[j] = prod_k (d_i^[p^k])^{j_k} / j_k!   for j = sum_k j_k p^k.
/// With identity levels this returns d_i^[j] itself.
inline DiffOp divided_image_from_levels(std::span<const DiffOp> levels, std::size_t i,
                                        std::uint64_t j) {
  if (levels.empty()) throw InsufficientPrecision("no level images supplied");
  const Prime p = levels.front().prime();
  const std::size_t n = levels.front().nvars();
  const auto& fact = detail::factorials(p);
  DiffOp r = DiffOp::identity(p, n);
  for (std::size_t k = 0; j; ++k, j /= p) {
    auto jk = static_cast<std::uint32_t>(j % p);
    if (!jk) continue;
    if (k >= levels.size())
      throw InsufficientPrecision("d" + std::to_string(i + 1) + "^[p^" + std::to_string(k) +
                                  "] image needed but only " + std::to_string(levels.size()) +
                                  " levels are known");
    r = op_mul(r, op_pow(levels[k], jk).scaled(fact.inv_fact[jk]));
  }
  return r;
}

/// Black-box action on monomials: x^g -> D * x^g.
using MonomialAction = std::function<LaurentPoly(const ExponentVector&)>;

struct NormalFormOptions {
  std::size_t extra_probes = 8;
  std::uint64_t seed = 0x5eedULL;
};

/// Recovers the normal form of an operator of order <= bound from its action on
/// monomials. Since D * x^a = sum_{b <= a} C(a, b) f_b x^{a - b} with C(a, a) = 1,
/// the system is unitriangular over the partial order of N^n and
///   f_a = D * x^a - sum_{b < a} C(a, b) f_b x^{a - b}.
/// Only b with C(a, b) != 0 mod p contribute (Lucas), which keeps the sweep sparse.
/// The answer is then replayed on random extra monomials, including negative exponents.
inline DiffOp normal_form_from_action(Prime p, std::size_t n, const MonomialAction& action,
                                      std::uint64_t bound, NormalFormOptions opts = {}) {
  // Enumerate the simplex |a| <= bound by increasing total degree.
  std::vector<DividedIndex> simplex;
  {
    DividedIndex a(n, 0);
    std::vector<std::vector<DividedIndex>> by_degree(bound + 1);
    while (true) {
      by_degree[total_degree(a)].push_back(a);
      std::size_t i = 0;
      while (i < n) {
        ++a[i];
        if (total_degree(a) <= bound) break;
        a[i++] = 0;
      }
      if (i == n) break;
    }
    for (auto& level : by_degree)
      for (auto& a2 : level) simplex.push_back(std::move(a2));
  }

  std::map<DividedIndex, LaurentPoly> coeffs;
  for (const auto& a : simplex) {
    LaurentPoly fa = action(a);
    if (fa.nvars() != n || !(fa.prime() == p)) throw MismatchError("action returned wrong ring");
    detail::for_each_lucas_multi(a, a, p, [&](const DividedIndex& b, std::uint32_t c) {
      if (b == a) return;
      auto it = coeffs.find(b);
      if (it == coeffs.end()) return;
      ExponentVector shift(a);
      for (std::size_t i = 0; i < n; ++i) shift[i] -= b[i];
      fa -= it->second.shifted(shift).scaled(c);
    });
    if (!fa.is_zero()) coeffs.emplace(a, std::move(fa));
  }

  DiffOp out(p, n);
  for (const auto& [b, f] : coeffs) out.add_part(b, f);

  std::mt19937_64 rng(opts.seed);
  const auto span = static_cast<std::int64_t>(bound) + 2;
  for (std::size_t t = 0; t < opts.extra_probes; ++t) {
    ExponentVector g(n);
    for (auto& v : g) v = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * span + 1)) - span;
    if (!(op_act(out, LaurentPoly::monomial(p, g)) == action(g)))
      throw InconsistentAction("recovered operator disagrees with the action on a probe monomial");
  }
  return out;
}

}  // namespace dlaut

#endif  // DLAUT_DIFFOP_HPP
