#ifndef DLAUT_AUTGROUP_HPP
#define DLAUT_AUTGROUP_HPP

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dlaut/diffop.hpp"

namespace dlaut {

// ---------------------------------------------------------------------------
// The shift automorphisms sigma_s, s in Z_p^n
// ---------------------------------------------------------------------------

/// Parameter s = (s_1, ..., s_n) of sigma_s; all components share p and precision.
class SigmaShift {
 public:
  explicit SigmaShift(std::vector<PadicInt> components) : s_(std::move(components)) {
    if (s_.empty()) throw std::invalid_argument("shift needs at least one component");
    for (const auto& c : s_) {
      if (!(c.prime() == s_.front().prime())) throw MismatchError("shift components over different primes");
      if (c.precision() != s_.front().precision())
        throw InsufficientPrecision("shift components have different precisions");
    }
  }

  static SigmaShift zero(Prime p, std::size_t n, std::size_t precision) {
    return SigmaShift(std::vector<PadicInt>(n, PadicInt(p, precision)));
  }

  /// digits[i] holds the base-p digits of s_i, least significant first; missing
  /// digits are zero.
  static SigmaShift from_digits(Prime p, std::size_t precision,
                                const std::vector<std::vector<std::uint32_t>>& digits) {
    std::vector<PadicInt> comps;
    for (const auto& d : digits) {
      if (d.size() > precision)
        throw InsufficientPrecision("shift given with " + std::to_string(d.size()) +
                                    " digits but precision is " + std::to_string(precision));
      std::vector<std::uint32_t> padded(d);
      padded.resize(precision, 0);
      comps.emplace_back(p, std::move(padded));
    }
    return SigmaShift(std::move(comps));
  }

  Prime prime() const noexcept { return s_.front().prime(); }
  std::size_t precision() const noexcept { return s_.front().precision(); }
  std::size_t nvars() const noexcept { return s_.size(); }
  const std::vector<PadicInt>& components() const noexcept { return s_; }
  const PadicInt& operator[](std::size_t i) const { return s_.at(i); }

  bool is_zero() const noexcept {
    for (const auto& c : s_)
      if (!c.is_zero()) return false;
    return true;
  }

  friend SigmaShift operator+(const SigmaShift& a, const SigmaShift& b) {
    a.check(b);
    std::vector<PadicInt> r;
    for (std::size_t i = 0; i < a.nvars(); ++i) r.push_back(a.s_[i] + b.s_[i]);
    return SigmaShift(std::move(r));
  }

  SigmaShift operator-() const {
    std::vector<PadicInt> r;
    for (const auto& c : s_) r.push_back(-c);
    return SigmaShift(std::move(r));
  }

  friend bool operator==(const SigmaShift& a, const SigmaShift& b) noexcept { return a.s_ == b.s_; }

  void check(const SigmaShift& o) const {
    if (nvars() != o.nvars()) throw MismatchError("shifts of different dimension");
    if (!(prime() == o.prime())) throw MismatchError("shifts over different primes");
    if (precision() != o.precision()) throw InsufficientPrecision("shift precision mismatch");
  }

 private:
  std::vector<PadicInt> s_;
};

/// sigma_s(d_i^[k]) = sum_{j=0}^{k} C(s_i, k - j) x_i^{j - k} d_i^[j].
///
/// This is the expansion of x_i^{-k} C(x_i d_i + s_i, k); on monomials it acts by
/// x^m -> C(m_i + s_i, k) x^{m - k e_i} (Vandermonde).
inline DiffOp sigma_image_divided(const SigmaShift& s, std::size_t i, std::uint64_t k) {
  const Prime p = s.prime();
  const std::size_t n = s.nvars();
  if (i >= n) throw MismatchError("variable index out of range");
  if (padic_length(k, p) > s.precision())
    throw InsufficientPrecision("sigma image of d" + std::to_string(i + 1) + "^[" + std::to_string(k) +
                                "] needs more than " + std::to_string(s.precision()) + " p-adic digits");
  DiffOp out(p, n);
  for (std::uint64_t j = 0; j <= k; ++j) {
    std::uint32_t c = binom_padic(s[i], k - j);
    if (!c) continue;
    out.add_term(unit_exponent(n, i, static_cast<std::int64_t>(j) - static_cast<std::int64_t>(k)),
                 unit_exponent(n, i, static_cast<std::int64_t>(j)), c);
  }
  return out;
}

/// sigma_s(D): fixes L_n and sends x^g d^[b] to x^g prod_i sigma_s(d_i^[b_i]).
inline DiffOp sigma_apply(const SigmaShift& s, const DiffOp& d) {
  if (!(s.prime() == d.prime()) || s.nvars() != d.nvars())
    throw MismatchError("shift and operator live in different rings");
  const std::size_t n = d.nvars();
  std::map<std::pair<std::size_t, std::int64_t>, DiffOp> cache;
  auto image = [&](std::size_t i, std::int64_t k) -> const DiffOp& {
    auto it = cache.find({i, k});
    if (it == cache.end())
      it = cache.emplace(std::pair{i, k}, sigma_image_divided(s, i, static_cast<std::uint64_t>(k))).first;
    return it->second;
  };

  DiffOp out(d.prime(), n);
  for (const auto& [b, f] : d.parts()) {
    std::optional<DiffOp> prod;
    for (std::size_t i = 0; i < n; ++i) {
      if (b[i] == 0) continue;
      prod = prod ? op_mul(*prod, image(i, b[i])) : image(i, b[i]);
    }
    if (!prod) {
      out.add_part(b, f);
      continue;
    }
    out += f * *prod;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monomial automorphisms of L_n: tau(x_j) = lambda_j x^{A e_j}
// ---------------------------------------------------------------------------

using IntMatrix = std::vector<std::vector<std::int64_t>>;

namespace detail {

inline std::int64_t det(const IntMatrix& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  std::int64_t r = 0;
  for (std::size_t c = 0; c < n; ++c) {
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<std::int64_t> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(a[i][j]);
      minor.push_back(std::move(row));
    }
    std::int64_t term = a[0][c] * det(minor);
    r += (c % 2 == 0) ? term : -term;
  }
  return r;
}

inline IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size();
  IntMatrix r(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

/// Inverse of a unimodular matrix: det * adj(A).
inline IntMatrix unimodular_inverse(const IntMatrix& a) {
  const std::size_t n = a.size();
  const std::int64_t d = det(a);
  if (n == 1) return {{d}};
  IntMatrix r(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix minor;
      for (std::size_t u = 0; u < n; ++u) {
        if (u == i) continue;
        std::vector<std::int64_t> row;
        for (std::size_t v = 0; v < n; ++v)
          if (v != j) row.push_back(a[u][v]);
        minor.push_back(std::move(row));
      }
      std::int64_t cof = ((i + j) % 2 == 0 ? 1 : -1) * det(minor);
      r[j][i] = d * cof;
    }
  }
  return r;
}

}  // namespace detail

class MonomialAut {
 public:
  /// Column j of `matrix` is the exponent of tau(x_j); lambda_j its coefficient.
  MonomialAut(Prime p, IntMatrix matrix, std::vector<std::uint32_t> lambda)
      : p_(p), a_(std::move(matrix)), lambda_(std::move(lambda)) {
    const std::size_t n = a_.size();
    if (n == 0 || lambda_.size() != n) throw MismatchError("monomial automorphism dimension mismatch");
    for (const auto& row : a_)
      if (row.size() != n) throw MismatchError("exponent matrix is not square");
    for (auto& l : lambda_) {
      l %= p_.value();
      if (l == 0) throw NotAUnit("monomial automorphism with zero scalar");
    }
    std::int64_t d = detail::det(a_);
    if (d != 1 && d != -1) throw NotGL("exponent matrix has determinant " + std::to_string(d));
  }

  static MonomialAut identity(Prime p, std::size_t n) {
    IntMatrix a(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1;
    return MonomialAut(p, std::move(a), std::vector<std::uint32_t>(n, 1));
  }

  Prime prime() const noexcept { return p_; }
  std::size_t nvars() const noexcept { return a_.size(); }
  const IntMatrix& matrix() const noexcept { return a_; }
  const std::vector<std::uint32_t>& lambda() const noexcept { return lambda_; }

  /// tau(x^g) = (prod_j lambda_j^{g_j}) x^{A g}.
  std::pair<std::uint32_t, ExponentVector> apply_monomial(const ExponentVector& g) const {
    const std::size_t n = nvars();
    std::uint32_t c = 1;
    ExponentVector e(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      c = mod::mul(c, mod::pow_signed(lambda_[j], g[j], p_), p_);
      for (std::size_t i = 0; i < n; ++i) e[i] += a_[i][j] * g[j];
    }
    return {c, e};
  }

  LaurentPoly apply(const LaurentPoly& f) const {
    LaurentPoly r(p_, nvars());
    for (const auto& [g, c] : f.terms()) {
      auto [k, e] = apply_monomial(g);
      r.add_term(std::move(e), mod::mul(c, k, p_));
    }
    return r;
  }

  MonomialAut inverse() const {
    IntMatrix b = detail::unimodular_inverse(a_);
    const std::size_t n = nvars();
    // tau^{-1}(x_j) = lambda^{-B e_j} x^{B e_j}
    std::vector<std::uint32_t> mu(n, 1);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) mu[j] = mod::mul(mu[j], mod::pow_signed(lambda_[k], -b[k][j], p_), p_);
    return MonomialAut(p_, std::move(b), std::move(mu));
  }

  /// this o other.
  MonomialAut compose(const MonomialAut& other) const {
    const std::size_t n = nvars();
    std::vector<std::uint32_t> lam(n);
    for (std::size_t j = 0; j < n; ++j) {
      ExponentVector col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = other.a_[i][j];
      lam[j] = mod::mul(other.lambda_[j], apply_monomial(col).first, p_);
    }
    return MonomialAut(p_, detail::matmul(a_, other.a_), std::move(lam));
  }

  bool is_identity() const { return *this == identity(p_, nvars()); }

  friend bool operator==(const MonomialAut& a, const MonomialAut& b) noexcept {
    return a.p_ == b.p_ && a.a_ == b.a_ && a.lambda_ == b.lambda_;
  }

 private:
  Prime p_;
  IntMatrix a_;
  std::vector<std::uint32_t> lambda_;
};

/// tau D tau^{-1}, recovered from its action f -> tau(D * tau^{-1}(f)).
inline DiffOp monomial_apply(const MonomialAut& tau, const DiffOp& d, NormalFormOptions opts = {}) {
  if (!(tau.prime() == d.prime()) || tau.nvars() != d.nvars())
    throw MismatchError("automorphism and operator live in different rings");
  auto ord = d.order();
  if (!ord) return d;
  const MonomialAut inv = tau.inverse();
  const Prime p = d.prime();
  MonomialAction action = [&](const ExponentVector& g) {
    return tau.apply(op_act(d, inv.apply(LaurentPoly::monomial(p, g))));
  };
  return normal_form_from_action(p, d.nvars(), action, *ord, opts);
}

/// A s: (A s)_i = sum_j A_ij s_j over Z_p at the precision of s.
inline SigmaShift twist(const IntMatrix& a, const SigmaShift& s) {
  std::vector<PadicInt> r;
  for (std::size_t i = 0; i < s.nvars(); ++i) {
    PadicInt acc(s.prime(), s.precision());
    for (std::size_t j = 0; j < s.nvars(); ++j) acc = acc + s[j].scaled(a[i][j]);
    r.push_back(std::move(acc));
  }
  return SigmaShift(std::move(r));
}

// ---------------------------------------------------------------------------
// Truncated presentations by generator images
// ---------------------------------------------------------------------------

/// Images of x_i, x_i^{-1} and d_i^[p^k] (k < precision) under an automorphism.
struct GeneratorImages {
  Prime p;
  std::size_t n;
  std::size_t precision;
  std::vector<DiffOp> x_images;
  std::vector<DiffOp> xinv_images;
  std::vector<std::vector<DiffOp>> d_images;  // [i][k]

  static GeneratorImages identity(Prime p, std::size_t n, std::size_t precision) {
    GeneratorImages g{p, n, precision, {}, {}, {}};
    std::uint64_t pk = 1;
    g.d_images.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      g.x_images.push_back(DiffOp::from_poly(LaurentPoly::variable(p, n, i, 1)));
      g.xinv_images.push_back(DiffOp::from_poly(LaurentPoly::variable(p, n, i, -1)));
    }
    for (std::size_t k = 0; k < precision; ++k, pk *= p)
      for (std::size_t i = 0; i < n; ++i) g.d_images[i].push_back(DiffOp::divided(p, n, i, pk));
    return g;
  }

  friend bool operator==(const GeneratorImages& a, const GeneratorImages& b) noexcept {
    return a.p == b.p && a.n == b.n && a.precision == b.precision && a.x_images == b.x_images &&
           a.xinv_images == b.xinv_images && a.d_images == b.d_images;
  }
};

inline std::uint64_t ipow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= base;
  return r;
}

inline GeneratorImages build_sigma(const SigmaShift& s) {
  GeneratorImages g = GeneratorImages::identity(s.prime(), s.nvars(), s.precision());
  for (std::size_t i = 0; i < s.nvars(); ++i)
    for (std::size_t k = 0; k < s.precision(); ++k)
      g.d_images[i][k] = sigma_image_divided(s, i, ipow(s.prime(), k));
  return g;
}

/// Images of the lift of tau to D(L_n) (conjugation by the change of variables).
inline GeneratorImages lift(const MonomialAut& tau, std::size_t precision, NormalFormOptions opts = {}) {
  const Prime p = tau.prime();
  const std::size_t n = tau.nvars();
  GeneratorImages g = GeneratorImages::identity(p, n, precision);
  for (std::size_t i = 0; i < n; ++i) {
    g.x_images[i] = DiffOp::from_poly(tau.apply(LaurentPoly::variable(p, n, i, 1)));
    g.xinv_images[i] = DiffOp::from_poly(tau.apply(LaurentPoly::variable(p, n, i, -1)));
    for (std::size_t k = 0; k < precision; ++k) g.d_images[i][k] = monomial_apply(tau, g.d_images[i][k], opts);
  }
  return g;
}

/// Evaluates the automorphism presented by `g` on arbitrary operators.
/// Images of d_i^[j] are assembled from the level images and memoized.
class ImageEvaluator {
 public:
  explicit ImageEvaluator(const GeneratorImages& g) : g_(g) {
    for (std::size_t i = 0; i < g.n; ++i) {
      const auto& xi = g.x_images[i];
      if (xi.parts().size() == 1 && xi.parts().begin()->first == zero_exponent(g.n) &&
          xi.parts().begin()->second.size() == 1) {
        units_.push_back(xi.parts().begin()->second.unit_decompose());
      } else {
        units_.clear();
        break;
      }
    }
  }

  /// Image of a Laurent polynomial, as an operator.
  DiffOp poly_image(const LaurentPoly& f) {
    const std::size_t n = g_.n;
    if (units_.size() == n) {
      LaurentPoly r(g_.p, n);
      for (const auto& [e, c] : f.terms()) {
        std::uint32_t k = c;
        ExponentVector out(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
          k = mod::mul(k, mod::pow_signed(units_[i].first.value(), e[i], g_.p), g_.p);
          for (std::size_t t = 0; t < n; ++t) out[t] += e[i] * units_[i].second[t];
        }
        r.add_term(std::move(out), k);
      }
      return DiffOp::from_poly(r);
    }
    DiffOp r(g_.p, n);
    for (const auto& [e, c] : f.terms()) {
      DiffOp m = DiffOp::identity(g_.p, n);
      for (std::size_t i = 0; i < n; ++i) {
        const DiffOp& base = e[i] >= 0 ? g_.x_images[i] : g_.xinv_images[i];
        m = op_mul(m, op_pow(base, static_cast<std::uint64_t>(e[i] >= 0 ? e[i] : -e[i])));
      }
      r += m.scaled(c);
    }
    return r;
  }

  /// Image of d_i^[j].
  const DiffOp& divided_image(std::size_t i, std::uint64_t j) {
    auto key = std::pair{i, j};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const std::uint32_t p = g_.p;
    DiffOp result = DiffOp::identity(g_.p, g_.n);
    if (j > 0) {
      std::size_t top = padic_length(j, p) - 1;
      std::uint64_t place = ipow(p, top);
      auto digit = static_cast<std::uint32_t>(j / place);
      std::uint64_t rest = j % place;
      if (top >= g_.precision)
        throw InsufficientPrecision("image of d" + std::to_string(i + 1) + "^[" + std::to_string(j) +
                                    "] needs level " + std::to_string(top) + " beyond precision " +
                                    std::to_string(g_.precision));
      const DiffOp& lvl = level_power(i, top, digit);
      result = rest ? op_mul(divided_image(i, rest), lvl) : lvl;
    }
    return cache_.emplace(key, std::move(result)).first->second;
  }

  DiffOp apply(const DiffOp& d) {
    if (!(d.prime() == g_.p) || d.nvars() != g_.n) throw MismatchError("operator outside the presented ring");
    DiffOp out(g_.p, g_.n);
    for (const auto& [b, f] : d.parts()) {
      std::optional<DiffOp> prod;
      for (std::size_t i = 0; i < g_.n; ++i) {
        if (b[i] == 0) continue;
        const DiffOp& img = divided_image(i, static_cast<std::uint64_t>(b[i]));
        prod = prod ? op_mul(*prod, img) : img;
      }
      DiffOp fi = poly_image(f);
      out += prod ? op_mul(fi, *prod) : fi;
    }
    return out;
  }

 private:
  // (level_k)^d / d!
  const DiffOp& level_power(std::size_t i, std::size_t k, std::uint32_t d) {
    auto key = std::tuple{i, k, d};
    if (auto it = powers_.find(key); it != powers_.end()) return it->second;
    const auto& fact = detail::factorials(g_.p);
    DiffOp v = op_pow(g_.d_images[i][k], d).scaled(fact.inv_fact[d]);
    return powers_.emplace(key, std::move(v)).first->second;
  }

  const GeneratorImages& g_;
  std::vector<std::pair<Fp, ExponentVector>> units_;
  std::map<std::pair<std::size_t, std::uint64_t>, DiffOp> cache_;
  std::map<std::tuple<std::size_t, std::size_t, std::uint32_t>, DiffOp> powers_;
};

inline DiffOp apply_images(const GeneratorImages& g, const DiffOp& d) { return ImageEvaluator(g).apply(d); }

/// Images of outer o inner.
inline GeneratorImages compose_images(const GeneratorImages& outer, const GeneratorImages& inner) {
  if (!(outer.p == inner.p) || outer.n != inner.n) throw MismatchError("images over different rings");
  if (outer.precision != inner.precision) throw InsufficientPrecision("images at different precisions");
  ImageEvaluator ev(outer);
  GeneratorImages r = inner;
  for (std::size_t i = 0; i < inner.n; ++i) {
    r.x_images[i] = ev.apply(inner.x_images[i]);
    r.xinv_images[i] = ev.apply(inner.xinv_images[i]);
    for (std::size_t k = 0; k < inner.precision; ++k) r.d_images[i][k] = ev.apply(inner.d_images[i][k]);
  }
  return r;
}

// ---------------------------------------------------------------------------
// The semidirect product Z_p^n x| Aut(L_n)
// ---------------------------------------------------------------------------

/// sigma = sigma_shift o tau.
struct FactoredAut {
  SigmaShift shift;
  MonomialAut tau;

  friend bool operator==(const FactoredAut& a, const FactoredAut& b) noexcept {
    return a.shift == b.shift && a.tau == b.tau;
  }
};

/// (s, tau)(t, tau') = (s + A t, tau tau'), A the exponent matrix of tau.
inline FactoredAut compose_factored(const FactoredAut& a, const FactoredAut& b) {
  return {a.shift + twist(a.tau.matrix(), b.shift), a.tau.compose(b.tau)};
}

inline FactoredAut invert_factored(const FactoredAut& a) {
  MonomialAut inv = a.tau.inverse();
  return {-twist(inv.matrix(), a.shift), inv};
}

/// Images of sigma_s o tau.
inline GeneratorImages images_of(const FactoredAut& a, NormalFormOptions opts = {}) {
  GeneratorImages g = lift(a.tau, a.shift.precision(), opts);
  for (auto& row : g.d_images)
    for (auto& img : row) img = sigma_apply(a.shift, img);
  return g;
}

// ---------------------------------------------------------------------------
// Validation, digit extraction and factorization
// ---------------------------------------------------------------------------

struct RelationCheck {
  std::string name;
  bool passed;
};

struct ValidationReport {
  std::vector<RelationCheck> checks;

  bool all_passed() const noexcept {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> r;
    for (const auto& c : checks)
      if (!c.passed) r.push_back(c.name);
    return r;
  }
};

/// Checks that the images satisfy the defining relations of D(L_n) on the
/// generators that are present: units, commutation, [d_i^[p^k], x_j] =
/// delta_ij d_i^[p^k - 1] and (d_i^[p^k])^p = 0.
inline ValidationReport validate_generator_images(const GeneratorImages& g) {
  ValidationReport rep;
  const std::size_t n = g.n;
  const DiffOp one = DiffOp::identity(g.p, n);
  auto lvl = [&](std::size_t i, std::size_t k) {
    return "d" + std::to_string(i + 1) + "^[p^" + std::to_string(k) + "]";
  };
  auto x = [](std::size_t i) { return "x" + std::to_string(i + 1); };

  for (std::size_t i = 0; i < n; ++i) {
    rep.checks.push_back({x(i) + " * " + x(i) + "^-1 = 1", op_mul(g.x_images[i], g.xinv_images[i]) == one});
    rep.checks.push_back({x(i) + "^-1 * " + x(i) + " = 1", op_mul(g.xinv_images[i], g.x_images[i]) == one});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      rep.checks.push_back({"[" + x(i) + ", " + x(j) + "] = 0", commutator(g.x_images[i], g.x_images[j]).is_zero()});

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < g.precision; ++k)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t l = (j == i ? k + 1 : 0); l < g.precision; ++l)
          rep.checks.push_back({"[" + lvl(i, k) + ", " + lvl(j, l) + "] = 0",
                                commutator(g.d_images[i][k], g.d_images[j][l]).is_zero()});

  ImageEvaluator ev(g);
  std::uint64_t pk = 1;
  for (std::size_t k = 0; k < g.precision; ++k, pk *= g.p) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        DiffOp lhs = commutator(g.d_images[i][k], g.x_images[j]);
        bool ok = i == j ? lhs == ev.divided_image(i, pk - 1) : lhs.is_zero();
        rep.checks.push_back({"[" + lvl(i, k) + ", " + x(j) + "] = " + (i == j ? "d" + std::to_string(i + 1) + "^[p^" + std::to_string(k) + "-1]" : std::string("0")), ok});
      }
      rep.checks.push_back({"(" + lvl(i, k) + ")^p = 0", op_pow(g.d_images[i][k], g.p).is_zero()});
    }
  }
  return rep;
}

/// Recovers s with g = build_sigma(s) by peeling off one p-adic digit per level.
///
/// At level k the residual automorphism fixes every d_i^[p^u], u < k, and must send
/// d_i^[p^k] to d_i^[p^k] + c_i x_i^{-p^k}; then c_i is digit k of s_i and the
/// residual is corrected by sigma_{-p^k c}.
inline SigmaShift extract_digits(const GeneratorImages& g) {
  const Prime p = g.p;
  const std::size_t n = g.n;
  const std::size_t K = g.precision;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g.x_images[i] == DiffOp::from_poly(LaurentPoly::variable(p, n, i, 1))) ||
        !(g.xinv_images[i] == DiffOp::from_poly(LaurentPoly::variable(p, n, i, -1))))
      throw NotInStabilizer("x" + std::to_string(i + 1) + " is not fixed");
  }
  if (g.d_images.size() != n) throw MismatchError("level images missing");
  for (const auto& row : g.d_images)
    if (row.size() != K) throw InsufficientPrecision("level images do not cover the stated precision");

  std::vector<std::vector<std::uint32_t>> digits(n, std::vector<std::uint32_t>(K, 0));
  auto residual = g.d_images;
  std::uint64_t pk = 1;
  for (std::size_t k = 0; k < K; ++k, pk *= p) {
    std::vector<PadicInt> corr;
    for (std::size_t i = 0; i < n; ++i) {
      DiffOp b = residual[i][k] - DiffOp::divided(p, n, i, pk);
      std::uint32_t c = 0;
      if (!b.is_zero()) {
        const auto want = unit_exponent(n, i, -static_cast<std::int64_t>(pk));
        const auto& parts = b.parts();
        bool ok = parts.size() == 1 && parts.begin()->first == zero_exponent(n) &&
                  parts.begin()->second.size() == 1 && parts.begin()->second.terms().begin()->first == want;
        if (!ok)
          throw NotSigmaForm("level " + std::to_string(k) + " of variable " + std::to_string(i + 1) +
                             ": perturbation is not a scalar multiple of x" + std::to_string(i + 1) +
                             "^-" + std::to_string(pk));
        c = parts.begin()->second.terms().begin()->second;
      }
      digits[i][k] = c;
      std::vector<std::uint32_t> d(K, 0);
      d[k] = c;
      corr.push_back(-PadicInt(p, std::move(d)));
    }
    SigmaShift corrector(std::move(corr));
    if (corrector.is_zero()) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = k; l < K; ++l) residual[i][l] = sigma_apply(corrector, residual[i][l]);
  }
  return SigmaShift::from_digits(p, K, digits);
}

/// Reads tau off the restriction to L_n, strips it, and extracts the shift.
inline FactoredAut factorize(const GeneratorImages& g, NormalFormOptions opts = {}) {
  const Prime p = g.p;
  const std::size_t n = g.n;
  IntMatrix a(n, std::vector<std::int64_t>(n, 0));
  std::vector<std::uint32_t> lambda(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& xj = g.x_images[j];
    if (xj.order().value_or(0) != 0)
      throw NotAUnit("image of x" + std::to_string(j + 1) + " is not in L_n");
    auto [c, e] = xj.part(zero_exponent(n)).unit_decompose();
    lambda[j] = c.value();
    for (std::size_t i = 0; i < n; ++i) a[i][j] = e[i];
  }
  MonomialAut tau(p, std::move(a), std::move(lambda));
  MonomialAut inv = tau.inverse();

  // tau^{-1} o g = sigma_{A^{-1} s} lies in st(L_n); only 2K generator images need rewriting
  GeneratorImages h = GeneratorImages::identity(p, n, g.precision);
  for (std::size_t i = 0; i < n; ++i) {
    h.x_images[i] = monomial_apply(inv, g.x_images[i], opts);
    h.xinv_images[i] = monomial_apply(inv, g.xinv_images[i], opts);
    for (std::size_t k = 0; k < g.precision; ++k) h.d_images[i][k] = monomial_apply(inv, g.d_images[i][k], opts);
  }
  return {twist(tau.matrix(), extract_digits(h)), tau};
}

}  // namespace dlaut

#endif  // DLAUT_AUTGROUP_HPP
