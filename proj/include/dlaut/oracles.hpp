#ifndef DLAUT_ORACLES_HPP
#define DLAUT_ORACLES_HPP

// Brute-force verifiers that are independent of the closed formulas they check.

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dlaut/format.hpp"
#include "dlaut/random.hpp"

namespace dlaut {

/// Box lo_i <= a_i <= hi_i of exponents.
struct ExponentWindow {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;

  ExponentWindow(std::vector<std::int64_t> lo_, std::vector<std::int64_t> hi_)
      : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("window bounds mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i]) throw std::invalid_argument("empty exponent window");
  }

  static ExponentWindow cube(std::size_t n, std::int64_t lo, std::int64_t hi) {
    return {std::vector<std::int64_t>(n, lo), std::vector<std::int64_t>(n, hi)};
  }

  std::size_t nvars() const noexcept { return lo.size(); }

  std::uint64_t count() const noexcept {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) c *= static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
    return c;
  }

  std::vector<ExponentVector> monomials() const {
    std::vector<ExponentVector> out;
    ExponentVector a(lo.begin(), lo.end());
    while (true) {
      out.push_back(a);
      std::size_t i = 0;
      while (i < a.size() && ++a[i] > hi[i]) a[i] = lo[i], ++i;
      if (i == a.size()) break;
    }
    return out;
  }
};

inline constexpr std::uint64_t kMaxWindowMonomials = 10000;

/// Basis of the kernel of f -> (-1) d_i^[p-1] f + f^p restricted to the span of the
/// window monomials (i zero-based). The map is assembled exactly as a matrix over
/// F_p and reduced to row echelon form; the returned basis has one vector per free
/// column, normalized to coefficient 1 there.
inline std::vector<LaurentPoly> kernel_bruteforce(std::size_t i, const ExponentWindow& window, Prime p) {
  const std::size_t n = window.nvars();
  if (i >= n) throw MismatchError("variable index out of range");
  if (window.count() > kMaxWindowMonomials)
    throw WindowTooLarge("window has " + std::to_string(window.count()) + " monomials, cap is " +
                         std::to_string(kMaxWindowMonomials));
  const auto cols = window.monomials();
  std::map<ExponentVector, std::size_t> row_of;
  std::vector<LaurentPoly> images;
  for (const auto& m : cols) {
    LaurentPoly x = LaurentPoly::monomial(p, m);
    LaurentPoly img = x.frobenius() - x.divided_partial(i, p - 1);
    for (const auto& [e, c] : img.terms()) row_of.try_emplace(e, row_of.size());
    images.push_back(std::move(img));
  }
  const std::size_t R = row_of.size(), C = cols.size();
  std::vector<std::vector<std::uint32_t>> m(R, std::vector<std::uint32_t>(C, 0));
  for (std::size_t c = 0; c < C; ++c)
    for (const auto& [e, v] : images[c].terms()) m[row_of[e]][c] = v;

  // reduced row echelon form
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t piv = r;
    while (piv < R && m[piv][c] == 0) ++piv;
    if (piv == R) continue;
    std::swap(m[piv], m[r]);
    std::uint32_t inv = mod::inv(m[r][c], p);
    for (auto& v : m[r]) v = mod::mul(v, inv, p);
    for (std::size_t q = 0; q < R; ++q) {
      if (q == r || m[q][c] == 0) continue;
      std::uint32_t f = m[q][c];
      for (std::size_t t = c; t < C; ++t) m[q][t] = mod::sub(m[q][t], mod::mul(f, m[r][t], p), p);
    }
    pivot_col.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(C, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::vector<LaurentPoly> basis;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    LaurentPoly v(p, n);
    v.add_term(cols[f], 1);
    for (std::size_t q = 0; q < pivot_col.size(); ++q)
      v.add_term(cols[pivot_col[q]], mod::neg(m[q][f], p));
    basis.push_back(std::move(v));
  }
  return basis;
}

struct EquivResult {
  bool passed = true;
  std::optional<ExponentVector> counterexample;
};

/// Compares op_act(D, x^m) with reference(x^m) on `probes` monomials drawn from the window.
inline EquivResult action_equiv_check(const DiffOp& d, const MonomialAction& reference, std::size_t probes,
                                      const ExponentWindow& window, std::uint64_t seed) {
  random::Rng rng(seed);
  for (std::size_t t = 0; t < probes; ++t) {
    ExponentVector m(window.nvars());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = random::uniform(rng, window.lo[i], window.hi[i]);
    if (!(op_act(d, LaurentPoly::monomial(d.prime(), m)) == reference(m))) return {false, m};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Suite reports
// ---------------------------------------------------------------------------

struct CheckBlock {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  std::optional<std::string> first_counterexample;

  void record(bool ok, const std::function<std::string()>& describe) {
    ++checked;
    if (ok) return;
    ++failed;
    if (!first_counterexample) first_counterexample = describe();
  }
};

struct SuiteReport {
  std::string suite;
  std::string parameters;
  std::deque<CheckBlock> blocks;  // block() hands out references that must survive later insertions

  bool passed() const noexcept {
    for (const auto& b : blocks)
      if (b.failed) return false;
    return true;
  }

  CheckBlock& block(const std::string& name) {
    for (auto& b : blocks)
      if (b.name == name) return b;
    blocks.push_back({name});
    return blocks.back();
  }

  /// Human-readable lines followed by a summary block of key=value lines.
  std::string text() const {
    std::ostringstream os;
    os << "[" << suite << "] " << parameters << "\n";
    for (const auto& b : blocks) {
      os << "  " << b.name << ": " << (b.failed ? "FAIL" : "ok") << " (" << b.checked << " checked, "
         << b.failed << " failed)\n";
      if (b.first_counterexample) os << "    first counterexample: " << *b.first_counterexample << "\n";
    }
    os << "BEGIN SUMMARY\n";
    for (const auto& b : blocks)
      os << suite << "." << b.name << " checked=" << b.checked << " failed=" << b.failed << "\n";
    os << "result=" << (passed() ? "pass" : "fail") << "\n";
    os << "END SUMMARY\n";
    return os.str();
  }
};

using MulFn = std::function<DiffOp(const DiffOp&, const DiffOp&)>;

/// d_i + f.
inline DiffOp shifted_derivation(std::size_t i, const LaurentPoly& f) {
  return DiffOp::divided(f.prime(), f.nvars(), i, 1) + DiffOp::from_poly(f);
}

/// (d_i + f)^p against d_i^{p-1}(f) + f^p, where d_i^{p-1} = (p-1)! d_i^[p-1] = -d_i^[p-1].
inline void corollary_block(CheckBlock& blk, Prime p, std::size_t n, std::size_t trials, random::Rng& rng,
                            const MulFn& mul) {
  for (std::size_t t = 0; t < trials; ++t) {
    LaurentPoly f = random::poly(rng, p, n, 4, 2 * static_cast<std::int64_t>(p));
    for (std::size_t i = 0; i < n; ++i) {
      DiffOp base = shifted_derivation(i, f);
      DiffOp lhs = DiffOp::identity(p, n);
      for (std::uint32_t k = 0; k < p; ++k) lhs = mul(lhs, base);
      DiffOp rhs = DiffOp::from_poly(f.frobenius() - f.divided_partial(i, p - 1));
      blk.record(lhs == rhs, [&] { return "(d" + std::to_string(i + 1) + " + " + to_string(f) + ")^p"; });
    }
  }
}

/// The defining relations of D(P_n) for k, l <= max_index, random multi-index
/// products d^[a] d^[b] = C(a + b, b) d^[a + b], and the (d_i + f)^p identity.
inline SuiteReport relation_suite(Prime p, std::size_t n, std::uint64_t max_index, std::size_t trials,
                                  std::uint64_t seed, const MulFn& mul = op_mul) {
  SuiteReport rep{"relations", "p=" + std::to_string(p.value()) + " n=" + std::to_string(n) +
                                   " max_index=" + std::to_string(max_index) + " trials=" + std::to_string(trials) +
                                   " seed=" + std::to_string(seed),
                  {}};
  auto x = [&](std::size_t i, std::int64_t e = 1) { return DiffOp::from_poly(LaurentPoly::variable(p, n, i, e)); };
  auto dv = [&](std::size_t i, std::uint64_t k) { return DiffOp::divided(p, n, i, k); };
  auto comm = [&](const DiffOp& a, const DiffOp& b) { return mul(a, b) - mul(b, a); };
  auto name = [](std::size_t i, std::uint64_t k) {
    return "d" + std::to_string(i + 1) + "[" + std::to_string(k) + "]";
  };

  auto& xb = rep.block("x-commute");
  for (std::size_t i = 0; i < n; ++i) {
    xb.record(mul(x(i), x(i, -1)) == DiffOp::identity(p, n), [&] { return "x" + std::to_string(i + 1) + " * inverse"; });
    for (std::size_t j = 0; j < n; ++j)
      xb.record(comm(x(i), x(j)).is_zero(), [&] { return "[x" + std::to_string(i + 1) + ", x" + std::to_string(j + 1) + "]"; });
  }

  auto& dc = rep.block("d-commute");
  auto& dp = rep.block("d-product");
  auto& lb = rep.block("leibniz");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint64_t k = 0; k <= max_index; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::uint64_t l = 0; l <= max_index; ++l)
          dc.record(comm(dv(i, k), dv(j, l)).is_zero(), [&] { return "[" + name(i, k) + ", " + name(j, l) + "]"; });
        if (k >= 1) {
          DiffOp want = i == j ? dv(i, k - 1) : DiffOp(p, n);
          lb.record(comm(dv(i, k), x(j)) == want, [&] { return "[" + name(i, k) + ", x" + std::to_string(j + 1) + "]"; });
        }
      }
      for (std::uint64_t l = 0; l <= max_index; ++l) {
        DiffOp want = dv(i, k + l).scaled(binom_nat_mod_p(k + l, k, p));
        dp.record(mul(dv(i, k), dv(i, l)) == want, [&] { return name(i, k) + " * " + name(i, l); });
      }
    }
  }

  random::Rng rng(seed);
  auto& mb = rep.block("multi-index-product");
  for (std::size_t t = 0; t < trials; ++t) {
    DividedIndex a(n), b(n), ab(n);
    std::uint32_t c = 1;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = random::uniform(rng, 0, static_cast<std::int64_t>(max_index));
      b[i] = random::uniform(rng, 0, static_cast<std::int64_t>(max_index));
      ab[i] = a[i] + b[i];
      c = mod::mul(c, binom_nat_mod_p(static_cast<std::uint64_t>(ab[i]), static_cast<std::uint64_t>(b[i]), p), p);
    }
    DiffOp lhs = mul(DiffOp::term(p, zero_exponent(n), a), DiffOp::term(p, zero_exponent(n), b));
    mb.record(lhs == DiffOp::term(p, zero_exponent(n), ab, c), [&] { return "d^" + to_string(a) + " * d^" + to_string(b); });
  }

  corollary_block(rep.block("corollary"), p, n, trials, rng, mul);
  return rep;
}

inline SuiteReport corollary_suite(Prime p, std::size_t n, std::size_t trials, std::uint64_t seed) {
  SuiteReport rep{"corollary", "p=" + std::to_string(p.value()) + " n=" + std::to_string(n) +
                                   " trials=" + std::to_string(trials) + " seed=" + std::to_string(seed),
                  {}};
  random::Rng rng(seed);
  corollary_block(rep.block("pth-power"), p, n, trials, rng, op_mul);
  return rep;
}

/// Kernel over [-w, w]^n must be {x_i^{-1}}; over the polynomial window [0, w]^n it must vanish.
inline SuiteReport kernel_suite(Prime p, std::size_t n, std::int64_t w) {
  SuiteReport rep{"kernel", "p=" + std::to_string(p.value()) + " n=" + std::to_string(n) + " window=" + std::to_string(w), {}};
  auto& lb = rep.block("laurent-window");
  auto& pb = rep.block("polynomial-window");
  for (std::size_t i = 0; i < n; ++i) {
    auto basis = kernel_bruteforce(i, ExponentWindow::cube(n, -w, w), p);
    bool ok = basis.size() == 1 && basis[0] == LaurentPoly::variable(p, n, i, -1);
    lb.record(ok, [&] {
      std::string s = "variable " + std::to_string(i + 1) + ": basis {";
      for (std::size_t k = 0; k < basis.size(); ++k) s += (k ? ", " : "") + to_string(basis[k]);
      return s + "}";
    });
    auto poly_basis = kernel_bruteforce(i, ExponentWindow::cube(n, 0, w), p);
    pb.record(poly_basis.empty(), [&] {
      return "variable " + std::to_string(i + 1) + ": kernel of dimension " + std::to_string(poly_basis.size());
    });
  }
  return rep;
}

/// sigma_s o sigma_t against sigma_{s+t} on every level image.
inline SuiteReport grouplaw_suite(Prime p, std::size_t n, std::size_t precision, std::size_t trials,
                                  std::uint64_t seed) {
  SuiteReport rep{"grouplaw", "p=" + std::to_string(p.value()) + " n=" + std::to_string(n) +
                                  " precision=" + std::to_string(precision) + " trials=" + std::to_string(trials) +
                                  " seed=" + std::to_string(seed),
                  {}};
  random::Rng rng(seed);
  auto& blk = rep.block("sigma-sum");
  for (std::size_t t = 0; t < trials; ++t) {
    SigmaShift s = random::shift(rng, p, n, precision);
    SigmaShift u = random::shift(rng, p, n, precision);
    GeneratorImages want = build_sigma(s + u);
    GeneratorImages inner = build_sigma(u);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t k = 0; k < precision && ok; ++k)
        ok = sigma_apply(s, inner.d_images[i][k]) == want.d_images[i][k];
    blk.record(ok, [&] {
      std::ostringstream os;
      os << "s=" << s[0] << " t=" << u[0];
      return os.str();
    });
  }
  return rep;
}

/// extract_digits(build_sigma(s)) = s, plus rejection of a perturbation that is not of sigma form.
inline SuiteReport roundtrip_suite(Prime p, std::size_t n, std::size_t precision, std::size_t trials,
                                   std::uint64_t seed) {
  SuiteReport rep{"roundtrip", "p=" + std::to_string(p.value()) + " n=" + std::to_string(n) +
                                   " precision=" + std::to_string(precision) + " trials=" + std::to_string(trials) +
                                   " seed=" + std::to_string(seed),
                  {}};
  random::Rng rng(seed);
  auto& blk = rep.block("extract-build");
  for (std::size_t t = 0; t < trials; ++t) {
    SigmaShift s = random::shift(rng, p, n, precision);
    bool ok = extract_digits(build_sigma(s)) == s;
    blk.record(ok, [&] {
      std::ostringstream os;
      os << "s_1=" << s[0];
      return os.str();
    });
  }
  auto& bad = rep.block("reject-malformed");
  GeneratorImages g = GeneratorImages::identity(p, n, precision);
  g.d_images[0][0] = DiffOp::divided(p, n, 0, 1) + DiffOp::from_poly(LaurentPoly::variable(p, n, 0, 1));
  bool rejected = false;
  try {
    extract_digits(g);
  } catch (const NotSigmaForm&) {
    rejected = true;
  }
  bad.record(rejected, [] { return std::string("d1 -> d1 + x1 was accepted"); });
  return rep;
}

}  // namespace dlaut

#endif  // DLAUT_ORACLES_HPP
