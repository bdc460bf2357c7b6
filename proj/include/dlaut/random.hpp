#ifndef DLAUT_RANDOM_HPP
#define DLAUT_RANDOM_HPP

// Random instances for property sweeps. Only the raw mt19937_64 stream is used
// (std distributions are implementation-defined), so a seed reproduces the same
// instances on every platform.

#include <cstdint>
#include <random>

#include "dlaut/autgroup.hpp"

namespace dlaut::random {

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

inline ExponentVector exponent(Rng& rng, std::size_t n, std::int64_t lo, std::int64_t hi) {
  ExponentVector e(n);
  for (auto& v : e) v = uniform(rng, lo, hi);
  return e;
}

/// Up to max_terms terms with exponents in [-spread, spread]; may be zero.
inline LaurentPoly poly(Rng& rng, Prime p, std::size_t n, std::size_t max_terms, std::int64_t spread) {
  LaurentPoly f(p, n);
  auto t = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(max_terms)));
  for (std::size_t k = 0; k < t; ++k)
    f.add_term(exponent(rng, n, -spread, spread), static_cast<std::uint32_t>(uniform(rng, 1, p.value() - 1)));
  return f;
}

/// Random operator with divided indices of total degree <= max_order.
inline DiffOp op(Rng& rng, Prime p, std::size_t n, std::size_t max_terms, std::int64_t spread,
                 std::uint64_t max_order) {
  DiffOp d(p, n);
  auto t = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(max_terms)));
  for (std::size_t k = 0; k < t; ++k) {
    DividedIndex b(n, 0);
    std::int64_t budget = uniform(rng, 0, static_cast<std::int64_t>(max_order));
    for (std::size_t i = 0; i < n && budget > 0; ++i) {
      b[i] = (i + 1 == n) ? budget : uniform(rng, 0, budget);
      budget -= b[i];
    }
    d.add_term(exponent(rng, n, -spread, spread), b, static_cast<std::uint32_t>(uniform(rng, 1, p.value() - 1)));
  }
  return d;
}

inline PadicInt padic(Rng& rng, Prime p, std::size_t precision) {
  std::vector<std::uint32_t> d(precision);
  for (auto& v : d) v = static_cast<std::uint32_t>(uniform(rng, 0, p.value() - 1));
  return PadicInt(p, std::move(d));
}

inline SigmaShift shift(Rng& rng, Prime p, std::size_t n, std::size_t precision) {
  std::vector<PadicInt> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(padic(rng, p, precision));
  return SigmaShift(std::move(c));
}

/// Matrix entries in [-bound, bound], redrawn until det = +-1.
inline MonomialAut monomial_aut(Rng& rng, Prime p, std::size_t n, std::int64_t bound = 2) {
  while (true) {
    IntMatrix a(n, std::vector<std::int64_t>(n));
    for (auto& row : a)
      for (auto& v : row) v = uniform(rng, -bound, bound);
    auto d = detail::det(a);
    if (d != 1 && d != -1) continue;
    std::vector<std::uint32_t> lam(n);
    for (auto& l : lam) l = static_cast<std::uint32_t>(uniform(rng, 1, p.value() - 1));
    return MonomialAut(p, std::move(a), std::move(lam));
  }
}

}  // namespace dlaut::random

#endif  // DLAUT_RANDOM_HPP
