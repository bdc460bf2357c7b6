#ifndef DLAUT_FORMAT_HPP
#define DLAUT_FORMAT_HPP

#include <sstream>
#include <string>

#include "dlaut/autgroup.hpp"

namespace dlaut {

namespace detail {

inline void append_term(std::string& out, std::uint32_t c, const ExponentVector& g, const DividedIndex* b) {
  std::string t;
  auto factor = [&](const std::string& f) {
    if (!t.empty()) t += '*';
    t += f;
  };
  bool bare = true;
  for (auto e : g)
    if (e) bare = false;
  if (b)
    for (auto e : *b)
      if (e) bare = false;
  if (c != 1 || bare) factor(std::to_string(c));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i]) continue;
    std::string v = "x" + std::to_string(i + 1);
    if (g[i] != 1) v += "^" + std::to_string(g[i]);
    factor(v);
  }
  if (b)
    for (std::size_t i = 0; i < b->size(); ++i)
      if ((*b)[i]) factor("d" + std::to_string(i + 1) + "[" + std::to_string((*b)[i]) + "]");
  if (!out.empty()) out += " + ";
  out += t;
}

}  // namespace detail

/// Printed highest exponent first (descending lexicographic order); "0" for zero.
inline std::string to_string(const LaurentPoly& f) {
  std::string out;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) detail::append_term(out, it->second, it->first, nullptr);
  return out.empty() ? "0" : out;
}

/// Terms ordered by divided index, then by x-exponent, both descending.
inline std::string to_string(const DiffOp& d) {
  std::string out;
  for (auto pit = d.parts().rbegin(); pit != d.parts().rend(); ++pit)
    for (auto it = pit->second.terms().rbegin(); it != pit->second.terms().rend(); ++it)
      detail::append_term(out, it->second, it->first, &pit->first);
  return out.empty() ? "0" : out;
}

/// "d0 + d1*p + d2*p^2 + ...", nonzero digits only.
inline std::string padic_expansion(const PadicInt& s) {
  std::string out;
  for (std::size_t k = 0; k < s.precision(); ++k) {
    if (!s.digit(k)) continue;
    if (!out.empty()) out += " + ";
    out += std::to_string(s.digit(k));
    if (k == 1) out += "*" + std::to_string(s.prime().value());
    if (k > 1) out += "*" + std::to_string(s.prime().value()) + "^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

inline std::string to_string(const ExponentVector& e) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  os << ')';
  return os.str();
}

}  // namespace dlaut

#endif  // DLAUT_FORMAT_HPP
