#ifndef DLAUT_INTERCHANGE_HPP
#define DLAUT_INTERCHANGE_HPP

// JSON interchange for operators and generator images.
//
//   operator: {"p": 2, "n": 1, "terms": [{"coeff": 1, "x_exp": [-1], "d_exp": [0]}, ...]}
//   images:   {"p", "n", "precision", "x_images": [op...], "xinv_images": [op...],
//              "d_images": [[op for k = 0..precision-1] for each variable]}
//
// Terms are listed in ascending (d_exp, x_exp) lexicographic order, coefficients in [0, p).

#include <string>

#include <json.hpp>

#include "dlaut/autgroup.hpp"

namespace dlaut {

class FormatError : public Error {
 public:
  using Error::Error;
};

namespace interchange {

using Json = nlohmann::ordered_json;

inline Json to_json(const DiffOp& d) {
  Json terms = Json::array();
  for (const auto& [b, f] : d.parts())
    for (const auto& [g, c] : f.terms())
      terms.push_back(Json{{"coeff", c},
                           {"x_exp", std::vector<std::int64_t>(g.begin(), g.end())},
                           {"d_exp", std::vector<std::int64_t>(b.begin(), b.end())}});
  return Json{{"p", d.prime().value()}, {"n", d.nvars()}, {"terms", std::move(terms)}};
}

namespace detail {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

inline ExponentVector exponents(const Json& j, const char* key, std::size_t n) {
  auto v = field<std::vector<std::int64_t>>(j, key);
  if (v.size() != n) throw FormatError(std::string("\"") + key + "\" has wrong length");
  return ExponentVector(v.begin(), v.end());
}

inline Prime prime(const Json& j) {
  auto v = field<std::uint64_t>(j, "p");
  try {
    return Prime(v);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace detail

inline DiffOp diffop_from_json(const Json& j) {
  Prime p = detail::prime(j);
  auto n = detail::field<std::size_t>(j, "n");
  if (n == 0) throw FormatError("n must be positive");
  DiffOp d(p, n);
  if (!j.contains("terms") || !j.at("terms").is_array()) throw FormatError("\"terms\" must be an array");
  for (const auto& t : j.at("terms")) {
    auto c = detail::field<std::int64_t>(t, "coeff");
    if (c < 0 || c >= static_cast<std::int64_t>(p.value())) throw FormatError("coefficient outside [0, p)");
    auto b = detail::exponents(t, "d_exp", n);
    for (auto v : b)
      if (v < 0) throw FormatError("negative divided index");
    d.add_term(detail::exponents(t, "x_exp", n), b, mod::reduce(c, p));
  }
  return d;
}

inline Json to_json(const GeneratorImages& g) {
  Json xs = Json::array(), xinv = Json::array(), ds = Json::array();
  for (const auto& x : g.x_images) xs.push_back(to_json(x));
  for (const auto& x : g.xinv_images) xinv.push_back(to_json(x));
  for (const auto& row : g.d_images) {
    Json r = Json::array();
    for (const auto& d : row) r.push_back(to_json(d));
    ds.push_back(std::move(r));
  }
  return Json{{"p", g.p.value()},     {"n", g.n},          {"precision", g.precision},
              {"x_images", std::move(xs)}, {"xinv_images", std::move(xinv)}, {"d_images", std::move(ds)}};
}

inline GeneratorImages images_from_json(const Json& j) {
  Prime p = detail::prime(j);
  auto n = detail::field<std::size_t>(j, "n");
  auto precision = detail::field<std::size_t>(j, "precision");
  if (n == 0 || precision == 0) throw FormatError("n and precision must be positive");
  GeneratorImages g{p, n, precision, {}, {}, {}};
  auto read_op = [&](const Json& o) {
    DiffOp d = diffop_from_json(o);
    if (!(d.prime() == p) || d.nvars() != n) throw FormatError("image lives in a different ring");
    return d;
  };
  auto list = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != n)
      throw FormatError(std::string("\"") + key + "\" must list one image per variable");
    return j.at(key);
  };
  for (const auto& o : list("x_images")) g.x_images.push_back(read_op(o));
  for (const auto& o : list("xinv_images")) g.xinv_images.push_back(read_op(o));
  for (const auto& row : list("d_images")) {
    if (!row.is_array() || row.size() != precision)
      throw FormatError("each d_images row must have precision entries");
    std::vector<DiffOp> r;
    for (const auto& o : row) r.push_back(read_op(o));
    g.d_images.push_back(std::move(r));
  }
  return g;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace interchange
}  // namespace dlaut

#endif  // DLAUT_INTERCHANGE_HPP
