#ifndef DLAUT_TOOLS_CLI_HPP
#define DLAUT_TOOLS_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlaut/dlaut.hpp"
#include "dlaut/interchange.hpp"

namespace dlaut::cli {

inline constexpr std::size_t kDefaultPrecision = 8;

enum Exit : int { kOk = 0, kUsage = 1, kVerifyFailed = 2, kPrecision = 3, kInvalidAut = 4 };

struct Session {
  std::uint64_t p = 2;
  std::size_t n = 1;
  std::optional<std::size_t> precision;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> window;
  std::optional<std::uint64_t> order_bound;
  std::size_t trials = 100;
  std::string format = "text";

  bool machine() const { return format == "machine"; }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::int64_t to_int(const std::string& tok, const std::string& what) {
  std::size_t pos = 0;
  std::int64_t v = 0;
  std::string t = tok;
  t.erase(0, t.find_first_not_of(' '));
  t.erase(t.find_last_not_of(' ') + 1);
  try {
    v = std::stoll(t, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad " + what + " entry \"" + tok + "\"");
  }
  if (pos != t.size()) throw UsageError("bad " + what + " entry \"" + tok + "\"");
  return v;
}

/// "1,0,1;2" -> {{1,0,1},{2}}: least significant digit first, ';' between variables.
inline std::vector<std::vector<std::uint32_t>> parse_digits(const std::string& text, Prime p, std::size_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& var : split(text, ';')) {
    std::vector<std::uint32_t> ds;
    for (const auto& tok : split(var, ',')) {
      auto v = to_int(tok, "digit");
      if (v < 0 || v >= static_cast<std::int64_t>(p.value()))
        throw UsageError("digit " + std::to_string(v) + " is not in [0, p)");
      ds.push_back(static_cast<std::uint32_t>(v));
    }
    out.push_back(std::move(ds));
  }
  if (out.size() != n)
    throw UsageError("--digits lists " + std::to_string(out.size()) + " variables, expected " + std::to_string(n));
  return out;
}

inline SigmaShift shift_from(const Session& s, const std::string& digits) {
  Prime p(s.p);
  return SigmaShift::from_digits(p, s.precision.value_or(kDefaultPrecision), parse_digits(digits, p, s.n));
}

/// "a,b;c,d" -> rows; column j is the exponent vector of the image of x_j.
inline IntMatrix parse_matrix(const std::string& text, std::size_t n) {
  IntMatrix a;
  for (const auto& row : split(text, ';')) {
    std::vector<std::int64_t> r;
    for (const auto& tok : split(row, ',')) r.push_back(to_int(tok, "matrix"));
    if (r.size() != n) throw UsageError("matrix rows must have n entries");
    a.push_back(std::move(r));
  }
  if (a.size() != n) throw UsageError("matrix must have n rows");
  return a;
}

inline std::vector<std::uint32_t> parse_lambda(const std::string& text, Prime p, std::size_t n) {
  std::vector<std::uint32_t> out;
  for (const auto& tok : split(text, ',')) out.push_back(mod::reduce(to_int(tok, "lambda"), p));
  if (out.size() != n) throw UsageError("--lambda must have n entries");
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline GeneratorImages read_images(const std::string& path) {
  interchange::Json j;
  try {
    j = interchange::Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  return interchange::images_from_json(j);
}

inline std::string matrix_string(const IntMatrix& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < a[i].size(); ++j) s += (j ? ", " : "") + std::to_string(a[i][j]);
    s += "]";
  }
  return s + "]";
}

inline interchange::Json digits_json(const SigmaShift& s) {
  interchange::Json d = interchange::Json::array();
  for (const auto& c : s.components()) d.push_back(c.digits());
  return d;
}

inline void print_shift(std::ostream& out, const SigmaShift& s) {
  for (std::size_t i = 0; i < s.nvars(); ++i) out << "s[" << i + 1 << "] = " << padic_expansion(s[i]) << "\n";
}

/// Largest K with p^(K-1) <= 243, so the top level image stays desk-sized.
inline std::size_t auto_precision(std::uint64_t p) {
  std::size_t K = 1;
  for (std::uint64_t pw = p; pw <= 243; pw *= p) ++K;
  return K;
}

inline interchange::Json report_json(const SuiteReport& r) {
  interchange::Json blocks = interchange::Json::array();
  for (const auto& b : r.blocks) {
    interchange::Json o{{"name", b.name}, {"checked", b.checked}, {"failed", b.failed}};
    o["first_counterexample"] = b.first_counterexample ? interchange::Json(*b.first_counterexample) : nullptr;
    blocks.push_back(std::move(o));
  }
  return {{"suite", r.suite}, {"parameters", r.parameters}, {"blocks", std::move(blocks)},
          {"result", r.passed() ? "pass" : "fail"}};
}

}  // namespace detail

inline std::vector<SuiteReport> run_verify(const Session& s, const std::string& which) {
  Prime p(s.p);
  std::size_t K = s.precision.value_or(detail::auto_precision(s.p));
  std::uint64_t bound = s.order_bound.value_or(static_cast<std::uint64_t>(s.p) * s.p * s.p);
  std::int64_t w = s.window.value_or(2 * static_cast<std::int64_t>(s.p));
  std::size_t fewer = std::max<std::size_t>(1, s.trials / 2);
  std::vector<SuiteReport> out;
  bool all = which == "all";
  if (all || which == "relations") out.push_back(relation_suite(p, s.n, bound, s.trials, s.seed));
  if (all || which == "kernel") out.push_back(kernel_suite(p, s.n, w));
  if (all || which == "corollary") out.push_back(corollary_suite(p, s.n, s.trials, s.seed));
  if (all || which == "grouplaw") out.push_back(grouplaw_suite(p, s.n, K, fewer, s.seed));
  if (all || which == "roundtrip") out.push_back(roundtrip_suite(p, s.n, K, fewer, s.seed));
  return out;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact arithmetic with differential operators on Laurent polynomials in characteristic p", "dlaut"};
  app.fallthrough();
  app.require_subcommand(1);

  Session s;
  app.add_option("--p", s.p, "characteristic (a prime below 65536)")->capture_default_str();
  app.add_option("--n", s.n, "number of variables")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--precision", s.precision, "number of p-adic digits K (default 8; verify defaults to the largest K with p^(K-1) <= 243)")->check(CLI::PositiveNumber);
  app.add_option("--seed", s.seed, "random seed for verification suites")->capture_default_str();
  app.add_option("--window", s.window, "kernel window half-width (default 2p)")->check(CLI::PositiveNumber);
  app.add_option("--order-bound", s.order_bound, "largest divided index in the relation suite (default p^3)");
  app.add_option("--trials", s.trials, "random trials per suite")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--format", s.format, "output format")->capture_default_str()->check(CLI::IsMember({"text", "machine"}));

  std::string expr_text, poly_text, digits, file, outfile, matrix, lambda, suite;

  auto* normalize = app.add_subcommand("normalize", "print the normal form of an operator expression");
  normalize->add_option("expr", expr_text)->required();

  auto* act = app.add_subcommand("act", "apply an operator to a Laurent polynomial");
  act->add_option("expr", expr_text)->required();
  act->add_option("laurent", poly_text)->required();

  auto* sigma = app.add_subcommand("sigma", "the automorphism sigma_s");
  sigma->add_option("--digits", digits, "p-adic digits, least significant first, ';' between variables")->required();
  sigma->require_subcommand(1);
  auto* sigma_apply_cmd = sigma->add_subcommand("apply", "apply sigma_s to an operator");
  sigma_apply_cmd->add_option("expr", expr_text)->required();

  auto* build = app.add_subcommand("build-sigma", "write generator images of sigma_s (optionally composed with tau)");
  build->add_option("--digits", digits, "p-adic digits, least significant first, ';' between variables")->required();
  build->add_option("--matrix", matrix, "exponent matrix of tau, rows separated by ';'");
  build->add_option("--lambda", lambda, "scalars of tau, comma separated");
  build->add_option("-o,--output", outfile, "output file (default stdout)");

  auto* extract = app.add_subcommand("extract", "recover the digits of s from images of sigma_s");
  extract->add_option("images", file)->required()->check(CLI::ExistingFile);

  auto* factor = app.add_subcommand("factor", "factor images as sigma_s o tau");
  factor->add_option("images", file)->required()->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("suite", suite)->required()->check(
      CLI::IsMember({"relations", "kernel", "corollary", "grouplaw", "roundtrip", "all"}));

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  auto emit = [&](const DiffOp& d) {
    if (s.machine())
      out << interchange::dump(interchange::to_json(d));
    else
      out << to_string(d) << "\n";
  };

  try {
    Prime p(s.p);
    if (*normalize) {
      emit(expr::eval(expr_text, p, s.n));
    } else if (*act) {
      DiffOp d = expr::eval(expr_text, p, s.n);
      DiffOp f = expr::eval(poly_text, p, s.n);
      if (!f.is_zero() && f.order() != 0u) throw UsageError("second argument must be a Laurent polynomial");
      emit(DiffOp::from_poly(op_act(d, f.part(zero_exponent(s.n)))));
    } else if (*sigma_apply_cmd) {
      SigmaShift sh = detail::shift_from(s, digits);
      emit(dlaut::sigma_apply(sh, expr::eval(expr_text, p, s.n)));
    } else if (*build) {
      SigmaShift sh = detail::shift_from(s, digits);
      MonomialAut tau = MonomialAut::identity(p, s.n);
      if (!matrix.empty() || !lambda.empty()) {
        IntMatrix a = matrix.empty() ? MonomialAut::identity(p, s.n).matrix() : detail::parse_matrix(matrix, s.n);
        auto lam = lambda.empty() ? std::vector<std::uint32_t>(s.n, 1) : detail::parse_lambda(lambda, p, s.n);
        tau = MonomialAut(p, std::move(a), std::move(lam));
      }
      std::string text = interchange::dump(interchange::to_json(images_of({sh, tau})));
      if (outfile.empty()) {
        out << text;
      } else {
        std::ofstream f(outfile);
        if (!(f << text)) throw UsageError("cannot write " + outfile);
      }
    } else if (*extract) {
      SigmaShift sh = extract_digits(detail::read_images(file));
      if (s.machine())
        out << interchange::dump({{"p", s.p}, {"n", sh.nvars()}, {"precision", sh.precision()},
                                  {"digits", detail::digits_json(sh)}});
      else
        detail::print_shift(out, sh);
    } else if (*factor) {
      FactoredAut f = factorize(detail::read_images(file));
      if (s.machine()) {
        out << interchange::dump({{"p", f.tau.prime().value()},
                                  {"n", f.shift.nvars()},
                                  {"precision", f.shift.precision()},
                                  {"digits", detail::digits_json(f.shift)},
                                  {"matrix", f.tau.matrix()},
                                  {"lambda", f.tau.lambda()}});
      } else {
        detail::print_shift(out, f.shift);
        out << "A = " << detail::matrix_string(f.tau.matrix()) << "\n";
        out << "lambda = [";
        for (std::size_t j = 0; j < f.tau.lambda().size(); ++j) out << (j ? ", " : "") << f.tau.lambda()[j];
        out << "]\n";
      }
    } else if (*verify) {
      auto reps = run_verify(s, suite);
      bool ok = true;
      interchange::Json all = interchange::Json::array();
      for (const auto& r : reps) {
        ok = ok && r.passed();
        if (s.machine())
          all.push_back(detail::report_json(r));
        else
          out << r.text();
      }
      if (s.machine()) out << interchange::dump({{"reports", std::move(all)}, {"result", ok ? "pass" : "fail"}});
      return ok ? kOk : kVerifyFailed;
    }
    return kOk;
  } catch (const InsufficientPrecision& e) {
    err << "error: " << e.what() << "\n";
    return kPrecision;
  } catch (const NotAUnit& e) {
    err << "invalid automorphism: " << e.what() << "\n";
    return kInvalidAut;
  } catch (const NotGL& e) {
    err << "invalid automorphism: " << e.what() << "\n";
    return kInvalidAut;
  } catch (const NotSigmaForm& e) {
    err << "invalid automorphism: " << e.what() << "\n";
    return kInvalidAut;
  } catch (const NotInStabilizer& e) {
    err << "invalid automorphism: " << e.what() << "\n";
    return kInvalidAut;
  } catch (const InconsistentAction& e) {
    err << "invalid automorphism: " << e.what() << "\n";
    return kInvalidAut;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace dlaut::cli

#endif  // DLAUT_TOOLS_CLI_HPP
