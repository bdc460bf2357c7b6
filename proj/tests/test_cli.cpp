#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace dlaut;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

struct GoldenCase {
  std::uint32_t p;
  std::size_t n;
  std::string expr, expected;
};

std::vector<GoldenCase> golden() {
  std::ifstream in(DLAUT_GOLDEN_DIR "/normalize.tsv"), exp(DLAUT_GOLDEN_DIR "/normalize.expected");
  std::vector<GoldenCase> out;
  std::string line, want;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string p, n, e;
    std::getline(ls, p, '\t');
    std::getline(ls, n, '\t');
    std::getline(ls, e);
    std::getline(exp, want);
    out.push_back({static_cast<std::uint32_t>(std::stoul(p)), std::stoul(n), e, want});
  }
  return out;
}

// Interprets an expression directly as a linear map on Laurent polynomials: x acts
// by multiplication, d_i^[k] by the divided partial, products compose right to left.
LaurentPoly act(const expr::Node& node, const LaurentPoly& f) {
  Prime p = f.prime();
  return std::visit(
      [&](const auto& v) -> LaurentPoly {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, expr::IntLit>) {
          std::uint32_t c = 0;
          for (char ch : v.digits) c = mod::add(mod::mul(c, 10 % p, p), static_cast<std::uint32_t>(ch - '0') % p, p);
          return f.scaled(c);
        } else if constexpr (std::is_same_v<T, expr::Var>) {
          return f * LaurentPoly::variable(p, f.nvars(), v.index - 1, v.exponent);
        } else if constexpr (std::is_same_v<T, expr::Divided>) {
          return f.divided_partial(v.index - 1, v.order);
        } else if constexpr (std::is_same_v<T, expr::Binary>) {
          if (v.op == '+') return act(*v.lhs, f) + act(*v.rhs, f);
          if (v.op == '-') return act(*v.lhs, f) - act(*v.rhs, f);
          return act(*v.lhs, act(*v.rhs, f));
        } else {
          LaurentPoly g = f;
          for (std::uint64_t k = 0; k < v.exponent; ++k) g = act(*v.base, g);
          return g;
        }
      },
      node.v);
}

}  // namespace

TEST(CliGolden, CorpusHasThirtyCases) { EXPECT_EQ(golden().size(), 30u); }

TEST(CliGolden, NormalizeReproducesStoredOutput) {
  for (const auto& c : golden()) {
    auto r = run({"normalize", c.expr, "--p", std::to_string(c.p), "--n", std::to_string(c.n)});
    EXPECT_EQ(r.code, 0) << c.expr;
    EXPECT_EQ(r.out, c.expected + "\n") << c.expr;
  }
}

// The stored outputs are certified by comparing actions on every monomial of a box
// large enough to separate operators of the orders involved.
TEST(CliGolden, StoredOutputsActLikeTheExpressions) {
  for (const auto& c : golden()) {
    Prime p(c.p);
    auto lhs = expr::parse(c.expr), rhs = expr::parse(c.expected);
    std::int64_t w = c.n == 3 ? 5 : 12;
    for (const auto& m : ExponentWindow::cube(c.n, -w, w).monomials()) {
      LaurentPoly f = LaurentPoly::monomial(p, m);
      ASSERT_EQ(act(*lhs, f), act(*rhs, f)) << c.expr << " at " << to_string(m);
    }
    EXPECT_EQ(to_string(expr::eval(c.expected, p, c.n)), c.expected);
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"normalize", "d1[2]*"}).code, 1);
  EXPECT_EQ(run({"normalize", "x3", "--n", "2"}).code, 1);
  EXPECT_EQ(run({"normalize", "x1", "--p", "4"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"verify", "everything"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"sigma", "--digits", "1", "--precision", "1", "apply", "d1[2]"}).code, 3);
  EXPECT_EQ(run({"sigma", "--digits", "1,0,1", "--precision", "2", "apply", "d1[1]"}).code, 3);
  EXPECT_EQ(run({"build-sigma", "--digits", "1", "--matrix", "2"}).code, 4);
  EXPECT_EQ(run({"build-sigma", "--digits", "1", "--lambda", "0", "--p", "3"}).code, 4);
  EXPECT_EQ(run({"sigma", "--digits", "2", "apply", "d1[1]"}).code, 1);
}

TEST(Cli, NormalizeExample) {
  auto r = run({"normalize", "d1[2]*x1", "--p", "3", "--n", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x1*d1[2] + d1[1]\n");
}

TEST(Cli, ActAndSigmaApply) {
  EXPECT_EQ(run({"--p", "3", "act", "d1[2]", "x1^5"}).out, "x1^3\n");
  EXPECT_EQ(run({"--p", "3", "act", "d1[2]", "d1[1]"}).code, 1);
  auto r = run({"--p", "2", "sigma", "--digits", "1,1", "apply", "x1^2*d1[2]"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x1^2*d1[2] + x1*d1[1] + 1\n");
}

TEST(Cli, BuildSigmaThenExtract) {
  auto dir = std::filesystem::temp_directory_path() / "dlaut_cli_test";
  std::filesystem::create_directories(dir);
  auto file = (dir / "sigma.json").string();
  ASSERT_EQ(run({"build-sigma", "--p", "2", "--digits", "1,1", "-o", file}).code, 0);
  auto r = run({"extract", file});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "s[1] = 1 + 1*2\n");

  auto m = run({"extract", file, "--format", "machine"});
  EXPECT_EQ(interchange::Json::parse(m.out)["precision"], 8);
  EXPECT_EQ(interchange::Json::parse(m.out)["digits"], interchange::Json::parse("[[1,1,0,0,0,0,0,0]]"));

  // images of x -> x^{-1}: not in the stabilizer
  ASSERT_EQ(run({"build-sigma", "--p", "2", "--digits", "0", "--matrix", "-1", "-o", file}).code, 0);
  EXPECT_EQ(run({"extract", file}).code, 4);
  std::filesystem::remove_all(dir);
}

TEST(Cli, FactorRecoversThePair) {
  auto dir = std::filesystem::temp_directory_path() / "dlaut_cli_factor";
  std::filesystem::create_directories(dir);
  auto file = (dir / "g.json").string();
  ASSERT_EQ(run({"--p", "3", "--n", "2", "--precision", "3", "build-sigma", "--digits", "1,2;0,1", "--matrix", "0,1;1,0", "--lambda",
                 "2,1", "-o", file})
                .code,
            0);
  auto r = run({"factor", file});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "s[1] = 1 + 2*3\ns[2] = 1*3\nA = [[0, 1], [1, 0]]\nlambda = [2, 1]\n");

  std::ofstream(file) << "{\"p\": 3";
  EXPECT_EQ(run({"factor", file}).code, 1);
  std::filesystem::remove_all(dir);
}

TEST(Cli, VerifyAll) {
  auto r = run({"verify", "all", "--p", "5", "--n", "2", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("result=pass"), std::string::npos);
  EXPECT_EQ(r.out.find("result=fail"), std::string::npos);
  auto m = run({"verify", "kernel", "--p", "3", "--format", "machine"});
  EXPECT_EQ(interchange::Json::parse(m.out)["result"], "pass");
}

TEST(Cli, OutputIsDeterministic) {
  auto a = run({"verify", "relations", "--p", "3", "--n", "2", "--seed", "11"});
  auto b = run({"verify", "relations", "--p", "3", "--n", "2", "--seed", "11"});
  EXPECT_EQ(a.out, b.out);
}
