#include <gtest/gtest.h>

#include "dlaut/expr.hpp"
#include "dlaut/format.hpp"
#include "dlaut/random.hpp"

using namespace dlaut;

namespace {

DiffOp op(const char* text, std::uint32_t p, std::size_t n = 1) { return expr::eval(text, Prime(p), n); }

LaurentPoly x(std::uint32_t p, std::int64_t e, std::size_t n = 1, std::size_t i = 0) {
  return LaurentPoly::variable(Prime(p), n, i, e);
}

}  // namespace

TEST(OpMul, Examples) {
  EXPECT_TRUE(op_mul(op("d1[1]", 2), op("d1[1]", 2)).is_zero());
  EXPECT_EQ(op_mul(op("d1[2]", 5), op("x1", 5)), op("x1*d1[2]", 5) + op("d1[1]", 5));
  EXPECT_TRUE(op_mul(op("d1[1] + x1^-1", 2), op("d1[1] + x1^-1", 2)).is_zero());
}

TEST(OpMul, CoefficientsStayOnTheLeft) {
  DiffOp d = op("d1[1]*x1^3", 5);
  EXPECT_EQ(d.part({1}), x(5, 3));
  EXPECT_EQ(d.part({0}), LaurentPoly::monomial(Prime(5), {2}, 3));
}

TEST(OpAct, Examples) {
  EXPECT_EQ(op_act(op("x1*d1[1]", 3), x(3, 4)), x(3, 4));
  EXPECT_EQ(op_act(op("d1[2]", 3), x(3, 5)), x(3, 3));
  random::Rng rng(4);
  auto f = random::poly(rng, Prime(3), 1, 5, 4);
  EXPECT_EQ(op_act(DiffOp::identity(Prime(3), 1), f), f);
}

TEST(OpOrder, Examples) {
  EXPECT_EQ(op_order(op("d1[2] + x1^-5*d1[1]", 7)), 2u);
  EXPECT_EQ(op_order(op("x1^3 + 1", 7)), 0u);
  EXPECT_FALSE(op_order(DiffOp(Prime(7), 1)).has_value());
  EXPECT_EQ(op_order(op("d1[2]*d2[3] + d2[4]", 7, 2)), 5u);
}

TEST(OpPow, Examples) {
  EXPECT_TRUE(op_pow(op("d1[1]", 3), 3).is_zero());
  EXPECT_EQ(op_pow(op("x1*d1[1]", 2), 2), op("x1*d1[1]", 2));
  EXPECT_EQ(op_pow(op("d1[4] + x1", 5), 0), DiffOp::identity(Prime(5), 1));
}

TEST(DividedImageFromLevels, Examples) {
  Prime p2(2), p3(3);
  std::vector<DiffOp> id2;
  for (std::uint64_t k : {1, 2, 4}) id2.push_back(DiffOp::divided(p2, 1, 0, k));
  EXPECT_EQ(divided_image_from_levels(id2, 0, 6), DiffOp::divided(p2, 1, 0, 6));

  std::vector<DiffOp> two{DiffOp::divided(p2, 1, 0, 1), DiffOp::divided(p2, 1, 0, 2)};
  EXPECT_EQ(divided_image_from_levels(two, 0, 3), DiffOp::divided(p2, 1, 0, 3));

  std::vector<DiffOp> one{DiffOp::divided(p3, 1, 0, 1)};
  EXPECT_EQ(divided_image_from_levels(one, 0, 2), DiffOp::divided(p3, 1, 0, 2));
  EXPECT_THROW(divided_image_from_levels(one, 0, 3), InsufficientPrecision);
}

TEST(NormalFormFromAction, Examples) {
  Prime p3(3), p2(2);
  // conjugate of d by x -> x^{-1}
  MonomialAction inv_conj = [&](const ExponentVector& m) { return LaurentPoly::monomial(p3, {m[0] + 1}, -m[0]); };
  EXPECT_EQ(normal_form_from_action(p3, 1, inv_conj, 1), op("2*x1^2*d1[1]", 3));

  MonomialAction ident = [&](const ExponentVector& m) { return LaurentPoly::monomial(p2, m); };
  EXPECT_EQ(normal_form_from_action(p2, 1, ident, 3), DiffOp::identity(p2, 1));

  MonomialAction shifted = [&](const ExponentVector& m) { return LaurentPoly::monomial(p2, {m[0] - 1}, m[0] + 1); };
  EXPECT_EQ(normal_form_from_action(p2, 1, shifted, 1), op("d1[1] + x1^-1", 2));
}

TEST(NormalFormFromAction, DetectsAnActionOfHigherOrder) {
  Prime p(5);
  DiffOp d = op("d1[3] + x1", 5);
  MonomialAction act = [&](const ExponentVector& m) { return op_act(d, LaurentPoly::monomial(p, m)); };
  EXPECT_THROW(normal_form_from_action(p, 1, act, 2, {32, 9}), InconsistentAction);
}

// The product rule is derived, so it is certified against composition of actions.
TEST(DiffOpProperties, ProductMatchesCompositionOfActions) {
  random::Rng rng(10);
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    for (std::size_t n : {1u, 2u}) {
      Prime p(pv);
      for (int t = 0; t < 60; ++t) {
        DiffOp a = random::op(rng, p, n, 4, 6, 12), b = random::op(rng, p, n, 4, 6, 12);
        LaurentPoly f = random::poly(rng, p, n, 4, 20);
        ASSERT_EQ(op_act(op_mul(a, b), f), op_act(a, op_act(b, f)));
      }
    }
  }
}

TEST(DiffOpProperties, Associativity) {
  random::Rng rng(12);
  for (std::uint32_t pv : {2u, 3u}) {
    Prime p(pv);
    for (int t = 0; t < 30; ++t) {
      DiffOp a = random::op(rng, p, 2, 3, 4, 6), b = random::op(rng, p, 2, 3, 4, 6), c = random::op(rng, p, 2, 3, 4, 6);
      EXPECT_EQ(op_mul(op_mul(a, b), c), op_mul(a, op_mul(b, c)));
      EXPECT_EQ(op_mul(a, b + c), op_mul(a, b) + op_mul(a, c));
    }
  }
}

TEST(DiffOpProperties, OrderIsSubadditive) {
  random::Rng rng(13);
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    Prime p(pv);
    for (int t = 0; t < 60; ++t) {
      DiffOp a = random::op(rng, p, 2, 3, 4, 10), b = random::op(rng, p, 2, 3, 4, 10);
      auto ab = op_mul(a, b).order();
      if (ab) EXPECT_LE(*ab, *a.order() + *b.order());
    }
  }
}

TEST(DiffOpProperties, DefiningRelations) {
  for (std::uint32_t pv : {2u, 3u}) {
    Prime p(pv);
    const std::uint64_t top = static_cast<std::uint64_t>(pv) * pv * pv;
    const std::size_t n = 2;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint64_t k = 0; k <= top; ++k) {
        DiffOp dk = DiffOp::divided(p, n, i, k);
        for (std::size_t j = 0; j < n; ++j) {
          DiffOp xj = DiffOp::from_poly(LaurentPoly::variable(p, n, j));
          DiffOp want = (i == j && k > 0) ? DiffOp::divided(p, n, i, k - 1) : DiffOp(p, n);
          ASSERT_EQ(commutator(dk, xj), want) << "k=" << k;
          for (std::uint64_t l = 0; l <= top; l += 3) ASSERT_TRUE(commutator(dk, DiffOp::divided(p, n, j, l)).is_zero());
        }
        for (std::uint64_t l = 0; l <= top; ++l)
          ASSERT_EQ(op_mul(dk, DiffOp::divided(p, n, i, l)),
                    DiffOp::divided(p, n, i, k + l).scaled(binom_nat_mod_p(k + l, k, p)));
      }
    }
  }
}

TEST(DiffOpProperties, NormalFormRoundTrip) {
  random::Rng rng(14);
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    for (std::size_t n : {1u, 2u}) {
      Prime p(pv);
      for (int t = 0; t < 30; ++t) {
        DiffOp d = random::op(rng, p, n, 5, 5, 9);
        MonomialAction act = [&](const ExponentVector& m) { return op_act(d, LaurentPoly::monomial(p, m)); };
        EXPECT_EQ(normal_form_from_action(p, n, act, *d.order()), d);
      }
    }
  }
}

TEST(DiffOpProperties, PthPowerOfShiftedDerivation) {
  random::Rng rng(15);
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    Prime p(pv);
    for (int t = 0; t < 30; ++t) {
      LaurentPoly f = random::poly(rng, p, 2, 4, 6);
      for (std::size_t i = 0; i < 2; ++i) {
        DiffOp base = DiffOp::divided(p, 2, i, 1) + DiffOp::from_poly(f);
        EXPECT_EQ(op_pow(base, pv), DiffOp::from_poly(f.frobenius() - f.divided_partial(i, pv - 1)));
      }
    }
  }
}

TEST(DiffOp, PolynomialCoefficientPredicate) {
  EXPECT_TRUE(op("x1^2*d1[3] + 4", 5).is_polynomial_coefficient());
  EXPECT_FALSE(op("d1[1]*x1^-1", 5).is_polynomial_coefficient());
}
