#include <gtest/gtest.h>

#include "dlaut/autgroup.hpp"
#include "dlaut/expr.hpp"
#include "dlaut/random.hpp"

using namespace dlaut;

namespace {

DiffOp op(const char* text, std::uint32_t p, std::size_t n = 1) { return expr::eval(text, Prime(p), n); }

SigmaShift shift1(std::uint32_t p, std::vector<std::uint32_t> digits) {
  return SigmaShift({PadicInt(Prime(p), std::move(digits))});
}

/// Images of tau o sigma_s o tau^{-1}.
GeneratorImages conjugated_sigma(const MonomialAut& tau, const SigmaShift& s) {
  MonomialAut inv = tau.inverse();
  GeneratorImages g = GeneratorImages::identity(s.prime(), s.nvars(), s.precision());
  for (auto& row : g.d_images)
    for (auto& img : row) img = monomial_apply(tau, sigma_apply(s, monomial_apply(inv, img)));
  return g;
}

}  // namespace

TEST(SigmaImage, Examples) {
  EXPECT_EQ(sigma_image_divided(shift1(2, {1}), 0, 1), op("d1[1] + x1^-1", 2));
  EXPECT_EQ(sigma_image_divided(shift1(2, {1, 0}), 0, 2), op("d1[2] + x1^-1*d1[1]", 2));
  EXPECT_EQ(sigma_image_divided(shift1(2, {1, 1}), 0, 2), op("d1[2] + x1^-1*d1[1] + x1^-2", 2));
  EXPECT_THROW(sigma_image_divided(shift1(2, {1}), 0, 2), InsufficientPrecision);
}

TEST(SigmaImage, ActsAsShiftedBinomial) {
  random::Rng rng(31);
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    Prime p(pv);
    for (int t = 0; t < 200; ++t) {
      SigmaShift s = random::shift(rng, p, 2, 5);
      std::size_t i = static_cast<std::size_t>(random::uniform(rng, 0, 1));
      auto k = static_cast<std::uint64_t>(random::uniform(rng, 0, pv * pv * pv));
      ExponentVector m = random::exponent(rng, 2, -60, 60);
      PadicInt shifted = PadicInt::from_int(m[i], p, 5) + s[i];
      ExponentVector out(m);
      out[i] -= static_cast<std::int64_t>(k);
      ASSERT_EQ(op_act(sigma_image_divided(s, i, k), LaurentPoly::monomial(p, m)),
                LaurentPoly::monomial(p, out, binom_padic(shifted, k)));
    }
  }
}

TEST(SigmaApply, Examples) {
  Prime p(2);
  auto s = shift1(2, {1, 1});
  EXPECT_EQ(sigma_apply(s, op("x1^3 + x1^-2", 2)), op("x1^3 + x1^-2", 2));
  EXPECT_EQ(sigma_apply(shift1(2, {1}), op("d1[1]", 2)), op("d1[1] + x1^-1", 2));
  EXPECT_EQ(sigma_apply(s, op("x1^2*d1[2]", 2)), op("x1^2*d1[2] + x1*d1[1] + 1", 2));
  EXPECT_THROW(sigma_apply(shift1(2, {1}), op("d1[2]", 2)), InsufficientPrecision);
}

TEST(SigmaApply, PreservesDefiningRelations) {
  random::Rng rng(32);
  for (std::uint32_t pv : {2u, 3u}) {
    Prime p(pv);
    const std::size_t n = 2, K = 4;
    const std::uint64_t top = static_cast<std::uint64_t>(pv) * pv * pv - 1;
    for (int t = 0; t < 3; ++t) {
      SigmaShift s = random::shift(rng, p, n, K);
      auto img = [&](const DiffOp& d) { return sigma_apply(s, d); };
      for (std::size_t i = 0; i < n; ++i) {
        for (std::uint64_t k = 1; k <= top; k += 2) {
          DiffOp dk = img(DiffOp::divided(p, n, i, k));
          for (std::size_t j = 0; j < n; ++j) {
            DiffOp xj = DiffOp::from_poly(LaurentPoly::variable(p, n, j));
            ASSERT_EQ(commutator(dk, xj), i == j ? img(DiffOp::divided(p, n, i, k - 1)) : DiffOp(p, n));
          }
          std::uint64_t l = static_cast<std::uint64_t>(random::uniform(rng, 0, static_cast<std::int64_t>(top - k)));
          ASSERT_EQ(op_mul(dk, img(DiffOp::divided(p, n, i, l))),
                    img(DiffOp::divided(p, n, i, k + l)).scaled(binom_nat_mod_p(k + l, k, p)));
          ASSERT_TRUE(commutator(dk, img(DiffOp::divided(p, n, 1 - i, l))).is_zero());
        }
      }
    }
  }
}

TEST(SigmaApply, IsMultiplicative) {
  random::Rng rng(33);
  for (std::uint32_t pv : {2u, 3u}) {
    Prime p(pv);
    for (int t = 0; t < 20; ++t) {
      SigmaShift s = random::shift(rng, p, 2, 4);
      DiffOp a = random::op(rng, p, 2, 3, 4, 8), b = random::op(rng, p, 2, 3, 4, 8);
      EXPECT_EQ(sigma_apply(s, op_mul(a, b)), op_mul(sigma_apply(s, a), sigma_apply(s, b)));
    }
  }
}

TEST(SigmaApply, PreservesOrder) {
  random::Rng rng(34);
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    Prime p(pv);
    for (int t = 0; t < 50; ++t) {
      SigmaShift s = random::shift(rng, p, 2, 5);
      DiffOp d = random::op(rng, p, 2, 4, 5, 20);
      EXPECT_EQ(sigma_apply(s, d).order(), d.order());
    }
  }
}

TEST(BuildSigma, Examples) {
  Prime p(2);
  EXPECT_EQ(build_sigma(SigmaShift::zero(p, 2, 3)), GeneratorImages::identity(p, 2, 3));
  GeneratorImages g = build_sigma(shift1(2, {1, 0}));
  EXPECT_EQ(g.d_images[0][0], op("d1[1] + x1^-1", 2));
  EXPECT_EQ(g.d_images[0][1], op("d1[2] + x1^-1*d1[1]", 2));
}

TEST(GroupLaw, SumOfShiftsComposes) {
  random::Rng rng(35);
  for (std::uint32_t pv : {2u, 3u}) {
    Prime p(pv);
    for (int t = 0; t < 10; ++t) {
      SigmaShift s = random::shift(rng, p, 2, 3), u = random::shift(rng, p, 2, 3);
      EXPECT_EQ(compose_images(build_sigma(s), build_sigma(u)), build_sigma(s + u));
    }
  }
}

TEST(MonomialApply, Examples) {
  Prime p3(3), p5(5);
  EXPECT_EQ(monomial_apply(MonomialAut::identity(p3, 1), op("x1^2*d1[4] + d1[1]", 3)), op("x1^2*d1[4] + d1[1]", 3));
  MonomialAut inversion(p3, {{-1}}, {1});
  EXPECT_EQ(monomial_apply(inversion, op("d1[1]", 3)), op("2*x1^2*d1[1]", 3));
  for (std::uint32_t lam = 1; lam < 5; ++lam) {
    MonomialAut scale(p5, {{1}}, {lam});
    EXPECT_EQ(monomial_apply(scale, op("d1[1]", 5)), op("d1[1]", 5).scaled(mod::inv(lam, 5)));
  }
}

TEST(MonomialApply, IsAHomomorphism) {
  random::Rng rng(36);
  Prime p(3);
  for (int t = 0; t < 10; ++t) {
    MonomialAut tau = random::monomial_aut(rng, p, 2);
    DiffOp a = random::op(rng, p, 2, 3, 3, 4), b = random::op(rng, p, 2, 3, 3, 4);
    EXPECT_EQ(monomial_apply(tau, op_mul(a, b)), op_mul(monomial_apply(tau, a), monomial_apply(tau, b)));
  }
}

TEST(MonomialAut, InverseAndComposition) {
  random::Rng rng(37);
  Prime p(5);
  for (int t = 0; t < 30; ++t) {
    MonomialAut a = random::monomial_aut(rng, p, 3), b = random::monomial_aut(rng, p, 3);
    EXPECT_TRUE(a.compose(a.inverse()).is_identity());
    EXPECT_TRUE(a.inverse().compose(a).is_identity());
    LaurentPoly f = random::poly(rng, p, 3, 4, 3);
    EXPECT_EQ(a.compose(b).apply(f), a.apply(b.apply(f)));
  }
  EXPECT_THROW(MonomialAut(p, {{2, 0}, {0, 1}}, {1, 1}), NotGL);
  EXPECT_THROW(MonomialAut(p, {{1}}, {0}), NotAUnit);
}

TEST(ComposeFactored, Examples) {
  random::Rng rng(38);
  Prime p(3);
  const auto id = MonomialAut::identity(p, 2);
  SigmaShift s = random::shift(rng, p, 2, 4), u = random::shift(rng, p, 2, 4);
  EXPECT_EQ(compose_factored({s, id}, {u, id}), (FactoredAut{s + u, id}));

  MonomialAut tau = random::monomial_aut(rng, p, 2);
  FactoredAut conj = compose_factored(compose_factored({SigmaShift::zero(p, 2, 4), tau}, {s, id}),
                                      {SigmaShift::zero(p, 2, 4), tau.inverse()});
  EXPECT_EQ(conj, (FactoredAut{twist(tau.matrix(), s), id}));

  FactoredAut a{s, tau};
  FactoredAut e = compose_factored(a, invert_factored(a));
  EXPECT_TRUE(e.shift.is_zero());
  EXPECT_TRUE(e.tau.is_identity());
}

// The twisting law s -> A s is certified by digit extraction from explicit images.
TEST(ComposeFactored, TwistAgreesWithExtraction) {
  random::Rng rng(39);
  for (std::uint32_t pv : {2u, 3u}) {
    Prime p(pv);
    for (int t = 0; t < 6; ++t) {
      MonomialAut tau = random::monomial_aut(rng, p, 2);
      SigmaShift s = random::shift(rng, p, 2, 3);
      EXPECT_EQ(extract_digits(conjugated_sigma(tau, s)), twist(tau.matrix(), s));
    }
  }
}

TEST(Validate, Examples) {
  Prime p(2);
  EXPECT_TRUE(validate_generator_images(GeneratorImages::identity(p, 2, 3)).all_passed());
  EXPECT_TRUE(validate_generator_images(build_sigma(shift1(2, {1, 1, 0}))).all_passed());

  GeneratorImages bad = GeneratorImages::identity(p, 1, 2);
  bad.d_images[0][0] = op("d1[1] + x1", 2);
  auto rep = validate_generator_images(bad);
  EXPECT_FALSE(rep.all_passed());
  bool pth_failed = false;
  for (const auto& name : rep.failures()) pth_failed |= name == "(d1^[p^0])^p = 0";
  EXPECT_TRUE(pth_failed);
}

TEST(Validate, LiftedMonomialAutomorphismsPass) {
  random::Rng rng(40);
  Prime p(3);
  for (int t = 0; t < 3; ++t)
    EXPECT_TRUE(validate_generator_images(lift(random::monomial_aut(rng, p, 2), 2)).all_passed());
}

TEST(Extract, Examples) {
  Prime p(2);
  EXPECT_TRUE(extract_digits(build_sigma(SigmaShift::zero(p, 1, 4))).is_zero());

  GeneratorImages g = GeneratorImages::identity(p, 1, 2);
  g.d_images[0][0] = op("d1[1] + x1^-1", 2);
  g.d_images[0][1] = op("d1[2] + x1^-1*d1[1] + x1^-2", 2);
  EXPECT_EQ(extract_digits(g), shift1(2, {1, 1}));

  GeneratorImages bad = GeneratorImages::identity(p, 1, 2);
  bad.d_images[0][0] = op("d1[1] + x1", 2);
  EXPECT_THROW(extract_digits(bad), NotSigmaForm);

  GeneratorImages moved = lift(MonomialAut(p, {{-1}}, {1}), 2);
  EXPECT_THROW(extract_digits(moved), NotInStabilizer);
}

TEST(Extract, RoundTrip) {
  random::Rng rng(41);
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    Prime p(pv);
    for (int t = 0; t < 20; ++t) {
      SigmaShift s = random::shift(rng, p, 2, 4);
      EXPECT_EQ(extract_digits(build_sigma(s)), s);
    }
  }
}

TEST(Extract, InconsistentHigherLevelIsRejected) {
  Prime p(2);
  GeneratorImages g = GeneratorImages::identity(p, 1, 2);
  g.d_images[0][0] = op("d1[1] + x1^-1", 2);  // level 1 left untouched: not a sigma
  EXPECT_THROW(extract_digits(g), NotSigmaForm);
}

TEST(Factorize, Examples) {
  random::Rng rng(42);
  Prime p(5);
  SigmaShift s = random::shift(rng, p, 1, 2);
  FactoredAut f1 = factorize(build_sigma(s));
  EXPECT_EQ(f1.shift, s);
  EXPECT_TRUE(f1.tau.is_identity());

  MonomialAut tau(p, {{1}}, {2});
  FactoredAut f2 = factorize(lift(tau, 2));
  EXPECT_TRUE(f2.shift.is_zero());
  EXPECT_EQ(f2.tau, tau);

  FactoredAut f3 = factorize(compose_images(build_sigma(s), lift(tau, 2)));
  EXPECT_EQ(f3, (FactoredAut{s, tau}));
}

TEST(Factorize, RecoversRandomPairsAndIsUnique) {
  random::Rng rng(43);
  for (std::uint32_t pv : {2u, 3u}) {
    Prime p(pv);
    for (int t = 0; t < 5; ++t) {
      SigmaShift s = random::shift(rng, p, 2, 3);
      MonomialAut tau = random::monomial_aut(rng, p, 2);
      GeneratorImages g = images_of({s, tau});
      FactoredAut f = factorize(g);
      EXPECT_EQ(f, (FactoredAut{s, tau}));
      EXPECT_EQ(images_of(f), g);
    }
  }
}

TEST(Factorize, RejectsNonUnitImages) {
  Prime p(3);
  GeneratorImages g = GeneratorImages::identity(p, 1, 2);
  g.x_images[0] = op("x1 + 1", 3);
  EXPECT_THROW(factorize(g), NotAUnit);
  g.x_images[0] = op("x1*d1[1]", 3);
  EXPECT_THROW(factorize(g), NotAUnit);
  GeneratorImages h = GeneratorImages::identity(p, 2, 1);
  h.x_images[1] = op("x1", 3, 2);
  EXPECT_THROW(factorize(h), NotGL);
}
