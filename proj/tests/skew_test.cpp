#include "fpgrank/skew.hpp"

#include <gtest/gtest.h>

#include <random>

#include "fpgrank/errors.hpp"
#include "generators.hpp"

using namespace fpgrank;

namespace {

const char* kMild1 = "p = 2\ngens = x, g\nrels = [x,g] = x^2\n";
const char* kFree2 = "p = 2\ngens = x, y\n";
const char* kMild2 = "p = 2\ngens = x, y, g\nrels = [x,g] = [y,x]\n";

SkewContext context(const char* text, int k) {
  const auto pres = parse_presentation(text);
  return SkewContext::build(build_quotient(pres, k), validate_flag(pres));
}

NCoords random_n(std::mt19937_64& rng, const SkewContext& ctx) {
  std::uniform_int_distribution<unsigned> coef(0, ctx.algebra().p() - 1);
  NCoords a(ctx.n_dim());
  for (auto& c : a) c = Residue(coef(rng));
  return a;
}

QuotientAlgebra::Element random_element(std::mt19937_64& rng, const QuotientAlgebra& qa) {
  std::uniform_int_distribution<unsigned> coef(0, qa.p() - 1);
  auto e = qa.zero();
  for (auto& c : e) c = Residue(coef(rng));
  return e;
}

}  // namespace

TEST(SkewContext, BuildsOnMildPresentations) {
  for (const char* text : {kMild1, kFree2, kMild2}) {
    const auto ctx = context(text, 4);
    EXPECT_GT(ctx.n_dim(), 0u);
    EXPECT_EQ(ctx.n_valuation(0), 0);
  }
}

TEST(SkewContext, RejectsNonMild) {
  const auto pres = parse_presentation("p = 2\ngens = x, g\nrels = [x,g,g] = x^4\n");
  EXPECT_THROW(SkewContext::build(build_quotient(pres, 4), validate_flag(pres)), std::invalid_argument);
  EXPECT_THROW(check_decomposition(pres, 4, 1), std::invalid_argument);
}

TEST(SkewContext, RoundTripAndProductAgreeWithAlgebra) {
  std::mt19937_64 rng(79);
  for (const char* text : {kMild1, kFree2}) {
    const auto ctx = context(text, 5);
    const auto& qa = ctx.algebra();
    for (int i = 0; i < 30; ++i) {
      const auto u = random_element(rng, qa), v = random_element(rng, qa);
      const auto fu = ctx.to_skew(u), fv = ctx.to_skew(v);
      EXPECT_EQ(ctx.from_skew(fu), u);
      EXPECT_EQ(ctx.from_skew(skew_mul(fu, fv, ctx)), qa.multiply(u, v));
    }
  }
}

TEST(SkewContext, CommutationRuleForS) {
  const auto ctx = context(kMild1, 6);
  const auto& qa = ctx.algebra();
  // a s = s sigma(a) + delta(a) with a = x - 1
  const NCoords a = ctx.algebra_to_n(qa.sub(qa.generator_image(0), qa.one()));
  SkewSeries s{6, {}};
  s = ctx.canonical(s);
  s.coefficients[1] = ctx.n_one();
  SkewSeries fa{6, {a}};
  const SkewSeries prod = skew_mul(ctx.canonical(fa), s, ctx);
  SkewSeries expected = ctx.canonical(SkewSeries{6, {ctx.sigma_delta().delta(a), ctx.sigma_delta().sigma(a)}});
  EXPECT_EQ(prod, expected);
}

TEST(SkewContext, SkewMulIsAssociative) {
  std::mt19937_64 rng(83);
  const auto ctx = context(kMild1, 5);
  const auto& qa = ctx.algebra();
  for (int i = 0; i < 20; ++i) {
    const auto f = ctx.to_skew(random_element(rng, qa)), g = ctx.to_skew(random_element(rng, qa)),
               h = ctx.to_skew(random_element(rng, qa));
    EXPECT_EQ(skew_mul(skew_mul(f, g, ctx), h, ctx), skew_mul(f, skew_mul(g, h, ctx), ctx));
  }
}

TEST(SigmaDelta, TwistedDerivationLaws) {
  std::mt19937_64 rng(89);
  const auto ctx = context(kMild1, 6);
  const auto& sd = ctx.sigma_delta();
  for (int i = 0; i < 100; ++i) {
    const NCoords a = random_n(rng, ctx), b = random_n(rng, ctx);
    EXPECT_EQ(sd.delta(ctx.n_multiply(a, b)),
              ctx.n_add(ctx.n_multiply(sd.delta(a), b), ctx.n_multiply(sd.sigma(a), sd.delta(b))));
    EXPECT_EQ(sd.sigma(ctx.n_multiply(a, b)), ctx.n_multiply(sd.sigma(a), sd.sigma(b)));
    EXPECT_EQ(sd.sigma(sd.delta(a)), sd.delta(sd.sigma(a)));
  }
}

TEST(SigmaDelta, DeltaRaisesValuation) {
  std::mt19937_64 rng(97);
  const auto ctx = context(kMild1, 6);
  int checked = 0;
  while (checked < 100) {
    const NCoords a = random_n(rng, ctx);
    const auto v = ctx.n_min_valuation(a);
    if (!v) continue;
    const auto dv = ctx.n_min_valuation(ctx.sigma_delta().delta(a));
    if (dv) EXPECT_GT(*dv, *v);
    ++checked;
  }
}

TEST(SigmaDelta, SigmaIsConjugationByG) {
  const auto ctx = context(kFree2, 5);
  const auto& qa = ctx.algebra();
  const int g = ctx.flag().distinguished_generator;
  const auto x = qa.generator_image(ctx.flag().kernel_generators[0]);
  const auto conj = qa.multiply(qa.multiply(qa.generator_inverse_image(g), x), qa.generator_image(g));
  EXPECT_EQ(ctx.n_to_algebra(ctx.sigma_delta().sigma(ctx.algebra_to_n(x))), conj);
}

TEST(CheckDecomposition, PassesOnPresets) {
  for (const char* text : {kMild1, kFree2}) {
    const auto r = check_decomposition(parse_presentation(text), 6, 100, 5);
    EXPECT_TRUE(r.passed) << r.counterexample;
    EXPECT_EQ(r.checked, 102u);
  }
  EXPECT_TRUE(check_decomposition(parse_presentation(kMild2), 4, 30).passed);
  EXPECT_TRUE(check_decomposition(parse_presentation("p = 3\ngens = x, g\n"), 4, 30).passed);
}

TEST(KernelVariables, WeightsFollowDepth) {
  const auto info = validate_flag(parse_presentation(kMild2));
  const auto vars = kernel_variables(info, 4);
  ASSERT_EQ(vars.size(), 4u);
  EXPECT_EQ(vars[0].generator, 0);
  EXPECT_EQ(vars[0].weight, 1);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(vars[1 + j].generator, 1);
    EXPECT_EQ(vars[1 + j].depth, j);
    EXPECT_EQ(vars[1 + j].weight, 1 + j);
  }
}

TEST(LambdaExtension, IotaCommutesWithSigma) {
  std::mt19937_64 rng(101);
  for (const char* text : {kMild1, kMild2, kFree2}) {
    const auto info = validate_flag(parse_presentation(text));
    const auto ext = extend_sigma_delta_lambda(info, 2, 6);
    const auto w = ext.weights();
    for (int i = 0; i < 50; ++i) {
      const auto f = gen::random_poly(rng, ext.magnus_context, 0);
      EXPECT_EQ(magnus_iota(substitute(f, ext.magnus_sigma), w), ext.sigma(magnus_iota(f, w))) << text;
    }
  }
}

TEST(LambdaExtension, DeltaLandsInTLambda) {
  std::mt19937_64 rng(103);
  const auto info = validate_flag(parse_presentation(kMild2));
  const auto ext = extend_sigma_delta_lambda(info, 2, 6);
  const std::size_t nv = ext.variables.size();
  std::uniform_int_distribution<int> var(0, int(nv) - 1), len(0, 3), te(0, 5);
  for (int i = 0; i < 100; ++i) {
    LambdaSeries f(2, 6, nv);
    for (int t = 0; t < 4; ++t) {
      std::vector<int> letters(std::size_t(len(rng)));
      for (auto& l : letters) l = var(rng);
      f.add_term(LambdaMonomial{te(rng), letters}, 1);
    }
    const auto d = ext.delta(f);
    if (!d.is_zero()) EXPECT_GE(*d.t_valuation(), 1);
    EXPECT_TRUE(ext.delta(LambdaSeries::t_power(2, 6, nv, 1)).is_zero());
  }
}

TEST(LambdaExtension, SigmaOfKernelVariable) {
  const auto info = validate_flag(parse_presentation(kMild1));
  const auto ext = extend_sigma_delta_lambda(info, 2, 4);
  // sigma(x) = x^3 in the Magnus algebra: sigma(X) = X + X^2 + X^3 mod 2, so sigma(a) = a + a^2 t + a^3 t^2
  LambdaSeries expected(2, 4, 1);
  expected.add_term(LambdaMonomial{0, {0}}, 1);
  expected.add_term(LambdaMonomial{1, {0, 0}}, 1);
  expected.add_term(LambdaMonomial{2, {0, 0, 0}}, 1);
  EXPECT_EQ(ext.sigma_images[0], expected);
  EXPECT_THROW(extend_sigma_delta_lambda(validate_flag(parse_presentation("p = 2\ngens = x, g\nrels = [x,g,g] = x^4\n")), 2, 4),
               std::invalid_argument);
}
