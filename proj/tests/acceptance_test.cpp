// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "fpgrank/fplinalg.hpp"
#include "fpgrank/free_series.hpp"
#include "fpgrank/localization.hpp"
#include "fpgrank/quotient.hpp"
#include "fpgrank/rank_approx.hpp"
#include "fpgrank/skew.hpp"
#include "generators.hpp"

using namespace fpgrank;

namespace {

const char* kZp2 = "p = 2\ngens = g\n";
const char* kFree2 = "p = 2\ngens = x, y\n";
const char* kMild1 = "p = 2\ngens = x, g\nrels = [x,g] = x^2\n";

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double max_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= max_seconds) {
    o.ok = false;
    o.detail += " (over time budget)";
  }
  if (!o.ok) ++failures;
  std::printf("criterion %2d: %s  %s  [%.2fs < %.0fs]  %s\n", id, o.ok ? "PASS" : "FAIL", title, secs, max_seconds,
              o.detail.c_str());
}

std::string join(const std::vector<Rational>& v) {
  std::string s;
  for (const auto& r : v) s += (s.empty() ? "" : ", ") + r.str();
  return s;
}

GroupRingMatrix minus_one(const GroupPresentation& pres, const std::string& gen) {
  GroupRingMatrix m(pres.p, 1, 1);
  m.add_term(0, 0, 1, parse_word(gen, pres.generators));
  m.add_term(0, 0, -1, GroupWord::identity());
  return m;
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i)
    if (i != skip) ids.push_back(i);
  return ids;
}

Outcome procyclic() {
  const auto pres = parse_presentation(kZp2);
  const auto r = rank_sequence(pres, minus_one(pres, "g"), {2, 3, 5, 9});
  std::vector<Rational> got;
  std::vector<std::size_t> orders;
  for (const auto& l : r.levels) {
    got.push_back(l.value);
    orders.push_back(l.order);
  }
  const bool ok = got == std::vector<Rational>{Rational(1, 2), Rational(3, 4), Rational(7, 8), Rational(15, 16)} &&
                  orders == std::vector<std::size_t>{2, 4, 8, 16};
  return {ok, "values " + join(got) + " (exact)"};
}

Outcome free_row() {
  const auto pres = parse_presentation(kFree2);
  GroupRingMatrix a(2, 1, 2);
  a.add_term(0, 0, 1, GroupWord::generator(0));
  a.add_term(0, 0, -1, GroupWord::identity());
  a.add_term(0, 1, 1, GroupWord::generator(1));
  a.add_term(0, 1, -1, GroupWord::identity());
  const auto r = rank_sequence(pres, a, {2, 3});
  const auto d = integrality_report(r);
  std::vector<Rational> got;
  for (const auto& l : r.levels) got.push_back(l.value);
  const bool ok = got == std::vector<Rational>{Rational(3, 4), Rational(31, 32)} && d.nearest == 1 &&
                  d.final_gap == Rational(1, 32);
  return {ok, "values " + join(got) + ", final gap " + d.final_gap.str() + " (exact)"};
}

Outcome lie_oracle() {
  const auto pres = parse_presentation(kFree2);
  std::string detail = "orders";
  bool ok = true;
  const std::vector<std::size_t> expected{4, 32, 128, 8192};
  for (int k = 2; k <= 5; ++k) {
    const std::size_t order = enumerate_quotient(build_quotient(pres, k), 20000).order();
    ok = ok && order == expected[k - 2] && BigInt(order) == restricted_lie_order_oracle(2, 2, k).order;
    detail += " " + std::to_string(order);
  }
  return {ok, detail + " (exact)"};
}

Outcome hilbert() {
  bool ok = true;
  std::string detail;
  for (const char* text : {kFree2, kZp2, kMild1}) {
    const auto pres = parse_presentation(text);
    const auto info = validate_flag(pres);
    const auto dims = build_quotient(pres, 6)->graded_dims();
    const auto series = hilbert_mild_flag(info, 6);
    ok = ok && info.is_mild && dims == series;
    std::string d;
    for (auto v : dims) d += (d.empty() ? "" : ",") + std::to_string(v);
    detail += "[" + d + "] ";
  }
  const auto mild = build_quotient(parse_presentation(kMild1), 6)->graded_dims();
  ok = ok && mild == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6};
  return {ok, detail + "(exact)"};
}

Outcome skew_decomposition() {
  bool ok = true;
  std::string detail;
  for (const char* text : {kMild1, kFree2}) {
    const auto pres = parse_presentation(text);
    const auto r = check_decomposition(pres, 6, 100, 2024);
    ok = ok && r.passed && r.checked >= 102;
    detail += std::to_string(r.checked) + " pairs " + (r.passed ? "ok" : r.counterexample) + "; ";

    const auto info = validate_flag(pres);
    const auto qa = build_quotient(pres, 6);
    const auto ctx = SkewContext::build(qa, info);
    const auto g = qa->generator_image(info.distinguished_generator);
    const auto x = qa->generator_image(info.kernel_generators.front());
    ok = ok && ctx.from_skew(skew_mul(ctx.to_skew(g), ctx.to_skew(x), ctx)) == qa->multiply(g, x);
  }
  return {ok, detail + "directed pair (g, x) included"};
}

Outcome derivation_laws() {
  const auto pres = parse_presentation(kMild1);
  const auto qa = build_quotient(pres, 6);
  const auto ctx = SkewContext::build(qa, validate_flag(pres));
  const auto& sd = ctx.sigma_delta();
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<unsigned> bit(0, 1);
  auto random_n = [&] {
    NCoords a(ctx.n_dim());
    for (auto& c : a) c = Residue(bit(rng));
    return a;
  };
  int law_samples = 0, raise_samples = 0;
  bool ok = true;
  for (; law_samples < 200; ++law_samples) {
    const NCoords a = random_n(), b = random_n();
    ok = ok && sd.delta(ctx.n_multiply(a, b)) ==
                   ctx.n_add(ctx.n_multiply(sd.delta(a), b), ctx.n_multiply(sd.sigma(a), sd.delta(b)));
    ok = ok && sd.sigma(sd.delta(a)) == sd.delta(sd.sigma(a));
  }
  while (raise_samples < 200) {
    const NCoords a = random_n();
    const auto before = qa->min_degree(ctx.n_to_algebra(a));
    if (!before) continue;
    const auto after = qa->min_degree(ctx.n_to_algebra(sd.delta(a)));
    ok = ok && (!after || *after > *before);
    ++raise_samples;
  }
  return {ok, std::to_string(law_samples) + " law samples, " + std::to_string(raise_samples) +
                  " valuation samples, N-part dim " + std::to_string(ctx.n_dim()) + " (exact)"};
}

Outcome smat_suite() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim(1, 32);
  std::uniform_real_distribution<double> density(0.02, 0.6);
  int matrices = 0;
  bool ok = true;
  for (unsigned p : {2u, 3u}) {
    ok = ok && rank(FpMatrix(p, 64, 64)) == 0 && rank(FpMatrix::identity(p, 64)) == 64;
    for (int i = 0; i < 300; ++i) {
      const std::size_t n = dim(rng), m = dim(rng), l = dim(rng);
      const FpMatrix a = gen::random_matrix(rng, p, n, m, density(rng));
      const FpMatrix b = gen::random_matrix(rng, p, m, l, density(rng));
      const FpMatrix c = gen::random_matrix(rng, p, n, l, density(rng));
      matrices += 3;
      const std::size_t ra = rank(a), rb = rank(b);
      ok = ok && rank(a * b) <= std::min(ra, rb);
      ok = ok && rank(block_diagonal(a, b)) == ra + rb;
      ok = ok && rank(block_upper(a, c, b)) >= ra + rb;
      if (n > 1) ok = ok && rank(a.submatrix(all_but(n, n / 2), all_but(m + 1, m))) <= ra;
      if (m > 1) ok = ok && rank(a.submatrix(all_but(n + 1, n), all_but(m, 0))) <= ra;
      if (p == 2) ok = ok && ra == rank_generic(a) && rank(c) == rank(c.with_storage(false));
    }
    for (int i = 0; i < 50; ++i) {
      const FpMatrix big = gen::random_matrix(rng, p, 64, 64, density(rng));
      ++matrices;
      ok = ok && rank(big) == rank(big.transposed());
      if (p == 2) ok = ok && rank(big) == rank_generic(big);
    }
  }
  return {ok, std::to_string(matrices) + " random matrices over F_2 and F_3 up to 64x64 (exact)"};
}

Outcome localization_laws() {
  const BaseRing ring = BaseRing::truncated(2, 4);
  const EvalTarget target = identity_target(ring);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> size(1, 3);
  auto unit_lower = [&](std::size_t n) {
    RingMatrix m = RingMatrix::identity(ring, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) m.at(i, j) = ring.random(rng);
    return m;
  };
  bool ok = true;
  int triples = 0;
  for (; triples < 600; triples += 2) {
    const LocTriple a = random_triple(ring, size(rng), rng), b = random_triple(ring, size(rng), rng);
    const auto ea = loc_eval(a, target), eb = loc_eval(b, target);
    ok = ok && loc_eval(loc_add(a, b), target) == ring.add(ea, eb);
    ok = ok && loc_eval(loc_mul(a, b), target) == ring.mul(ea, eb);
    ok = ok && loc_eval(r1_transform(a, unit_lower(a.size()), unit_lower(a.size())), target) == ea;
  }
  return {ok, std::to_string(triples) + " random triples over F_2[t]/(t^4), sizes <= 3 (exact)"};
}

Outcome integrality_trend() {
  bool ok = true;
  std::string detail;
  const std::vector<std::pair<const char*, const char*>> cases{{kMild1, "x"}, {kZp2, "g"}};
  for (const auto& [text, gen] : cases) {
    const auto pres = parse_presentation(text);
    const auto r = rank_sequence(pres, minus_one(pres, gen), {2, 3, 5, 9});
    const auto d = integrality_report(r);
    ok = ok && d.strictly_decreasing && d.final_gap <= Rational(1, 8) && !r.truncated;
    detail += std::string(gen) + "-1: gaps " + join(d.gaps) + "; ";
  }
  return {ok, detail + "final gap <= 1/8"};
}

Outcome weight_functions() {
  std::mt19937_64 rng(10);
  auto ctx = std::make_shared<const SeriesContext>(2, 8, std::vector<int>{1, 1, 2, 3});
  int pairs = 0, iota = 0;
  bool ok = true;
  for (int i = 0; i < 10000 && pairs < 600; ++i) {
    const auto f = gen::random_poly(rng, ctx, 0), g = gen::random_poly(rng, ctx, 0);
    if (f.is_zero() || g.is_zero()) continue;
    if (weight(f).exponent() + weight(g).exponent() >= ctx->cutoff) continue;
    ok = ok && weight(f * g) == weight(f) * weight(g);
    ++pairs;
  }
  for (int i = 0; i < 10000 && iota < 600; ++i) {
    const auto f = gen::random_poly(rng, ctx, 0);
    if (f.is_zero()) continue;
    ok = ok && magnus_iota(f, ctx->weights).t_valuation() == weight(f).exponent();
    ++iota;
  }
  ok = ok && pairs >= 500 && iota >= 500;
  return {ok, std::to_string(pairs) + " product pairs, " + std::to_string(iota) + " iota samples (exact)"};
}

}  // namespace

int main() {
  criterion(1, "procyclic Jordan sequence 1/2, 3/4, 7/8, 15/16", 1, procyclic);
  criterion(2, "free rank-2 row (x-1, y-1): 3/4, 31/32", 10, free_row);
  criterion(3, "free rank-2 quotient orders vs restricted Lie oracle", 60, lie_oracle);
  criterion(4, "graded dimensions vs mild flag Hilbert series up to k = 6", 30, hilbert);
  criterion(5, "skew power series decomposition at k = 6", 30, skew_decomposition);
  criterion(6, "sigma-derivation laws on the N-part", 30, derivation_laws);
  criterion(7, "Sylvester rank axioms and packed/generic agreement", 10, smat_suite);
  criterion(8, "localization triple laws", 5, localization_laws);
  criterion(9, "integrality trend with final gap <= 1/8", 30, integrality_trend);
  criterion(10, "weight multiplicativity and iota valuation", 30, weight_functions);
  std::printf("%s: %d criterion failures\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
