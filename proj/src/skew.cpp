#include "fpgrank/skew.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fpgrank/errors.hpp"

namespace fpgrank {

NCoords SigmaDelta::sigma(const NCoords& a) const {
  NCoords r(a.size(), 0);
  for (std::size_t b = 0; b < a.size(); ++b) {
    if (a[b] == 0) continue;
    const NCoords& col = sigma_columns[b];
    for (std::size_t c = 0; c < r.size(); ++c) r[c] = Residue((r[c] + unsigned(a[b]) * col[c]) % p);
  }
  return r;
}

NCoords SigmaDelta::delta(const NCoords& a) const {
  NCoords r = sigma(a);
  for (std::size_t c = 0; c < r.size(); ++c) r[c] = Residue((r[c] + p - a[c]) % p);
  return r;
}

namespace {

bool is_zero(const std::vector<Residue>& v) {
  for (auto c : v)
    if (c) return false;
  return true;
}

/// Reduced echelon basis of the subalgebra generated by the images of x_{i,j} - 1.
EchelonBasis n_part_basis(const QuotientAlgebra& qa, const FlagInfo& info) {
  const int k = qa.cutoff();
  const GroupWord g = GroupWord::generator(info.distinguished_generator);
  std::vector<QuotientAlgebra::Element> gens;
  for (int x : info.kernel_generators)
    for (int j = 0; j < k; ++j) {
      auto e = qa.sub(qa.word_image(iterated_commutator(GroupWord::generator(x), g, j)), qa.one());
      if (!is_zero(e)) gens.push_back(std::move(e));
    }

  EchelonBasis basis(qa.p(), qa.dim());
  std::deque<QuotientAlgebra::Element> queue;
  if (basis.insert(qa.one())) queue.push_back(qa.one());
  while (!queue.empty()) {
    auto v = std::move(queue.front());
    queue.pop_front();
    for (const auto& s : gens) {
      auto w = qa.multiply(v, s);
      if (basis.insert(w)) queue.push_back(std::move(w));
    }
  }
  return basis;
}

}  // namespace

SkewContext::SkewContext(std::shared_ptr<const QuotientAlgebra> qa, FlagInfo info)
    : qa_(std::move(qa)),
      info_(std::move(info)),
      n_basis_(qa_->p(), qa_->dim()),
      skew_basis_(qa_->p(), qa_->dim(), true) {}

SigmaDelta build_sigma_delta(std::shared_ptr<const QuotientAlgebra> qa, const FlagInfo& info) {
  return SkewContext::build(std::move(qa), info).sigma_delta();
}

SkewContext SkewContext::build(std::shared_ptr<const QuotientAlgebra> qa, const FlagInfo& info) {
  if (!info.is_flag || !info.is_mild) throw std::invalid_argument("skew decomposition needs a mild flag presentation");
  SkewContext ctx(qa, info);
  const QuotientAlgebra& alg = *qa;
  const int k = alg.cutoff();

  ctx.n_basis_ = n_part_basis(alg, info);
  for (std::size_t piv : ctx.n_basis_.pivots()) ctx.n_valuation_.push_back(alg.coordinate_degree(piv));

  const int g = info.distinguished_generator;
  const auto gi = alg.generator_image(g);
  const auto ginv = alg.generator_inverse_image(g);
  ctx.sd_.p = alg.p();
  for (const auto& row : ctx.n_basis_.rows()) {
    auto conj = alg.multiply(alg.multiply(ginv, row), gi);
    if (!ctx.n_basis_.contains(conj)) throw StructureError("the N-part is not invariant under conjugation by g");
    ctx.sd_.sigma_columns.push_back(ctx.n_basis_.row_coordinates(conj));
  }
  for (std::size_t b = 0; b < ctx.n_dim(); ++b) {
    NCoords e = ctx.n_zero();
    e[b] = 1;
    auto v = ctx.n_min_valuation(ctx.sd_.delta(e));
    if (v && *v <= ctx.n_valuation_[b]) throw StructureError("delta does not raise the valuation");
  }

  const auto s = alg.sub(gi, alg.one());
  ctx.s_powers_.push_back(alg.one());
  for (int i = 1; i < k; ++i) ctx.s_powers_.push_back(alg.multiply(ctx.s_powers_.back(), s));

  for (int i = 0; i < k; ++i)
    for (std::size_t b = 0; b < ctx.n_dim(); ++b) {
      if (i + ctx.n_valuation_[b] >= k) continue;
      ctx.skew_basis_.insert(alg.multiply(ctx.s_powers_[i], ctx.n_basis_.rows()[b]));
      ctx.skew_tags_.emplace_back(i, b);
    }
  if (ctx.skew_basis_.rank() < alg.dim())
    throw StructureError("the elements s^i r_b do not span B_k: rank " + std::to_string(ctx.skew_basis_.rank()) +
                         " of " + std::to_string(alg.dim()));
  if (ctx.skew_basis_.inserted() != ctx.skew_basis_.rank())
    throw StructureError("the elements s^i r_b are linearly dependent");
  return ctx;
}

std::optional<int> SkewContext::n_min_valuation(const NCoords& a) const {
  std::optional<int> best;
  for (std::size_t b = 0; b < a.size(); ++b)
    if (a[b] && (!best || n_valuation_[b] < *best)) best = n_valuation_[b];
  return best;
}

SkewContext::Element SkewContext::n_to_algebra(const NCoords& a) const {
  Element r = qa_->zero();
  const auto& rows = n_basis_.rows();
  for (std::size_t b = 0; b < a.size(); ++b)
    if (a[b]) r = qa_->add(r, qa_->scale(rows[b], a[b]));
  return r;
}

NCoords SkewContext::algebra_to_n(const Element& e) const {
  if (!n_basis_.contains(e)) throw StructureError("element is outside the N-part");
  return n_basis_.row_coordinates(e);
}

NCoords SkewContext::n_multiply(const NCoords& a, const NCoords& b) const {
  return algebra_to_n(qa_->multiply(n_to_algebra(a), n_to_algebra(b)));
}

NCoords SkewContext::n_add(const NCoords& a, const NCoords& b) const {
  NCoords r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = qa_->field().add(a[i], b[i]);
  return r;
}

NCoords SkewContext::n_one() const { return algebra_to_n(qa_->one()); }

SkewSeries SkewContext::canonical(SkewSeries f) const {
  const int k = cutoff();
  f.cutoff = k;
  f.coefficients.resize(std::size_t(k), n_zero());
  for (int i = 0; i < k; ++i) {
    auto& a = f.coefficients[i];
    a.resize(n_dim(), 0);
    for (std::size_t b = 0; b < n_dim(); ++b)
      if (n_valuation_[b] >= k - i) a[b] = 0;
  }
  return f;
}

SkewSeries SkewContext::to_skew(const Element& v) const {
  const auto c = skew_basis_.generator_coordinates(v);
  SkewSeries f;
  f.cutoff = cutoff();
  f.coefficients.assign(std::size_t(cutoff()), n_zero());
  for (std::size_t t = 0; t < skew_tags_.size(); ++t) {
    const auto [i, b] = skew_tags_[t];
    f.coefficients[i][b] = qa_->field().add(f.coefficients[i][b], c[t]);
  }
  return canonical(std::move(f));
}

SkewContext::Element SkewContext::from_skew(const SkewSeries& f) const {
  Element r = qa_->zero();
  for (std::size_t i = 0; i < f.coefficients.size() && i < s_powers_.size(); ++i)
    if (!is_zero(f.coefficients[i])) r = qa_->add(r, qa_->multiply(s_powers_[i], n_to_algebra(f.coefficients[i])));
  return r;
}

SkewSeries skew_mul(const SkewSeries& f_in, const SkewSeries& h_in, const SkewContext& ctx) {
  const SkewSeries f = ctx.canonical(f_in), h = ctx.canonical(h_in);
  const int k = ctx.cutoff();
  const unsigned p = ctx.algebra().p();
  const auto& sd = ctx.sigma_delta();
  const PrimeField& field = ctx.algebra().field();

  SkewSeries out;
  out.cutoff = k;
  out.coefficients.assign(std::size_t(k), ctx.n_zero());
  for (int j = 0; j < k; ++j) {
    NCoords sig = f.coefficients[j];
    for (int n = 0; j + n < k && !is_zero(sig); ++n) {
      NCoords d = sig;
      for (int kk = n; kk < k && !is_zero(d); ++kk) {
        const Residue c = binomial_mod_p(kk, n, p);
        if (c && !is_zero(h.coefficients[kk])) {
          NCoords term = ctx.n_multiply(d, h.coefficients[kk]);
          auto& acc = out.coefficients[j + n];
          for (std::size_t b = 0; b < acc.size(); ++b) acc[b] = field.add(acc[b], field.mul(c, term[b]));
        }
        d = sd.delta(d);
      }
      sig = sd.sigma(sig);
    }
  }
  return ctx.canonical(std::move(out));
}

DecompositionCheck check_decomposition(const GroupPresentation& pres, int k, std::size_t samples, std::uint64_t seed,
                                       const Budget& budget) {
  const FlagInfo info = validate_flag(pres);
  if (!info.is_mild) throw std::invalid_argument("skew decomposition needs a mild flag presentation");
  auto qa = build_quotient(pres, k, budget);
  const SkewContext ctx = SkewContext::build(qa, info);
  const QuotientAlgebra& alg = *qa;

  std::vector<std::pair<QuotientAlgebra::Element, QuotientAlgebra::Element>> pairs;
  pairs.emplace_back(alg.one(), alg.one());
  if (info.num_kernel() > 0)
    pairs.emplace_back(alg.generator_image(info.distinguished_generator),
                       alg.generator_image(info.kernel_generators.front()));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> coef(0, alg.p() - 1);
  auto random_element = [&] {
    auto e = alg.zero();
    for (auto& c : e) c = Residue(coef(rng));
    return e;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    auto u = random_element();
    auto v = random_element();
    pairs.emplace_back(std::move(u), std::move(v));
  }

  DecompositionCheck result;
  for (const auto& [u, v] : pairs) {
    ++result.checked;
    const auto fu = ctx.to_skew(u), fv = ctx.to_skew(v);
    std::string failure;
    if (ctx.from_skew(fu) != u)
      failure = "round trip fails for u";
    else if (ctx.from_skew(skew_mul(fu, fv, ctx)) != alg.multiply(u, v))
      failure = "product mismatch";
    if (!failure.empty()) {
      result.passed = false;
      result.counterexample = failure + ": u = " + alg.to_string(u, pres.generators) +
                              ", v = " + alg.to_string(v, pres.generators);
      return result;
    }
  }
  return result;
}

std::vector<KernelVariable> kernel_variables(const FlagInfo& info, int cutoff) {
  std::vector<KernelVariable> vars;
  for (std::size_t r = 0; r < info.num_kernel(); ++r) {
    const int x = info.kernel_generators[r];
    if (r < info.num_relators()) {
      vars.push_back({x, 0, 1});
      continue;
    }
    for (int j = 0; j == 0 || 1 + j < cutoff; ++j) vars.push_back({x, j, 1 + j});
  }
  return vars;
}

std::vector<int> LambdaSigmaDelta::weights() const {
  std::vector<int> w;
  for (const auto& v : variables) w.push_back(v.weight);
  return w;
}

LambdaSeries LambdaSigmaDelta::sigma(const LambdaSeries& f) const {
  const std::size_t nv = variables.size();
  LambdaSeries r(p, f.t_cutoff(), nv);
  for (const auto& [m, c] : f.terms()) {
    LambdaSeries term = LambdaSeries::t_power(p, f.t_cutoff(), nv, m.t_exponent).scaled(c);
    for (int v : m.letters) {
      if (term.is_zero()) break;
      term = term * sigma_images[v].truncated(f.t_cutoff());
    }
    r += term;
  }
  return r;
}

LambdaSeries LambdaSigmaDelta::delta(const LambdaSeries& f) const { return sigma(f) - f; }

LambdaSigmaDelta extend_sigma_delta_lambda(const FlagInfo& info, unsigned p, int cutoff) {
  if (!info.is_flag || !info.is_mild) throw std::invalid_argument("Lambda[[t]] extension needs a mild flag presentation");
  LambdaSigmaDelta out;
  out.p = p;
  out.cutoff = cutoff;
  out.variables = kernel_variables(info, cutoff);
  std::map<std::pair<int, int>, int> index;
  for (std::size_t v = 0; v < out.variables.size(); ++v)
    index[{out.variables[v].generator, out.variables[v].depth}] = int(v);
  const auto w = out.weights();
  out.magnus_context = std::make_shared<const SeriesContext>(p, cutoff, w);

  for (std::size_t v = 0; v < out.variables.size(); ++v) {
    const auto& kv = out.variables[v];
    GroupWord word = GroupWord::generator(int(v));
    const auto rel = std::find(info.kernel_generators.begin(), info.kernel_generators.end(), kv.generator) -
                     info.kernel_generators.begin();
    if (std::size_t(rel) < info.num_relators()) {
      for (const auto& l : info.h_words[rel].letters) {
        auto it = index.find({l.generator, 0});
        if (it == index.end()) throw StructureError("h word uses a letter outside the kernel");
        word.letters.push_back({it->second, l.exponent});
      }
      word = free_reduce(word);
    } else if (auto it = index.find({kv.generator, kv.depth + 1}); it != index.end()) {
      word.letters.push_back({it->second, 1});
    }
    TruncPoly sx = magnus_word(word, out.magnus_context) - TruncPoly::constant(out.magnus_context, 1);
    out.sigma_images.push_back(magnus_iota(sx, w).divided_by_t(kv.weight));
    out.magnus_sigma.push_back(std::move(sx));
  }
  return out;
}

}  // namespace fpgrank
