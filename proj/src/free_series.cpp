#include "fpgrank/free_series.hpp"

#include <sstream>
#include <stdexcept>

#include "fpgrank/errors.hpp"

namespace fpgrank {

SeriesContext::SeriesContext(unsigned p_, int cutoff_, std::vector<int> weights_)
    : p(p_), cutoff(cutoff_), weights(std::move(weights_)), field_(p_) {
  if (cutoff < 1) throw std::invalid_argument("series cutoff must be positive");
  for (int w : weights)
    if (w < 1) throw std::invalid_argument("variable weights must be positive");
}

std::shared_ptr<const SeriesContext> SeriesContext::uniform(unsigned p, int cutoff, std::size_t num_vars) {
  return std::make_shared<const SeriesContext>(p, cutoff, std::vector<int>(num_vars, 1));
}

TruncPoly::TruncPoly(std::shared_ptr<const SeriesContext> ctx) : ctx_(std::move(ctx)) {
  if (!ctx_) throw std::invalid_argument("null series context");
}

TruncPoly TruncPoly::constant(std::shared_ptr<const SeriesContext> ctx, std::int64_t c) {
  TruncPoly f(std::move(ctx));
  f.add_term({}, c);
  return f;
}

TruncPoly TruncPoly::variable(std::shared_ptr<const SeriesContext> ctx, int var) {
  TruncPoly f(std::move(ctx));
  f.add_term({var}, 1);
  return f;
}

Residue TruncPoly::constant_term() const { return coefficient({}); }

Residue TruncPoly::coefficient(const std::vector<int>& letters) const {
  int degree = 0;
  for (int v : letters) {
    if (v < 0 || std::size_t(v) >= ctx_->num_vars()) return 0;
    degree += ctx_->weights[v];
  }
  auto it = terms_.find(Monomial{degree, letters});
  return it == terms_.end() ? 0 : it->second;
}

void TruncPoly::add_term(const std::vector<int>& letters, std::int64_t c) {
  int degree = 0;
  for (int v : letters) {
    if (v < 0 || std::size_t(v) >= ctx_->num_vars())
      throw std::out_of_range("variable index " + std::to_string(v) + " outside context");
    degree += ctx_->weights[v];
  }
  if (degree >= ctx_->cutoff) return;
  add_monomial(Monomial{degree, letters}, ctx_->field().from_int(c));
}

void TruncPoly::add_monomial(Monomial m, Residue c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second = ctx_->field().add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

void TruncPoly::check_compatible(const TruncPoly& o) const {
  if (ctx_ != o.ctx_ && !(*ctx_ == *o.ctx_))
    throw std::invalid_argument("truncated polynomials have different cutoff, prime or weights");
}

TruncPoly& TruncPoly::operator+=(const TruncPoly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_monomial(m, c);
  return *this;
}

TruncPoly& TruncPoly::operator-=(const TruncPoly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_monomial(m, ctx_->field().neg(c));
  return *this;
}

TruncPoly TruncPoly::scaled(Residue c) const {
  TruncPoly r(ctx_);
  c = ctx_->field().from_int(c);
  if (c == 0) return r;
  for (const auto& [m, a] : terms_) r.terms_.emplace(m, ctx_->field().mul(a, c));
  return r;
}

TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) {
  a.check_compatible(b);
  TruncPoly r(a.ctx_);
  const int cutoff = a.ctx_->cutoff;
  const auto& field = a.ctx_->field();
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      // terms are sorted by degree, so the rest of b's terms are too heavy as well
      if (ma.degree + mb.degree >= cutoff) break;
      Monomial m{ma.degree + mb.degree, ma.letters};
      m.letters.insert(m.letters.end(), mb.letters.begin(), mb.letters.end());
      r.add_monomial(std::move(m), field.mul(ca, cb));
    }
  }
  return r;
}

std::string TruncPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    if (m.letters.empty()) {
      out << unsigned(c);
      continue;
    }
    if (c != 1) out << unsigned(c) << '*';
    for (std::size_t i = 0; i < m.letters.size();) {
      std::size_t j = i;
      while (j < m.letters.size() && m.letters[j] == m.letters[i]) ++j;
      if (i) out << '*';
      int v = m.letters[i];
      if (std::size_t(v) < names.size())
        out << names[v];
      else
        out << 'X' << v;
      if (j - i > 1) out << '^' << (j - i);
      i = j;
    }
  }
  return out.str();
}

TruncPoly inverse_unit(const TruncPoly& f) {
  const auto& field = f.context().field();
  Residue c = f.constant_term();
  if (c == 0) throw std::domain_error("inverse_unit: constant term is zero");
  Residue c_inv = field.inv(c);
  // f = c (1 + u) with u in the augmentation ideal; (1+u)^-1 = sum (-u)^j
  TruncPoly neg_u = f.scaled(field.neg(c_inv));
  neg_u += TruncPoly::constant(f.context_ptr(), 1);
  TruncPoly sum = TruncPoly::constant(f.context_ptr(), 1);
  TruncPoly term = sum;
  for (;;) {
    term = term * neg_u;
    if (term.is_zero()) break;
    sum += term;
  }
  return sum.scaled(c_inv);
}

TruncPoly substitute(const TruncPoly& f, std::span<const TruncPoly> images) {
  if (images.size() < f.context().num_vars())
    throw std::invalid_argument("substitute: one image per variable required");
  auto ctx = images.empty() ? f.context_ptr() : images.front().context_ptr();
  TruncPoly r(ctx);
  for (const auto& [m, c] : f.terms()) {
    TruncPoly prod = TruncPoly::constant(ctx, c);
    for (int v : m.letters) {
      prod = prod * images[v];
      if (prod.is_zero()) break;
    }
    r += prod;
  }
  return r;
}

std::string Valuation::to_string(unsigned p) const {
  if (zero_) return below_cutoff_ ? "0 (below cutoff)" : "0";
  if (exponent_ == 0) return "1";
  return std::to_string(p) + "^-" + std::to_string(exponent_);
}

Valuation weight(const TruncPoly& f) {
  if (f.is_zero()) return Valuation::zero(true);
  return Valuation::of_exponent(f.terms().begin()->first.degree);
}

TruncPoly magnus_word(const GroupWord& w, std::shared_ptr<const SeriesContext> ctx) {
  const std::size_t nv = ctx->num_vars();
  std::vector<std::optional<TruncPoly>> pos(nv), neg(nv);
  TruncPoly r = TruncPoly::constant(ctx, 1);
  for (const auto& l : w.letters) {
    if (l.generator < 0 || std::size_t(l.generator) >= nv)
      throw std::out_of_range("magnus_word: letter " + std::to_string(l.generator) + " has no variable");
    auto& slot = l.exponent > 0 ? pos[l.generator] : neg[l.generator];
    if (!slot) {
      TruncPoly x = TruncPoly::constant(ctx, 1) + TruncPoly::variable(ctx, l.generator);
      slot = l.exponent > 0 ? x : inverse_unit(x);
    }
    for (int i = 0; i < std::abs(l.exponent); ++i) r = r * *slot;
  }
  return r;
}

LambdaSeries::LambdaSeries(unsigned p, int t_cutoff, std::size_t num_vars)
    : p_(p), t_cutoff_(t_cutoff), num_vars_(num_vars) {
  if (t_cutoff < 1) throw std::invalid_argument("t cutoff must be positive");
}

LambdaSeries LambdaSeries::constant(unsigned p, int t_cutoff, std::size_t num_vars, std::int64_t c) {
  LambdaSeries s(p, t_cutoff, num_vars);
  s.add_term({}, c);
  return s;
}

LambdaSeries LambdaSeries::variable(unsigned p, int t_cutoff, std::size_t num_vars, int var, int t_exponent) {
  LambdaSeries s(p, t_cutoff, num_vars);
  s.add_term({t_exponent, {var}}, 1);
  return s;
}

LambdaSeries LambdaSeries::t_power(unsigned p, int t_cutoff, std::size_t num_vars, int e) {
  LambdaSeries s(p, t_cutoff, num_vars);
  s.add_term({e, {}}, 1);
  return s;
}

std::optional<int> LambdaSeries::t_valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first.t_exponent;
}

void LambdaSeries::add_term(LambdaMonomial m, std::int64_t c) {
  for (int v : m.letters)
    if (v < 0 || std::size_t(v) >= num_vars_) throw std::out_of_range("Lambda variable out of range");
  if (m.t_exponent >= t_cutoff_) return;
  std::int64_t r = c % std::int64_t(p_);
  if (r < 0) r += p_;
  if (r == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(m), Residue(r));
  if (!inserted) {
    it->second = Residue((it->second + r) % p_);
    if (it->second == 0) terms_.erase(it);
  }
}

void LambdaSeries::check_compatible(const LambdaSeries& o) const {
  if (p_ != o.p_ || t_cutoff_ != o.t_cutoff_ || num_vars_ != o.num_vars_)
    throw std::invalid_argument("Lambda[[t]] operands have different prime, cutoff or variables");
}

LambdaSeries& LambdaSeries::operator+=(const LambdaSeries& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

LambdaSeries& LambdaSeries::operator-=(const LambdaSeries& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, std::int64_t(p_) - c);
  return *this;
}

LambdaSeries LambdaSeries::scaled(Residue c) const {
  LambdaSeries r(p_, t_cutoff_, num_vars_);
  for (const auto& [m, a] : terms_) r.add_term(m, std::int64_t(a) * c);
  return r;
}

LambdaSeries LambdaSeries::divided_by_t(int e) const {
  LambdaSeries r(p_, t_cutoff_, num_vars_);
  for (const auto& [m, c] : terms_) {
    if (m.t_exponent < e)
      throw StructureError("Lambda[[t]] element is not divisible by t^" + std::to_string(e));
    r.terms_.emplace(LambdaMonomial{m.t_exponent - e, m.letters}, c);
  }
  return r;
}

LambdaSeries LambdaSeries::truncated(int new_cutoff) const {
  if (new_cutoff > t_cutoff_) throw std::invalid_argument("cannot raise the t cutoff");
  LambdaSeries r(p_, new_cutoff, num_vars_);
  for (const auto& [m, c] : terms_)
    if (m.t_exponent < new_cutoff) r.terms_.emplace(m, c);
  return r;
}

LambdaSeries operator*(const LambdaSeries& a, const LambdaSeries& b) {
  a.check_compatible(b);
  LambdaSeries r(a.p_, a.t_cutoff_, a.num_vars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      if (ma.t_exponent + mb.t_exponent >= a.t_cutoff_) break;
      LambdaMonomial m{ma.t_exponent + mb.t_exponent, ma.letters};
      m.letters.insert(m.letters.end(), mb.letters.begin(), mb.letters.end());
      r.add_term(std::move(m), std::int64_t(ca) * cb);
    }
  }
  return r;
}

std::string LambdaSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    bool any = false;
    if (c != 1 || (m.letters.empty() && m.t_exponent == 0)) {
      out << unsigned(c);
      any = true;
    }
    for (int v : m.letters) {
      out << (any ? "*" : "") << 'a' << v;
      any = true;
    }
    if (m.t_exponent > 0) {
      out << (any ? "*" : "") << 't';
      if (m.t_exponent > 1) out << '^' << m.t_exponent;
    }
  }
  return out.str();
}

LambdaSeries magnus_iota(const TruncPoly& f, std::span<const int> weights) {
  const std::size_t nv = f.context().num_vars();
  if (weights.size() < nv) throw std::invalid_argument("magnus_iota: variable without an assigned weight");
  LambdaSeries r(f.p(), f.cutoff(), nv);
  for (const auto& [m, c] : f.terms()) {
    int e = 0;
    for (int v : m.letters) {
      if (weights[v] < 1) throw std::invalid_argument("magnus_iota: variable without an assigned weight");
      e += weights[v];
    }
    r.add_term(LambdaMonomial{e, m.letters}, c);
  }
  return r;
}

}  // namespace fpgrank
