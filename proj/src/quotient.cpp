#include "fpgrank/quotient.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

#include "fpgrank/errors.hpp"

namespace fpgrank {

namespace {

/// sum_{j<k} d^j, or nullopt once it passes limit.
std::optional<std::size_t> truncated_free_dim(std::size_t d, int k, std::size_t limit) {
  std::size_t total = 0, level = 1;
  for (int j = 0; j < k; ++j) {
    total += level;
    if (total > limit) return std::nullopt;
    if (j + 1 < k) {
      if (d != 0 && level > limit / d) return std::nullopt;
      level *= d;
    }
  }
  return total;
}

}  // namespace

MonomialIndexer::MonomialIndexer(std::size_t num_letters, int cutoff) : d_(num_letters), cutoff_(cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
  offset_.resize(cutoff + 1);
  power_.resize(cutoff + 1);
  std::size_t level = 1;
  for (int j = 0; j <= cutoff; ++j) {
    power_[j] = level;
    offset_[j] = size_;
    if (j < cutoff) {
      size_ += level;
      level *= d_;
    }
  }
  degree_.resize(size_);
  for (int j = 0; j < cutoff; ++j)
    for (std::size_t i = offset_[j]; i < offset_[j + 1]; ++i) degree_[i] = j;
}

std::optional<std::size_t> MonomialIndexer::index_of(const std::vector<int>& letters) const {
  if (int(letters.size()) >= cutoff_) return std::nullopt;
  std::size_t code = 0;
  for (int l : letters) {
    if (l < 0 || std::size_t(l) >= d_) throw std::out_of_range("monomial letter outside alphabet");
    code = code * d_ + std::size_t(l);
  }
  return offset_[letters.size()] + code;
}

std::vector<int> MonomialIndexer::letters(std::size_t index) const {
  const int deg = degree_[index];
  std::size_t c = code(index);
  std::vector<int> out(deg);
  for (int i = deg - 1; i >= 0; --i) {
    out[i] = int(c % d_);
    c /= d_;
  }
  return out;
}

QuotientAlgebra::QuotientAlgebra(unsigned p, std::size_t d, int cutoff)
    : field_(p), indexer_(d, cutoff), ideal_(p, indexer_.size()) {}

QuotientAlgebra::Element QuotientAlgebra::one() const {
  Element e = zero();
  // the empty monomial is never a pivot: relator images have no constant term
  e[0] = 1;
  return e;
}

QuotientAlgebra::Element QuotientAlgebra::generator_image(int i) const { return gen_images_.at(i); }

QuotientAlgebra::Element QuotientAlgebra::generator_inverse_image(int i) const {
  return gen_inverse_images_.at(i);
}

QuotientAlgebra::Element QuotientAlgebra::word_image(const GroupWord& w) const {
  Element r = one();
  for (const auto& l : w.letters) {
    if (l.generator < 0 || std::size_t(l.generator) >= num_generators())
      throw std::out_of_range("word letter outside the presentation's generators");
    const Element& f = l.exponent > 0 ? gen_images_[l.generator] : gen_inverse_images_[l.generator];
    for (int i = 0; i < std::abs(l.exponent); ++i) r = multiply(r, f);
  }
  return r;
}

QuotientAlgebra::Element QuotientAlgebra::reduce_ambient(std::vector<Residue> ambient) const {
  if (ambient.size() != ambient_dim()) throw std::invalid_argument("reduce_ambient: dimension mismatch");
  ideal_.reduce(ambient);
  Element e(dim());
  for (std::size_t c = 0; c < standard_.size(); ++c) e[c] = ambient[standard_[c]];
  return e;
}

QuotientAlgebra::Element QuotientAlgebra::reduce(const TruncPoly& f) const {
  if (f.p() != p() || f.context().num_vars() != num_generators())
    throw std::invalid_argument("reduce: polynomial over a different alphabet or prime");
  for (int w : f.context().weights)
    if (w != 1) throw std::invalid_argument("reduce: quotient algebra uses unit weights");
  std::vector<Residue> ambient(ambient_dim(), 0);
  for (const auto& [m, c] : f.terms())
    if (auto idx = indexer_.index_of(m.letters)) ambient[*idx] = field_.add(ambient[*idx], c);
  return reduce_ambient(std::move(ambient));
}

std::vector<Residue> QuotientAlgebra::lift(const Element& e) const {
  std::vector<Residue> ambient(ambient_dim(), 0);
  for (std::size_t c = 0; c < standard_.size(); ++c) ambient[standard_[c]] = e[c];
  return ambient;
}

QuotientAlgebra::Element QuotientAlgebra::add(const Element& a, const Element& b) const {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = field_.add(a[i], b[i]);
  return r;
}

QuotientAlgebra::Element QuotientAlgebra::sub(const Element& a, const Element& b) const {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = field_.sub(a[i], b[i]);
  return r;
}

QuotientAlgebra::Element QuotientAlgebra::scale(const Element& a, Residue c) const {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = field_.mul(a[i], c);
  return r;
}

QuotientAlgebra::Element QuotientAlgebra::multiply(const Element& a, const Element& b) const {
  std::vector<std::pair<std::size_t, Residue>> sa, sb;
  for (std::size_t c = 0; c < a.size(); ++c)
    if (a[c]) sa.emplace_back(standard_[c], a[c]);
  for (std::size_t c = 0; c < b.size(); ++c)
    if (b[c]) sb.emplace_back(standard_[c], b[c]);
  std::vector<Residue> ambient(ambient_dim(), 0);
  const unsigned p = field_.p();
  for (const auto& [ia, ca] : sa) {
    for (const auto& [ib, cb] : sb) {
      // sb is sorted by degree, so later entries overflow the cutoff as well
      auto idx = indexer_.product(ia, ib);
      if (!idx) break;
      ambient[*idx] = Residue((ambient[*idx] + unsigned(ca) * cb) % p);
    }
  }
  return reduce_ambient(std::move(ambient));
}

std::optional<int> QuotientAlgebra::min_degree(const Element& e) const {
  for (std::size_t c = 0; c < e.size(); ++c)
    if (e[c]) return coordinate_degree(c);
  return std::nullopt;
}

QuotientAlgebra::Element QuotientAlgebra::project_to(const QuotientAlgebra& coarser, const Element& e) const {
  if (coarser.p() != p() || coarser.num_generators() != num_generators() || coarser.cutoff() > cutoff())
    throw std::invalid_argument("project_to: target is not a coarser quotient of the same algebra");
  std::vector<Residue> ambient = lift(e);
  ambient.resize(coarser.ambient_dim());
  return coarser.reduce_ambient(std::move(ambient));
}

std::string QuotientAlgebra::to_string(const Element& e, const std::vector<std::string>& names) const {
  auto ctx = SeriesContext::uniform(p(), cutoff(), num_generators());
  TruncPoly f(ctx);
  for (std::size_t c = 0; c < e.size(); ++c)
    if (e[c]) f.add_term(indexer_.letters(standard_[c]), e[c]);
  std::vector<std::string> upper;
  for (const auto& n : names) upper.push_back("X_" + n);
  return f.to_string(upper);
}

std::shared_ptr<const QuotientAlgebra> build_quotient(const GroupPresentation& pres, int k, const Budget& budget) {
  if (k < 1) throw std::invalid_argument("build_quotient: k must be at least 1");
  const std::size_t d = pres.num_generators();
  if (!truncated_free_dim(d, k, budget.max_ambient_dim))
    throw BudgetExceeded("ambient dimension of the truncated free algebra exceeds " +
                         std::to_string(budget.max_ambient_dim) + " at k = " + std::to_string(k));

  std::shared_ptr<QuotientAlgebra> qa(new QuotientAlgebra(pres.p, d, k));
  const auto& ix = qa->indexer_;
  const std::size_t n = ix.size();
  auto ctx = SeriesContext::uniform(pres.p, k, d);

  std::deque<std::vector<Residue>> pending;
  auto try_insert = [&](std::vector<Residue> v) {
    if (qa->ideal_.insert(v)) pending.push_back(std::move(v));
  };

  for (const auto& r : pres.relators) {
    TruncPoly f = magnus_word(r, ctx) - TruncPoly::constant(ctx, 1);
    std::vector<Residue> v(n, 0);
    for (const auto& [m, c] : f.terms()) v[*ix.index_of(m.letters)] = c;
    try_insert(std::move(v));
  }

  // two-sided closure: multiply every new spanning vector by each variable on both sides
  while (!pending.empty()) {
    std::vector<Residue> u = std::move(pending.front());
    pending.pop_front();
    for (std::size_t letter = 0; letter < d; ++letter) {
      const std::size_t x = 1 + letter;
      std::vector<Residue> left(n, 0), right(n, 0);
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (!u[i]) continue;
        if (auto idx = ix.product(x, i)) {
          left[*idx] = u[i];
          right[*ix.product(i, x)] = u[i];
          any = true;
        }
      }
      if (!any) break;
      try_insert(std::move(left));
      try_insert(std::move(right));
    }
  }

  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : qa->ideal_.pivots()) is_pivot[c] = true;
  qa->coordinate_of_.assign(n, -1);
  qa->graded_dims_.assign(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_pivot[i]) continue;
    qa->coordinate_of_[i] = long(qa->standard_.size());
    qa->standard_.push_back(i);
    ++qa->graded_dims_[ix.degree(i)];
  }

  for (std::size_t g = 0; g < d; ++g) {
    TruncPoly x = TruncPoly::constant(ctx, 1) + TruncPoly::variable(ctx, int(g));
    qa->gen_images_.push_back(qa->reduce(x));
    qa->gen_inverse_images_.push_back(qa->reduce(inverse_unit(x)));
  }
  return qa;
}

std::vector<std::int64_t> hilbert_mild_flag(const FlagInfo& info, int terms) {
  if (!info.is_mild) throw std::invalid_argument("hilbert_mild_flag: presentation is not a mild flag presentation");
  if (terms <= 0) return {};
  const std::int64_t n = std::int64_t(info.num_kernel());
  const std::int64_t l = std::int64_t(info.num_relators());
  // A(t) = 1 - l t - (n - l)(t + t^2 + ...)
  std::vector<std::int64_t> a(terms, -(n - l));
  a[0] = 1;
  if (terms > 1) a[1] = -l - (n - l);
  std::vector<std::int64_t> inv(terms, 0);
  inv[0] = 1;
  for (int m = 1; m < terms; ++m) {
    std::int64_t s = 0;
    for (int j = 1; j <= m; ++j) s += a[j] * inv[m - j];
    inv[m] = -s;
  }
  std::vector<std::int64_t> h(terms);
  std::int64_t run = 0;
  for (int m = 0; m < terms; ++m) h[m] = run += inv[m];
  return h;
}

namespace {

int mobius(std::int64_t n) {
  int mu = 1;
  for (std::int64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

}  // namespace

std::int64_t witt_dimension(std::int64_t d, std::int64_t j) {
  if (j < 1) throw std::invalid_argument("witt_dimension: degree must be positive");
  BigInt total = 0;
  for (std::int64_t e = 1; e <= j; ++e) {
    if (j % e) continue;
    if (int mu = mobius(e)) total += mu * boost::multiprecision::pow(BigInt(d), unsigned(j / e));
  }
  return (total / j).convert_to<std::int64_t>();
}

RestrictedLieOrder restricted_lie_order_oracle(std::int64_t d, unsigned p, int k) {
  RestrictedLieOrder out;
  for (int m = 1; m < k; ++m) {
    std::int64_t dim = 0;
    for (std::int64_t q = m, pw = 1; m % pw == 0; pw *= p, q = m / pw) dim += witt_dimension(d, q);
    out.dims.push_back(dim);
    out.exponent += dim;
  }
  out.order = boost::multiprecision::pow(BigInt(p), unsigned(out.exponent));
  return out;
}

std::optional<FiniteQuotient::Id> FiniteQuotient::find(const Element& e) const {
  auto it = index_.find(key(e));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FiniteQuotient::Id FiniteQuotient::word(const GroupWord& w) const {
  auto id = find(algebra_->word_image(w));
  if (!id) throw std::logic_error("group word does not resolve to an enumerated element");
  return *id;
}

FiniteQuotient enumerate_quotient(std::shared_ptr<const QuotientAlgebra> qa, std::size_t max_elements) {
  FiniteQuotient fq;
  fq.algebra_ = qa;
  const QuotientAlgebra& alg = *qa;
  std::vector<QuotientAlgebra::Element> steps;
  for (std::size_t g = 0; g < alg.num_generators(); ++g) {
    steps.push_back(alg.generator_image(int(g)));
    steps.push_back(alg.generator_inverse_image(int(g)));
  }
  auto admit = [&](QuotientAlgebra::Element e) {
    auto [it, inserted] = fq.index_.try_emplace(FiniteQuotient::key(e), FiniteQuotient::Id(fq.elements_.size()));
    if (!inserted) return;
    if (fq.elements_.size() >= max_elements)
      throw BudgetExceeded("quotient order exceeds " + std::to_string(max_elements) + " elements at k = " +
                           std::to_string(alg.cutoff()));
    fq.elements_.push_back(std::move(e));
  };
  admit(alg.one());
  for (std::size_t head = 0; head < fq.elements_.size(); ++head)
    for (const auto& s : steps) admit(alg.multiply(fq.elements_[head], s));

  for (std::size_t g = 0; g < alg.num_generators(); ++g) {
    fq.gen_ids_.push_back(*fq.find(alg.generator_image(int(g))));
    fq.gen_inverse_ids_.push_back(*fq.find(alg.generator_inverse_image(int(g))));
  }
  return fq;
}

FiniteQuotient::Id group_mul(const FiniteQuotient& fq, FiniteQuotient::Id a, FiniteQuotient::Id b) {
  auto id = fq.find(fq.algebra_->multiply(fq.elements_.at(a), fq.elements_.at(b)));
  if (!id) throw std::logic_error("group_mul: product missing from the enumerated quotient");
  return *id;
}

}  // namespace fpgrank
