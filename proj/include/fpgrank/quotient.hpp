#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fpgrank/fplinalg.hpp"
#include "fpgrank/free_series.hpp"
#include "fpgrank/presentation.hpp"

namespace fpgrank {

using BigInt = boost::multiprecision::cpp_int;

/// Default guards: ambient dimension of the truncated free algebra and
/// number of enumerated group elements.
struct Budget {
  std::size_t max_ambient_dim = 2'000'000;
  std::size_t max_elements = 20'000;
};

/// Indexing of the words of length < cutoff over d letters, ordered by
/// length and then lexicographically; index = offset[len] + base-d code.
class MonomialIndexer {
 public:
  MonomialIndexer(std::size_t num_letters, int cutoff);

  std::size_t num_letters() const { return d_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return size_; }
  int degree(std::size_t index) const { return degree_[index]; }
  /// Index of the product of two monomials, or nullopt when it reaches the cutoff.
  std::optional<std::size_t> product(std::size_t a, std::size_t b) const {
    const int da = degree_[a], db = degree_[b];
    if (da + db >= cutoff_) return std::nullopt;
    return offset_[da + db] + code(a) * power_[db] + code(b);
  }
  std::optional<std::size_t> index_of(const std::vector<int>& letters) const;
  std::vector<int> letters(std::size_t index) const;

 private:
  std::size_t code(std::size_t index) const { return index - offset_[degree_[index]]; }

  std::size_t d_;
  int cutoff_;
  std::size_t size_ = 0;
  std::vector<std::size_t> offset_, power_;
  std::vector<int> degree_;
};

/// B_k = F_p[[G]] / I_G^k realized as a quotient of the truncated free algebra.
///
/// Elements are coordinate vectors over the standard monomials, which are the
/// non-pivot columns of the echelonized relator ideal. Pivots sit on the
/// earliest monomial in degree-lexicographic order, so the least degree in an
/// element's support is its I_G-adic filtration level.
class QuotientAlgebra {
 public:
  using Element = std::vector<Residue>;

  unsigned p() const { return field_.p(); }
  const PrimeField& field() const { return field_; }
  int cutoff() const { return indexer_.cutoff(); }
  std::size_t num_generators() const { return indexer_.num_letters(); }
  std::size_t ambient_dim() const { return indexer_.size(); }
  std::size_t dim() const { return standard_.size(); }
  std::size_t ideal_rank() const { return ideal_.rank(); }
  const MonomialIndexer& indexer() const { return indexer_; }
  /// dim I^j / I^{j+1} for 0 <= j < k.
  const std::vector<std::int64_t>& graded_dims() const { return graded_dims_; }
  /// Ambient index of each standard monomial, in coordinate order.
  const std::vector<std::size_t>& standard_monomials() const { return standard_; }
  int coordinate_degree(std::size_t c) const { return indexer_.degree(standard_[c]); }

  Element zero() const { return Element(dim(), 0); }
  Element one() const;
  /// 1 + X_i
  Element generator_image(int i) const;
  Element generator_inverse_image(int i) const;
  Element word_image(const GroupWord& w) const;

  Element reduce_ambient(std::vector<Residue> ambient) const;
  Element reduce(const TruncPoly& f) const;
  std::vector<Residue> lift(const Element& e) const;

  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element scale(const Element& a, Residue c) const;
  Element multiply(const Element& a, const Element& b) const;
  /// Least degree in the support; nullopt for zero (filtration level >= cutoff).
  std::optional<int> min_degree(const Element& e) const;
  /// Image of e in a coarser quotient of the same presentation.
  Element project_to(const QuotientAlgebra& coarser, const Element& e) const;

  std::string to_string(const Element& e, const std::vector<std::string>& names = {}) const;

 private:
  friend std::shared_ptr<const QuotientAlgebra> build_quotient(const GroupPresentation&, int, const Budget&);

  QuotientAlgebra(unsigned p, std::size_t d, int cutoff);

  PrimeField field_;
  MonomialIndexer indexer_;
  EchelonBasis ideal_;
  std::vector<std::size_t> standard_;
  std::vector<long> coordinate_of_;  // ambient index -> coordinate or -1
  std::vector<std::int64_t> graded_dims_;
  std::vector<Element> gen_images_, gen_inverse_images_;
};

/// Closes span{m1 (magnus(r) - 1) m2} under left and right multiplication by
/// the variables, echelonizes it and returns the quotient. Throws
/// BudgetExceeded when the ambient dimension is above the guard.
std::shared_ptr<const QuotientAlgebra> build_quotient(const GroupPresentation& pres, int k,
                                                      const Budget& budget = {});

/// Coefficients 0..terms-1 of (1-t)^-1 (1 - l t - (n-l) t/(1-t))^-1.
/// Throws std::invalid_argument unless info.is_mild.
std::vector<std::int64_t> hilbert_mild_flag(const FlagInfo& info, int terms);

/// Number of basic Lie monomials of degree j on d letters (Witt formula).
std::int64_t witt_dimension(std::int64_t d, std::int64_t j);

struct RestrictedLieOrder {
  /// dims[m-1] = dimension of the degree-m piece of the free restricted Lie algebra, 1 <= m < k.
  std::vector<std::int64_t> dims;
  std::int64_t exponent = 0;
  BigInt order;
};

/// Predicted |F / D_k(F)| for the free pro-p group of rank d.
RestrictedLieOrder restricted_lie_order_oracle(std::int64_t d, unsigned p, int k);

/// The finite group G / D_k(G) as the units of B_k generated by the generator images.
class FiniteQuotient {
 public:
  using Element = QuotientAlgebra::Element;
  using Id = std::uint32_t;

  const QuotientAlgebra& algebra() const { return *algebra_; }
  std::shared_ptr<const QuotientAlgebra> algebra_ptr() const { return algebra_; }
  std::size_t order() const { return elements_.size(); }
  const Element& element(Id i) const { return elements_[i]; }
  const std::vector<Element>& elements() const { return elements_; }
  std::optional<Id> find(const Element& e) const;
  Id identity() const { return 0; }
  Id generator(int i) const { return gen_ids_[i]; }
  Id generator_inverse(int i) const { return gen_inverse_ids_[i]; }
  /// Element id of a group word; throws std::logic_error when it is not found.
  Id word(const GroupWord& w) const;

 private:
  friend FiniteQuotient enumerate_quotient(std::shared_ptr<const QuotientAlgebra>, std::size_t);
  friend Id group_mul(const FiniteQuotient&, Id, Id);

  static std::string key(const Element& e) { return std::string(e.begin(), e.end()); }

  std::shared_ptr<const QuotientAlgebra> algebra_;
  std::vector<Element> elements_;
  std::unordered_map<std::string, Id> index_;
  std::vector<Id> gen_ids_, gen_inverse_ids_;
};

/// Breadth-first closure from 1 under right multiplication by the generator
/// images and their inverses. Throws BudgetExceeded above max_elements.
FiniteQuotient enumerate_quotient(std::shared_ptr<const QuotientAlgebra> qa, std::size_t max_elements);

/// Product of two group elements; throws std::logic_error if the closure is inconsistent.
FiniteQuotient::Id group_mul(const FiniteQuotient& fq, FiniteQuotient::Id a, FiniteQuotient::Id b);

}  // namespace fpgrank
