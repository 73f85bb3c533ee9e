#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpgrank/fplinalg.hpp"
#include "fpgrank/free_series.hpp"
#include "fpgrank/presentation.hpp"
#include "fpgrank/quotient.hpp"

namespace fpgrank {

/// Coordinates of an element of the N-part relative to its filtered basis.
using NCoords = std::vector<Residue>;

/// sigma = conjugation by g on the N-part, delta = sigma - id, as matrices on NCoords.
struct SigmaDelta {
  unsigned p = 2;
  /// sigma_columns[b] = sigma(basis element b).
  std::vector<NCoords> sigma_columns;

  NCoords sigma(const NCoords& a) const;
  NCoords delta(const NCoords& a) const;
};

/// sum_i s^i a_i with s = g - 1 and right coefficients a_i in the N-part.
struct SkewSeries {
  int cutoff = 0;
  std::vector<NCoords> coefficients;

  friend bool operator==(const SkewSeries&, const SkewSeries&) = default;
};

/// Decomposition of B_k as a right skew power series ring over the image R_k of F_p[[N]].
///
/// The N-part is the subalgebra generated by the images of x_{i,j} - 1 with
/// x_{i,j} = [x_i, g, ..., g]. Its basis is kept in reduced echelon form with
/// pivots on the least-degree monomial, so the valuation of a combination is
/// the least valuation among the basis elements it uses.
class SkewContext {
 public:
  using Element = QuotientAlgebra::Element;

  /// Throws std::invalid_argument unless info is mild, StructureError if the
  /// N-part is not sigma-invariant or {s^i r_b} is not a basis of B_k.
  static SkewContext build(std::shared_ptr<const QuotientAlgebra> qa, const FlagInfo& info);

  const QuotientAlgebra& algebra() const { return *qa_; }
  const FlagInfo& flag() const { return info_; }
  int cutoff() const { return qa_->cutoff(); }
  std::size_t n_dim() const { return n_basis_.rank(); }
  int n_valuation(std::size_t b) const { return n_valuation_[b]; }
  /// Least valuation among the used basis elements; nullopt for zero.
  std::optional<int> n_min_valuation(const NCoords& a) const;
  const SigmaDelta& sigma_delta() const { return sd_; }

  Element n_to_algebra(const NCoords& a) const;
  /// Throws StructureError when e is not in the N-part.
  NCoords algebra_to_n(const Element& e) const;
  bool in_n_part(const Element& e) const { return n_basis_.contains(e); }
  NCoords n_multiply(const NCoords& a, const NCoords& b) const;
  NCoords n_add(const NCoords& a, const NCoords& b) const;
  NCoords n_zero() const { return NCoords(n_dim(), 0); }
  NCoords n_one() const;

  /// Drops coefficient components that vanish after multiplication by s^i.
  SkewSeries canonical(SkewSeries f) const;
  SkewSeries to_skew(const Element& v) const;
  Element from_skew(const SkewSeries& f) const;

 private:
  SkewContext(std::shared_ptr<const QuotientAlgebra> qa, FlagInfo info);

  std::shared_ptr<const QuotientAlgebra> qa_;
  FlagInfo info_;
  EchelonBasis n_basis_;
  std::vector<int> n_valuation_;
  SigmaDelta sd_;
  std::vector<Element> s_powers_;
  /// Spanning set s^i r_b (i + val_b < k) with coordinate tracking.
  EchelonBasis skew_basis_;
  std::vector<std::pair<int, std::size_t>> skew_tags_;
};

/// Conjugation data on the N-part of qa (the sigma/delta of the decomposition).
SigmaDelta build_sigma_delta(std::shared_ptr<const QuotientAlgebra> qa, const FlagInfo& info);

/// Product by the rule: coefficient of s^m is
/// sum_{n<=m} sum_{j>=n} C(j, n) delta^{j-n}(sigma^n(a_{m-n})) b_j.
SkewSeries skew_mul(const SkewSeries& f, const SkewSeries& h, const SkewContext& ctx);

struct DecompositionCheck {
  bool passed = true;
  std::size_t checked = 0;
  std::string counterexample;
};

/// Compares from_skew(skew_mul(to_skew(u), to_skew(v))) with u v in B_k on the
/// pairs (1, 1), (g, x_1) and `samples` random pairs.
DecompositionCheck check_decomposition(const GroupPresentation& pres, int k, std::size_t samples,
                                       std::uint64_t seed = 1, const Budget& budget = {});

/// Free generator x_{i,j} of N in the Magnus scheme of a mild flag presentation.
struct KernelVariable {
  int generator = 0;  // index of x_i in the presentation
  int depth = 0;      // j
  int weight = 1;     // w_{i,j}
};

/// Relator generators contribute x_{i,0} of weight 1; every other kernel
/// generator contributes x_{i,j} of weight 1 + j for all j with 1 + j < cutoff.
std::vector<KernelVariable> kernel_variables(const FlagInfo& info, int cutoff);

/// sigma and delta on Lambda[[t]] extending conjugation on the Magnus algebra of N.
struct LambdaSigmaDelta {
  unsigned p = 2;
  int cutoff = 1;
  std::vector<KernelVariable> variables;
  /// Context of the Magnus algebra of N with the variable weights.
  std::shared_ptr<const SeriesContext> magnus_context;
  /// sigma(X_v) in the Magnus algebra.
  std::vector<TruncPoly> magnus_sigma;
  /// sigma(a_v) = iota(sigma(X_v)) / t^{w_v}; exact modulo t^{cutoff - w_v}.
  std::vector<LambdaSeries> sigma_images;

  LambdaSeries sigma(const LambdaSeries& f) const;
  LambdaSeries delta(const LambdaSeries& f) const;
  std::vector<int> weights() const;
};

/// Throws std::invalid_argument for non-mild input, StructureError on a divisibility failure.
LambdaSigmaDelta extend_sigma_delta_lambda(const FlagInfo& info, unsigned p, int cutoff);

}  // namespace fpgrank
