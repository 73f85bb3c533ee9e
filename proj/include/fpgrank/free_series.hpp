#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpgrank/field.hpp"
#include "fpgrank/presentation.hpp"

namespace fpgrank {

/// Shared parameters of a truncated free algebra F_p<X_0..X_{v-1}> / (weighted degree >= cutoff).
struct SeriesContext {
  unsigned p = 2;
  int cutoff = 1;
  /// Positive weight of each variable.
  std::vector<int> weights;

  SeriesContext(unsigned p, int cutoff, std::vector<int> weights);
  /// All variables of weight 1.
  static std::shared_ptr<const SeriesContext> uniform(unsigned p, int cutoff, std::size_t num_vars);

  std::size_t num_vars() const { return weights.size(); }
  const PrimeField& field() const { return field_; }

  friend bool operator==(const SeriesContext& a, const SeriesContext& b) {
    return a.p == b.p && a.cutoff == b.cutoff && a.weights == b.weights;
  }

 private:
  PrimeField field_;
};

/// Noncommutative monomial, ordered by weighted degree and then lexicographically.
struct Monomial {
  int degree = 0;
  std::vector<int> letters;

  auto operator<=>(const Monomial&) const = default;
};

/// Truncated noncommutative polynomial over F_p.
///
/// Only monomials of weighted degree strictly below the cutoff are stored and
/// no stored coefficient is zero. Operands of binary operations must share the
/// same cutoff and weights; mismatches throw std::invalid_argument.
class TruncPoly {
 public:
  using Terms = std::map<Monomial, Residue>;

  explicit TruncPoly(std::shared_ptr<const SeriesContext> ctx);

  static TruncPoly constant(std::shared_ptr<const SeriesContext> ctx, std::int64_t c);
  static TruncPoly variable(std::shared_ptr<const SeriesContext> ctx, int var);

  const SeriesContext& context() const { return *ctx_; }
  const std::shared_ptr<const SeriesContext>& context_ptr() const { return ctx_; }
  unsigned p() const { return ctx_->p; }
  int cutoff() const { return ctx_->cutoff; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Residue constant_term() const;
  Residue coefficient(const std::vector<int>& letters) const;

  /// Adds c * letters, dropping the term if it falls at or above the cutoff.
  void add_term(const std::vector<int>& letters, std::int64_t c);

  TruncPoly& operator+=(const TruncPoly& o);
  TruncPoly& operator-=(const TruncPoly& o);
  TruncPoly scaled(Residue c) const;

  friend TruncPoly operator+(TruncPoly a, const TruncPoly& b) { return a += b; }
  friend TruncPoly operator-(TruncPoly a, const TruncPoly& b) { return a -= b; }
  friend TruncPoly operator*(const TruncPoly& a, const TruncPoly& b);
  friend bool operator==(const TruncPoly& a, const TruncPoly& b) {
    return *a.ctx_ == *b.ctx_ && a.terms_ == b.terms_;
  }

  /// Sum-of-terms text such as "1 + X0*X1 + 2*X1^2".
  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  void check_compatible(const TruncPoly& o) const;
  void add_monomial(Monomial m, Residue c);

  std::shared_ptr<const SeriesContext> ctx_;
  Terms terms_;
};

/// Inverse of an element with nonzero constant term (geometric series on the
/// augmentation part, which is nilpotent at finite cutoff).
TruncPoly inverse_unit(const TruncPoly& f);

/// Algebra endomorphism X_v -> images[v].
TruncPoly substitute(const TruncPoly& f, std::span<const TruncPoly> images);

/// Value 0 or p^-k; stored as the exponent k.
class Valuation {
 public:
  static Valuation zero(bool below_cutoff = false) { return Valuation(true, 0, below_cutoff); }
  static Valuation one() { return Valuation(false, 0, false); }
  static Valuation of_exponent(int k) { return Valuation(false, k, false); }

  bool is_zero() const { return zero_; }
  /// k in p^-k; meaningless for the zero valuation.
  int exponent() const { return exponent_; }
  /// Set when the value is zero only because everything fell below the cutoff.
  bool maybe_below_cutoff() const { return below_cutoff_; }

  friend Valuation operator*(Valuation a, Valuation b) {
    if (a.zero_ || b.zero_) return zero(a.below_cutoff_ || b.below_cutoff_);
    return of_exponent(a.exponent_ + b.exponent_);
  }
  friend bool operator==(Valuation a, Valuation b) {
    return a.zero_ == b.zero_ && (a.zero_ || a.exponent_ == b.exponent_);
  }
  /// Orders by value: 0 < p^-k < p^-(k-1) < ... < 1.
  friend std::strong_ordering operator<=>(Valuation a, Valuation b) {
    if (a.zero_ || b.zero_) return int(!a.zero_) <=> int(!b.zero_);
    return b.exponent_ <=> a.exponent_;
  }

  std::string to_string(unsigned p) const;

 private:
  Valuation(bool zero, int exponent, bool below) : zero_(zero), exponent_(exponent), below_cutoff_(below) {}

  bool zero_;
  int exponent_;
  bool below_cutoff_;
};

/// w(f) = p^-d with d the least weighted degree in the support of f.
/// A zero polynomial reports the zero valuation with maybe_below_cutoff set.
Valuation weight(const TruncPoly& f);

/// Magnus image of a group word: letter i -> 1 + X_i, inverses by unit inversion.
/// Throws std::out_of_range for letters outside the context's variables.
TruncPoly magnus_word(const GroupWord& w, std::shared_ptr<const SeriesContext> ctx);

/// Monomial of the truncated ring Lambda[[t]] with Lambda free on a_0..a_{v-1} and t central.
struct LambdaMonomial {
  int t_exponent = 0;
  std::vector<int> letters;

  auto operator<=>(const LambdaMonomial&) const = default;
};

/// Element of Lambda[[t]] / (t^cutoff) over F_p.
class LambdaSeries {
 public:
  using Terms = std::map<LambdaMonomial, Residue>;

  LambdaSeries(unsigned p, int t_cutoff, std::size_t num_vars);

  static LambdaSeries constant(unsigned p, int t_cutoff, std::size_t num_vars, std::int64_t c);
  /// a_var * t^t_exponent
  static LambdaSeries variable(unsigned p, int t_cutoff, std::size_t num_vars, int var, int t_exponent = 0);
  static LambdaSeries t_power(unsigned p, int t_cutoff, std::size_t num_vars, int e);

  unsigned p() const { return p_; }
  int t_cutoff() const { return t_cutoff_; }
  std::size_t num_vars() const { return num_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Least t exponent in the support; nullopt for zero.
  std::optional<int> t_valuation() const;

  void add_term(LambdaMonomial m, std::int64_t c);
  LambdaSeries& operator+=(const LambdaSeries& o);
  LambdaSeries& operator-=(const LambdaSeries& o);
  LambdaSeries scaled(Residue c) const;
  /// Divides by t^e; throws StructureError when some term has t exponent below e.
  LambdaSeries divided_by_t(int e) const;
  /// Same element viewed modulo t^new_cutoff (new_cutoff <= t_cutoff).
  LambdaSeries truncated(int new_cutoff) const;

  friend LambdaSeries operator+(LambdaSeries a, const LambdaSeries& b) { return a += b; }
  friend LambdaSeries operator-(LambdaSeries a, const LambdaSeries& b) { return a -= b; }
  friend LambdaSeries operator*(const LambdaSeries& a, const LambdaSeries& b);
  friend bool operator==(const LambdaSeries&, const LambdaSeries&) = default;

  std::string to_string() const;

 private:
  void check_compatible(const LambdaSeries& o) const;

  unsigned p_;
  int t_cutoff_;
  std::size_t num_vars_;
  Terms terms_;
};

/// The substitution X_v -> a_v t^{weights[v]} into Lambda[[t]] modulo t^{f.cutoff()}.
/// Throws std::invalid_argument when f uses a variable without an assigned weight.
LambdaSeries magnus_iota(const TruncPoly& f, std::span<const int> weights);

}  // namespace fpgrank
