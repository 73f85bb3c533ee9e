#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fpgrank/fplinalg.hpp"
#include "fpgrank/presentation.hpp"
#include "fpgrank/quotient.hpp"

namespace fpgrank {

using Rational = boost::multiprecision::cpp_rational;

/// Matrix over F_p[G] with finitely supported entries sum c * word.
class GroupRingMatrix {
 public:
  struct Term {
    Residue coefficient = 0;
    GroupWord word;
  };
  using Entry = std::vector<Term>;

  GroupRingMatrix(unsigned p, std::size_t rows, std::size_t cols);

  /// Parses {"rows": n, "cols": m, "entries": [[[[c, "word"], ...], ...], ...]} with
  /// words over the presentation's generators. Throws ParseError.
  static GroupRingMatrix from_json(std::string_view json_text, const GroupPresentation& pres);
  std::string to_json(const std::vector<std::string>& generator_names) const;

  unsigned p() const { return field_.p(); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Entry& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  /// Adds c * w to entry (i, j), merging equal words and dropping zero terms.
  void add_term(std::size_t i, std::size_t j, std::int64_t c, const GroupWord& w);

  GroupRingMatrix submatrix(const std::vector<std::size_t>& row_ids, const std::vector<std::size_t>& col_ids) const;
  friend GroupRingMatrix block_diagonal(const GroupRingMatrix& a, const GroupRingMatrix& b);
  friend GroupRingMatrix operator*(const GroupRingMatrix& a, const GroupRingMatrix& b);

 private:
  PrimeField field_;
  std::size_t rows_, cols_;
  std::vector<Entry> entries_;
};

/// The (n q) x (m q) matrix of v -> vA on F_p[G/D_k]^n, in the group-element basis of fq.
FpMatrix regular_rep(const FiniteQuotient& fq, const GroupRingMatrix& a);

struct RankLevel {
  int k = 0;
  std::size_t order = 0;
  std::size_t raw_rank = 0;
  Rational value;
  /// Distance from value to the nearest integer.
  Rational gap;
};

struct RankReport {
  std::size_t rows = 0, cols = 0;
  std::vector<RankLevel> levels;
  /// Set when a budget stopped the sequence; levels holds the completed prefix.
  bool truncated = false;
  std::string truncation_reason;
};

/// Nearest integer to v, rounding halves up.
BigInt nearest_integer(const Rational& v);
Rational gap_to_integer(const Rational& v);

/// rank(regular_rep) / |G : D_k| for one finite quotient.
RankLevel normalized_rank(const FiniteQuotient& fq, const GroupRingMatrix& a);

/// Runs the approximation for each k in ascending k_list. Levels are computed
/// on up to `jobs` threads; the report order follows k_list.
RankReport rank_sequence(const GroupPresentation& pres, const GroupRingMatrix& a, const std::vector<int>& k_list,
                         const Budget& budget = {}, unsigned jobs = 1);

struct IntegralityDiagnostics {
  BigInt nearest;
  Rational final_gap;
  std::vector<Rational> gaps;
  bool consistent = false;
  bool strictly_decreasing = false;
};

/// Compares the last normalized value with the nearest integer; `consistent`
/// when the final gap is below the threshold.
IntegralityDiagnostics integrality_report(const RankReport& r, const Rational& threshold = Rational(1, 4));

/// rk(B) <= rk(A) at level k for every B obtained by deleting one row or one column of A.
bool submatrix_check(const GroupPresentation& pres, const GroupRingMatrix& a, int k, const Budget& budget = {});

/// CSV with header k,order,raw_rank,value_num,value_den,gap_num,gap_den.
std::string report_to_csv(const RankReport& r);
std::string report_to_json(const RankReport& r, const IntegralityDiagnostics& diag);

}  // namespace fpgrank
