#pragma once

#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fpgrank/field.hpp"

namespace fpgrank {

enum class RingKind { prime_field, truncated_poly, matrix };

/// F_p, F_p[t]/(t^m) or M_m(F_p). Elements are flat coefficient vectors:
/// one residue, m coefficients of 1, t, ..., t^{m-1}, or an m x m matrix in row-major order.
class BaseRing {
 public:
  using Element = std::vector<Residue>;

  static BaseRing prime_field(unsigned p);
  static BaseRing truncated(unsigned p, int m);
  static BaseRing matrices(unsigned p, int m);

  RingKind kind() const { return kind_; }
  unsigned p() const { return field_.p(); }
  const PrimeField& field() const { return field_; }
  int size() const { return m_; }
  std::size_t element_size() const;
  /// Commutative local rings invert matrices by unit pivots.
  bool is_local() const { return kind_ != RingKind::matrix; }

  Element zero() const { return Element(element_size(), 0); }
  Element one() const;
  Element from_int(std::int64_t c) const;
  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element mul(const Element& a, const Element& b) const;
  bool is_zero(const Element& a) const;
  bool is_unit(const Element& a) const;
  /// Throws std::domain_error when a is not a unit.
  Element inverse(const Element& a) const;
  Element random(std::mt19937_64& rng) const;
  std::string to_string(const Element& a) const;

  friend bool operator==(const BaseRing& a, const BaseRing& b) {
    return a.kind_ == b.kind_ && a.p() == b.p() && a.m_ == b.m_;
  }

 private:
  BaseRing(RingKind kind, unsigned p, int m) : kind_(kind), field_(p), m_(m) {}

  RingKind kind_;
  PrimeField field_;
  int m_;
};

class RingMatrix {
 public:
  using Element = BaseRing::Element;

  RingMatrix(BaseRing ring, std::size_t rows, std::size_t cols);
  static RingMatrix identity(const BaseRing& ring, std::size_t n);
  static RingMatrix random(const BaseRing& ring, std::size_t rows, std::size_t cols, std::mt19937_64& rng);

  const BaseRing& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Element& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Element& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  RingMatrix operator+(const RingMatrix& o) const;
  RingMatrix operator*(const RingMatrix& o) const;
  RingMatrix negated() const;
  /// Entrywise image under a ring map.
  RingMatrix mapped(const BaseRing& target, const std::function<Element(const Element&)>& phi) const;
  /// Throws std::domain_error when the matrix is not invertible.
  RingMatrix inverse() const;

  friend bool operator==(const RingMatrix& a, const RingMatrix& b) {
    return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  BaseRing ring_;
  std::size_t rows_, cols_;
  std::vector<Element> data_;
};

/// [a, b; c, d] from blocks with matching sizes.
RingMatrix block_matrix(const RingMatrix& a, const RingMatrix& b, const RingMatrix& c, const RingMatrix& d);

/// The formal expression a C^{-1} x with a a row, C square and x a column.
struct LocTriple {
  RingMatrix a, C, x;

  const BaseRing& ring() const { return C.ring(); }
  std::size_t size() const { return C.rows(); }
  /// Throws std::invalid_argument on a dimension or ring mismatch.
  void validate() const;
};

LocTriple loc_lambda(const BaseRing& ring, const BaseRing::Element& r);
/// ((a b), diag(C, D), (x; y))
LocTriple loc_add(const LocTriple& t1, const LocTriple& t2);
/// ((a 0), [C, -x b; 0, D], (0; y))
LocTriple loc_mul(const LocTriple& t1, const LocTriple& t2);
/// (aU, VCU, Vx)
LocTriple r1_transform(const LocTriple& t, const RingMatrix& u, const RingMatrix& v);

/// A ring with decidable invertibility and a homomorphism phi from the base ring.
struct EvalTarget {
  std::string name;
  BaseRing source;
  BaseRing target;
  std::function<BaseRing::Element(const BaseRing::Element&)> phi;
};

EvalTarget identity_target(const BaseRing& ring);
/// F_p[t]/(t^m) -> F_p, t -> 0.
EvalTarget constant_term_target(const BaseRing& trunc);
/// F_p[t]/(t^m) -> M_r(F_p), t -> nilpotent Jordan block; requires r <= m.
EvalTarget jordan_target(const BaseRing& trunc, int r);
/// "trunc", "fp" or "matrix:r"; throws std::invalid_argument otherwise.
EvalTarget parse_target(std::string_view spec, const BaseRing& trunc);

/// phi(a) phi(C)^{-1} phi(x); throws std::domain_error when phi(C) is not invertible.
BaseRing::Element loc_eval(const LocTriple& t, const EvalTarget& target);

/// Random triple with a middle matrix that is invertible over the base ring.
LocTriple random_triple(const BaseRing& ring, std::size_t n, std::mt19937_64& rng);

struct TripleFile {
  BaseRing ring = BaseRing::prime_field(2);
  std::vector<LocTriple> triples;
};

/// {"p": 2, "m": 4, "triples": [{"a": [[e, ...]], "C": [[...], ...], "x": [[e], ...]}]}
/// over F_p[t]/(t^m); an entry e is an integer or a list of t-coefficients. Throws ParseError.
TripleFile parse_triples_json(std::string_view text);

}  // namespace fpgrank
