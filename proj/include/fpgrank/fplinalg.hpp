#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fpgrank/field.hpp"

namespace fpgrank {

/// Dense matrix over F_p.
///
/// For p = 2 rows are packed 64 entries per word; for odd p each entry takes
/// one byte. The storage choice is invisible through get/set.
class FpMatrix {
 public:
  FpMatrix(unsigned p, std::size_t rows, std::size_t cols);

  static FpMatrix identity(unsigned p, std::size_t n);
  /// Byte storage regardless of p; used to cross-check the packed path.
  static FpMatrix unpacked(unsigned p, std::size_t rows, std::size_t cols);

  unsigned p() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_packed() const { return packed_; }

  Residue get(std::size_t i, std::size_t j) const {
    if (packed_) return Residue((bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1u);
    return bytes_[i * cols_ + j];
  }
  void set(std::size_t i, std::size_t j, Residue v) {
    if (packed_) {
      std::uint64_t& w = bits_[i * words_ + (j >> 6)];
      const std::uint64_t mask = std::uint64_t(1) << (j & 63);
      w = (v & 1) ? (w | mask) : (w & ~mask);
    } else {
      bytes_[i * cols_ + j] = v;
    }
  }
  /// Adds v to entry (i, j) modulo p.
  void add_to(std::size_t i, std::size_t j, Residue v);

  FpMatrix transposed() const;
  /// Copy with the other storage layout (packed <-> bytes); p = 2 only for packing.
  FpMatrix with_storage(bool packed) const;
  /// Raw row access for elimination kernels.
  std::uint64_t* packed_row(std::size_t i) { return bits_.data() + i * words_; }
  const std::uint64_t* packed_row(std::size_t i) const { return bits_.data() + i * words_; }
  Residue* byte_row(std::size_t i) { return bytes_.data() + i * cols_; }
  const Residue* byte_row(std::size_t i) const { return bytes_.data() + i * cols_; }
  std::size_t words_per_row() const { return words_; }

  FpMatrix submatrix(std::span<const std::size_t> row_ids, std::span<const std::size_t> col_ids) const;

  friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
  friend FpMatrix operator+(const FpMatrix& a, const FpMatrix& b);
  friend bool operator==(const FpMatrix& a, const FpMatrix& b);

 private:
  FpMatrix(unsigned p, std::size_t rows, std::size_t cols, bool packed);

  unsigned p_;
  std::size_t rows_, cols_;
  bool packed_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<Residue> bytes_;
};

/// diag(a, b)
FpMatrix block_diagonal(const FpMatrix& a, const FpMatrix& b);
/// [[a, c], [0, b]]
FpMatrix block_upper(const FpMatrix& a, const FpMatrix& c, const FpMatrix& b);

struct EchelonForm {
  FpMatrix rref;
  std::vector<std::size_t> pivots;
};

/// Row rank by Gaussian elimination; word-wide XOR elimination when p = 2.
std::size_t rank(const FpMatrix& m);
/// Elimination on byte storage for any p.
std::size_t rank_generic(const FpMatrix& m);
/// Reduced row echelon form; pivot = leftmost nonzero entry, first qualifying row.
EchelonForm echelonize(const FpMatrix& m);
std::size_t nullspace_dim(const FpMatrix& m);
/// Writes the inverse of a square matrix to out; returns false when singular.
bool invert(const FpMatrix& m, FpMatrix& out);

/// Row space of dense F_p vectors kept in reduced row echelon form under insertion.
///
/// Optionally records, for every basis row, its coordinates in terms of the
/// inserted vectors, so that members of the span can be expressed in them.
class EchelonBasis {
 public:
  EchelonBasis(unsigned p, std::size_t dim, bool track_combinations = false);

  unsigned p() const { return field_.p(); }
  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t inserted() const { return inserted_; }

  /// Inserts v; returns true when the rank grew. Dependent inputs still count
  /// as inserted generators for coordinate tracking.
  bool insert(std::span<const Residue> v);
  /// v minus its projection on the span along pivot columns.
  void reduce(std::vector<Residue>& v) const;
  bool contains(std::span<const Residue> v) const;

  /// Pivot columns in increasing order and the matching basis rows.
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  const std::vector<std::vector<Residue>>& rows() const { return rows_; }
  /// Coordinates of v relative to the basis rows (v = sum c_r rows[r]); requires v in the span.
  std::vector<Residue> row_coordinates(std::span<const Residue> v) const;
  /// Coordinates of v relative to the inserted vectors; tracking must be enabled.
  std::vector<Residue> generator_coordinates(std::span<const Residue> v) const;

 private:
  void axpy(std::vector<Residue>& y, Residue a, const std::vector<Residue>& x) const;

  PrimeField field_;
  std::size_t dim_;
  bool track_;
  std::size_t inserted_ = 0;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<Residue>> rows_;
  std::vector<std::vector<Residue>> combos_;
};

}  // namespace fpgrank
