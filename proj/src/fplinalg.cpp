#include "fpgrank/fplinalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace fpgrank {

FpMatrix::FpMatrix(unsigned p, std::size_t rows, std::size_t cols) : FpMatrix(p, rows, cols, p == 2) {}

FpMatrix::FpMatrix(unsigned p, std::size_t rows, std::size_t cols, bool packed)
    : p_(p), rows_(rows), cols_(cols), packed_(packed) {
  if (p >= 256 || !is_prime(p)) throw std::invalid_argument("FpMatrix: p must be a prime below 256");
  if (packed_ && p != 2) throw std::invalid_argument("FpMatrix: bit packing requires p = 2");
  if (packed_) {
    words_ = (cols + 63) / 64;
    bits_.assign(rows * words_, 0);
  } else {
    bytes_.assign(rows * cols, 0);
  }
}

FpMatrix FpMatrix::identity(unsigned p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

FpMatrix FpMatrix::unpacked(unsigned p, std::size_t rows, std::size_t cols) {
  return FpMatrix(p, rows, cols, false);
}

void FpMatrix::add_to(std::size_t i, std::size_t j, Residue v) {
  if (packed_) {
    if (v & 1) bits_[i * words_ + (j >> 6)] ^= std::uint64_t(1) << (j & 63);
  } else {
    Residue& e = bytes_[i * cols_ + j];
    e = Residue((unsigned(e) + v) % p_);
  }
}

FpMatrix FpMatrix::transposed() const {
  FpMatrix t(p_, cols_, rows_, packed_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (Residue v = get(i, j)) t.set(j, i, v);
  return t;
}

FpMatrix FpMatrix::with_storage(bool packed) const {
  FpMatrix r(p_, rows_, cols_, packed);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (Residue v = get(i, j)) r.set(i, j, v);
  return r;
}

FpMatrix FpMatrix::submatrix(std::span<const std::size_t> row_ids, std::span<const std::size_t> col_ids) const {
  FpMatrix r(p_, row_ids.size(), col_ids.size(), packed_);
  for (std::size_t i = 0; i < row_ids.size(); ++i)
    for (std::size_t j = 0; j < col_ids.size(); ++j) r.set(i, j, get(row_ids[i], col_ids[j]));
  return r;
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
  if (a.p_ != b.p_ || a.cols_ != b.rows_) throw std::invalid_argument("FpMatrix product: shape or prime mismatch");
  FpMatrix r(a.p_, a.rows_, b.cols_, a.packed_ && b.packed_);
  if (r.packed_) {
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (a.get(i, k)) {
          const std::uint64_t* src = b.packed_row(k);
          std::uint64_t* dst = r.packed_row(i);
          for (std::size_t w = 0; w < r.words_; ++w) dst[w] ^= src[w];
        }
    return r;
  }
  std::vector<unsigned> acc(b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0u);
    for (std::size_t k = 0; k < a.cols_; ++k) {
      unsigned aik = a.get(i, k);
      if (!aik) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) acc[j] = (acc[j] + aik * b.get(k, j)) % a.p_;
    }
    for (std::size_t j = 0; j < b.cols_; ++j) r.set(i, j, Residue(acc[j]));
  }
  return r;
}

FpMatrix operator+(const FpMatrix& a, const FpMatrix& b) {
  if (a.p_ != b.p_ || a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("FpMatrix sum: shape or prime mismatch");
  FpMatrix r = a;
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) r.add_to(i, j, b.get(i, j));
  return r;
}

bool operator==(const FpMatrix& a, const FpMatrix& b) {
  if (a.p_ != b.p_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j)
      if (a.get(i, j) != b.get(i, j)) return false;
  return true;
}

FpMatrix block_diagonal(const FpMatrix& a, const FpMatrix& b) {
  FpMatrix zero(a.p(), a.rows(), b.cols());
  return block_upper(a, zero, b);
}

FpMatrix block_upper(const FpMatrix& a, const FpMatrix& c, const FpMatrix& b) {
  if (c.rows() != a.rows() || c.cols() != b.cols() || a.p() != b.p() || a.p() != c.p())
    throw std::invalid_argument("block_upper: incompatible blocks");
  FpMatrix r(a.p(), a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r.set(i, j, a.get(i, j));
    for (std::size_t j = 0; j < c.cols(); ++j) r.set(i, a.cols() + j, c.get(i, j));
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) r.set(a.rows() + i, a.cols() + j, b.get(i, j));
  return r;
}

namespace {

/// In-place elimination on packed rows. With `full`, clears pivot columns above too.
std::vector<std::size_t> eliminate_packed(FpMatrix& m, bool full) {
  const std::size_t rows = m.rows(), cols = m.cols(), words = m.words_per_row();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    const std::size_t w = col >> 6;
    const std::uint64_t mask = std::uint64_t(1) << (col & 63);
    std::size_t piv = r;
    while (piv < rows && !(m.packed_row(piv)[w] & mask)) ++piv;
    if (piv == rows) continue;
    if (piv != r) std::swap_ranges(m.packed_row(piv), m.packed_row(piv) + words, m.packed_row(r));
    const std::uint64_t* prow = m.packed_row(r);
    for (std::size_t i = full ? 0 : r + 1; i < rows; ++i) {
      if (i == r) continue;
      std::uint64_t* row = m.packed_row(i);
      if (row[w] & mask)
        for (std::size_t k = w; k < words; ++k) row[k] ^= prow[k];
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

std::vector<std::size_t> eliminate_bytes(FpMatrix& m, bool full) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const PrimeField field(m.p());
  const unsigned p = m.p();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t piv = r;
    while (piv < rows && m.byte_row(piv)[col] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) std::swap_ranges(m.byte_row(piv), m.byte_row(piv) + cols, m.byte_row(r));
    Residue* prow = m.byte_row(r);
    if (Residue lead = prow[col]; lead != 1) {
      Residue inv = field.inv(lead);
      for (std::size_t k = col; k < cols; ++k) prow[k] = field.mul(prow[k], inv);
    }
    for (std::size_t i = full ? 0 : r + 1; i < rows; ++i) {
      if (i == r) continue;
      Residue* row = m.byte_row(i);
      Residue f = row[col];
      if (!f) continue;
      if (p == 2) {
        for (std::size_t k = col; k < cols; ++k) row[k] ^= prow[k];
      } else {
        const unsigned nf = p - f;
        for (std::size_t k = col; k < cols; ++k) row[k] = Residue((row[k] + nf * prow[k]) % p);
      }
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const FpMatrix& m) {
  FpMatrix work = m;
  return work.is_packed() ? eliminate_packed(work, false).size() : eliminate_bytes(work, false).size();
}

std::size_t rank_generic(const FpMatrix& m) {
  FpMatrix work = m.is_packed() ? m.with_storage(false) : m;
  return eliminate_bytes(work, false).size();
}

EchelonForm echelonize(const FpMatrix& m) {
  FpMatrix work = m;
  auto pivots = work.is_packed() ? eliminate_packed(work, true) : eliminate_bytes(work, true);
  return EchelonForm{std::move(work), std::move(pivots)};
}

std::size_t nullspace_dim(const FpMatrix& m) { return m.cols() - rank(m); }

bool invert(const FpMatrix& m, FpMatrix& out) {
  const std::size_t n = m.rows();
  if (m.cols() != n) return false;
  if (n == 0) {
    out = m;
    return true;
  }
  FpMatrix aug = block_upper(m, FpMatrix::identity(m.p(), n), FpMatrix(m.p(), 0, n));
  // aug = [m | I] with an empty bottom block row
  EchelonForm e = echelonize(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return false;
  out = FpMatrix(m.p(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.set(i, j, e.rref.get(i, n + j));
  return true;
}

EchelonBasis::EchelonBasis(unsigned p, std::size_t dim, bool track_combinations)
    : field_(p), dim_(dim), track_(track_combinations) {}

void EchelonBasis::axpy(std::vector<Residue>& y, Residue a, const std::vector<Residue>& x) const {
  if (a == 0) return;
  if (y.size() < x.size()) y.resize(x.size(), 0);
  const unsigned p = field_.p();
  if (p == 2) {
    for (std::size_t k = 0; k < x.size(); ++k) y[k] ^= x[k];
  } else {
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = Residue((y[k] + unsigned(a) * x[k]) % p);
  }
}

bool EchelonBasis::insert(std::span<const Residue> input) {
  if (input.size() != dim_) throw std::invalid_argument("EchelonBasis::insert: dimension mismatch");
  std::vector<Residue> v(input.begin(), input.end());
  std::vector<Residue> combo;
  if (track_) {
    combo.assign(inserted_ + 1, 0);
    combo[inserted_] = 1;
  }
  ++inserted_;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Residue c = v[pivots_[r]];
    if (!c) continue;
    Residue nc = field_.neg(c);
    axpy(v, nc, rows_[r]);
    if (track_) axpy(combo, nc, combos_[r]);
  }
  auto lead = std::find_if(v.begin(), v.end(), [](Residue x) { return x != 0; });
  if (lead == v.end()) return false;
  const std::size_t col = std::size_t(lead - v.begin());
  if (Residue c = *lead; c != 1) {
    Residue inv = field_.inv(c);
    for (auto& x : v) x = field_.mul(x, inv);
    for (auto& x : combo) x = field_.mul(x, inv);
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Residue c = rows_[r][col];
    if (!c) continue;
    Residue nc = field_.neg(c);
    axpy(rows_[r], nc, v);
    if (track_) axpy(combos_[r], nc, combo);
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), col) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, col);
  rows_.insert(rows_.begin() + pos, std::move(v));
  if (track_) combos_.insert(combos_.begin() + pos, std::move(combo));
  return true;
}

void EchelonBasis::reduce(std::vector<Residue>& v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r)
    if (Residue c = v[pivots_[r]]) axpy(v, field_.neg(c), rows_[r]);
}

bool EchelonBasis::contains(std::span<const Residue> v) const {
  std::vector<Residue> w(v.begin(), v.end());
  reduce(w);
  return std::all_of(w.begin(), w.end(), [](Residue x) { return x == 0; });
}

std::vector<Residue> EchelonBasis::row_coordinates(std::span<const Residue> v) const {
  std::vector<Residue> c(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) c[r] = v[pivots_[r]];
  return c;
}

std::vector<Residue> EchelonBasis::generator_coordinates(std::span<const Residue> v) const {
  if (!track_) throw std::logic_error("EchelonBasis: combination tracking disabled");
  std::vector<Residue> c(inserted_, 0);
  for (std::size_t r = 0; r < rows_.size(); ++r) axpy(c, v[pivots_[r]], combos_[r]);
  c.resize(inserted_, 0);
  return c;
}

}  // namespace fpgrank
