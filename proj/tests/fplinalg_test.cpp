#include "fpgrank/fplinalg.hpp"

#include <gtest/gtest.h>

#include "generators.hpp"

using namespace fpgrank;

namespace {

FpMatrix nilpotent_jordan(unsigned p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m.set(i, i + 1, 1);
  return m;
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i)
    if (i != skip) ids.push_back(i);
  return ids;
}

}  // namespace

TEST(Rank, IdentityAndZero) {
  for (unsigned p : {2u, 3u, 7u}) {
    EXPECT_EQ(rank(FpMatrix::identity(p, 9)), 9u);
    EXPECT_EQ(rank(FpMatrix(p, 5, 8)), 0u);
    EXPECT_EQ(rank(FpMatrix(p, 0, 4)), 0u);
  }
}

TEST(Rank, JordanBlockPowers) {
  for (unsigned p : {2u, 3u}) {
    for (std::size_t n : {1u, 4u, 8u, 65u}) {
      const FpMatrix j = nilpotent_jordan(p, n);
      FpMatrix power = FpMatrix::identity(p, n);
      for (std::size_t e = 0; e <= n; ++e) {
        EXPECT_EQ(rank(power), n - e) << "p=" << p << " n=" << n << " e=" << e;
        power = power * j;
      }
    }
  }
}

TEST(Rank, PackedAndGenericAgreeOnF2) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 200; ++i) {
    std::uniform_int_distribution<std::size_t> dim(1, 130);
    const FpMatrix m = gen::random_matrix(rng, 2, dim(rng), dim(rng), 0.3);
    ASSERT_TRUE(m.is_packed());
    EXPECT_EQ(rank(m), rank_generic(m));
    EXPECT_EQ(rank(m), rank(m.with_storage(false)));
  }
}

TEST(Rank, TransposeInvariant) {
  std::mt19937_64 rng(31);
  for (unsigned p : {2u, 3u, 5u})
    for (int i = 0; i < 50; ++i) {
      const FpMatrix m = gen::random_matrix(rng, p, 20, 13, 0.2);
      EXPECT_EQ(rank(m), rank(m.transposed()));
      EXPECT_EQ(rank(m) + nullspace_dim(m), m.cols());
    }
}

TEST(Rank, SylvesterAxiomsOnRandomMatrices) {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::size_t> dim(1, 24);
  for (unsigned p : {2u, 3u}) {
    for (int i = 0; i < 200; ++i) {
      const std::size_t n = dim(rng), m = dim(rng), l = dim(rng);
      const FpMatrix a = gen::random_matrix(rng, p, n, m, 0.15), b = gen::random_matrix(rng, p, m, l, 0.15),
                     c = gen::random_matrix(rng, p, n, l, 0.3);
      const std::size_t ra = rank(a), rb = rank(b);
      EXPECT_LE(rank(a * b), std::min(ra, rb));
      EXPECT_EQ(rank(block_diagonal(a, b)), ra + rb);
      EXPECT_GE(rank(block_upper(a, c, b)), ra + rb);
      if (a.rows() > 1) EXPECT_LE(rank(a.submatrix(all_but(n, 0), all_but(m + 1, m))), ra);
    }
  }
}

TEST(Echelon, RrefHasUnitPivotsAndSpansRows) {
  std::mt19937_64 rng(41);
  for (unsigned p : {2u, 5u}) {
    const FpMatrix m = gen::random_matrix(rng, p, 12, 15, 0.3);
    const EchelonForm e = echelonize(m);
    EXPECT_EQ(e.pivots.size(), rank(m));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      EXPECT_EQ(e.rref.get(r, e.pivots[r]), 1);
      for (std::size_t s = 0; s < e.pivots.size(); ++s)
        if (s != r) EXPECT_EQ(e.rref.get(s, e.pivots[r]), 0);
    }
  }
}

TEST(Invert, ProductWithInverseIsIdentity) {
  std::mt19937_64 rng(43);
  for (unsigned p : {2u, 3u, 7u}) {
    int inverted = 0;
    for (int i = 0; i < 60; ++i) {
      const FpMatrix m = gen::random_matrix(rng, p, 10, 10, 0.5);
      FpMatrix inv(p, 10, 10);
      const bool ok = invert(m, inv);
      EXPECT_EQ(ok, rank(m) == 10);
      if (!ok) continue;
      ++inverted;
      EXPECT_EQ(m * inv, FpMatrix::identity(p, 10));
      EXPECT_EQ(inv * m, FpMatrix::identity(p, 10));
    }
    EXPECT_GT(inverted, 0);
  }
  FpMatrix empty(2, 0, 0), out(2, 0, 0);
  EXPECT_TRUE(invert(empty, out));
  FpMatrix singular(3, 2, 2), out2(3, 2, 2);
  EXPECT_FALSE(invert(singular, out2));
}

TEST(EchelonBasis, TracksGeneratorCoordinates) {
  std::mt19937_64 rng(47);
  const unsigned p = 3;
  EchelonBasis basis(p, 8, true);
  std::vector<std::vector<Residue>> inserted;
  std::uniform_int_distribution<unsigned> coef(0, p - 1);
  for (int i = 0; i < 6; ++i) {
    std::vector<Residue> v(8);
    for (auto& c : v) c = Residue(coef(rng));
    basis.insert(v);
    inserted.push_back(v);
  }
  EXPECT_EQ(basis.inserted(), 6u);
  for (int i = 0; i < 20; ++i) {
    std::vector<Residue> target(8, 0);
    for (const auto& v : inserted) {
      const unsigned c = coef(rng);
      for (std::size_t j = 0; j < 8; ++j) target[j] = Residue((target[j] + c * v[j]) % p);
    }
    ASSERT_TRUE(basis.contains(target));
    const auto coords = basis.generator_coordinates(target);
    std::vector<Residue> back(8, 0);
    for (std::size_t g = 0; g < inserted.size(); ++g)
      for (std::size_t j = 0; j < 8; ++j) back[j] = Residue((back[j] + unsigned(coords[g]) * inserted[g][j]) % p);
    EXPECT_EQ(back, target);
  }
}

TEST(EchelonBasis, ReduceLeavesZeroOnSpan) {
  EchelonBasis basis(2, 4);
  EXPECT_TRUE(basis.insert(std::vector<Residue>{1, 1, 0, 0}));
  EXPECT_TRUE(basis.insert(std::vector<Residue>{0, 1, 1, 0}));
  EXPECT_FALSE(basis.insert(std::vector<Residue>{1, 0, 1, 0}));
  EXPECT_EQ(basis.rank(), 2u);
  std::vector<Residue> v{1, 0, 1, 1};
  basis.reduce(v);
  EXPECT_EQ(v, (std::vector<Residue>{0, 0, 0, 1}));
  EXPECT_EQ(basis.pivots(), (std::vector<std::size_t>{0, 1}));
}
