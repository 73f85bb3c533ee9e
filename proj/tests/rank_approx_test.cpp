#include "fpgrank/rank_approx.hpp"

#include <gtest/gtest.h>

#include <random>

#include "fpgrank/errors.hpp"
#include "generators.hpp"

using namespace fpgrank;

namespace {

const char* kZp2 = "p = 2\ngens = g\n";
const char* kFree2 = "p = 2\ngens = x, y\n";
const char* kMild1 = "p = 2\ngens = x, g\nrels = [x,g] = x^2\n";

GroupRingMatrix from(std::string_view json, const GroupPresentation& pres) {
  return GroupRingMatrix::from_json(json, pres);
}

std::vector<Rational> values(const RankReport& r) {
  std::vector<Rational> v;
  for (const auto& l : r.levels) v.push_back(l.value);
  return v;
}

GroupRingMatrix random_group_ring_matrix(std::mt19937_64& rng, const GroupPresentation& pres, std::size_t rows,
                                         std::size_t cols) {
  GroupRingMatrix m(pres.p, rows, cols);
  std::uniform_int_distribution<int> terms(0, 2), coef(1, int(pres.p) - 1);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const int n = terms(rng);
      for (int t = 0; t < n; ++t) m.add_term(i, j, coef(rng), gen::random_word(rng, int(pres.num_generators()), 3));
    }
  return m;
}

}  // namespace

TEST(GroupRingMatrix, JsonRoundTrip) {
  const auto p = parse_presentation(kFree2);
  const auto m = from(R"({"rows":1,"cols":2,"entries":[[[[1,"x"],[-1,"1"]],[[1,"y*x^-1"]]]]})", p);
  EXPECT_EQ(m.rows(), 1u);
  EXPECT_EQ(m.at(0, 0).size(), 2u);
  EXPECT_EQ(m.at(0, 0)[1].coefficient, 1);
  const auto back = from(m.to_json(p.generators), p);
  EXPECT_EQ(back.to_json(p.generators), m.to_json(p.generators));
}

TEST(GroupRingMatrix, MergesEqualWords) {
  const auto p = parse_presentation(kFree2);
  const auto m = from(R"({"rows":1,"cols":1,"entries":[[[[1,"x"],[1,"x*y*y^-1"]]]]})", p);
  EXPECT_TRUE(m.at(0, 0).empty());
}

TEST(GroupRingMatrix, MalformedJsonThrows) {
  const auto p = parse_presentation(kFree2);
  EXPECT_THROW(from("{", p), ParseError);
  EXPECT_THROW(from(R"({"rows":1,"cols":1})", p), ParseError);
  EXPECT_THROW(from(R"({"rows":2,"cols":1,"entries":[[[]]]})", p), ParseError);
  EXPECT_THROW(from(R"({"rows":1,"cols":1,"entries":[[[[1,"z"]]]]})", p), ParseError);
  EXPECT_THROW(from(R"({"rows":1,"cols":1,"entries":[[[["a","x"]]]]})", p), ParseError);
}

TEST(RankSequence, ProcyclicJordanBlocks) {
  const auto p = parse_presentation(kZp2);
  const auto a = from(R"({"rows":1,"cols":1,"entries":[[[[1,"g"],[-1,"1"]]]]})", p);
  const auto r = rank_sequence(p, a, {2, 3, 5, 9});
  EXPECT_EQ(values(r), (std::vector<Rational>{Rational(1, 2), Rational(3, 4), Rational(7, 8), Rational(15, 16)}));
  std::vector<std::size_t> orders;
  for (const auto& l : r.levels) orders.push_back(l.order);
  EXPECT_EQ(orders, (std::vector<std::size_t>{2, 4, 8, 16}));
}

TEST(RankSequence, ProcyclicOddPrime) {
  const auto p = parse_presentation("p = 3\ngens = g\n");
  const auto a = from(R"({"rows":1,"cols":1,"entries":[[[[1,"g"],[-1,"1"]]]]})", p);
  const auto r = rank_sequence(p, a, {2, 4});
  EXPECT_EQ(values(r), (std::vector<Rational>{Rational(2, 3), Rational(8, 9)}));
}

TEST(RankSequence, FreeRow) {
  const auto p = parse_presentation(kFree2);
  const auto a = from(R"({"rows":1,"cols":2,"entries":[[[[1,"x"],[-1,"1"]],[[1,"y"],[-1,"1"]]]]})", p);
  const auto r = rank_sequence(p, a, {2, 3});
  EXPECT_EQ(values(r), (std::vector<Rational>{Rational(3, 4), Rational(31, 32)}));
  const auto diag = integrality_report(r);
  EXPECT_EQ(diag.nearest, BigInt(1));
  EXPECT_EQ(diag.final_gap, Rational(1, 32));
  EXPECT_TRUE(diag.consistent);
  EXPECT_TRUE(diag.strictly_decreasing);
}

TEST(RankSequence, ZeroMatrix) {
  const auto p = parse_presentation(kFree2);
  const auto r = rank_sequence(p, GroupRingMatrix(2, 2, 3), {2, 3});
  for (const auto& l : r.levels) EXPECT_EQ(l.value, 0);
}

TEST(RankSequence, MildKernelGenerator) {
  const auto p = parse_presentation(kMild1);
  const auto a = from(R"({"rows":1,"cols":1,"entries":[[[[1,"x"],[-1,"1"]]]]})", p);
  const auto r = rank_sequence(p, a, {2, 3, 5, 9}, {}, 3);
  std::vector<Rational> gaps;
  for (const auto& l : r.levels) gaps.push_back(l.gap);
  EXPECT_EQ(gaps, (std::vector<Rational>{Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16)}));
}

TEST(RankSequence, ParallelMatchesSerial) {
  const auto p = parse_presentation(kMild1);
  std::mt19937_64 rng(61);
  const auto a = random_group_ring_matrix(rng, p, 2, 2);
  const auto serial = rank_sequence(p, a, {2, 3, 4, 5}, {}, 1);
  const auto parallel = rank_sequence(p, a, {2, 3, 4, 5}, {}, 4);
  EXPECT_EQ(report_to_csv(serial), report_to_csv(parallel));
}

TEST(RankSequence, BudgetTruncatesToCompletedPrefix) {
  const auto p = parse_presentation(kFree2);
  Budget b;
  b.max_elements = 200;
  const auto r = rank_sequence(p, GroupRingMatrix(2, 1, 1), {2, 3, 4, 5}, b);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.levels.size(), 3u);
  EXPECT_FALSE(r.truncation_reason.empty());
}

TEST(RankSequence, RejectsBadLevelsAndPrimes) {
  const auto p = parse_presentation(kFree2);
  EXPECT_THROW(rank_sequence(p, GroupRingMatrix(2, 1, 1), {3, 2}), std::invalid_argument);
  EXPECT_THROW(rank_sequence(p, GroupRingMatrix(3, 1, 1), {2}), std::invalid_argument);
}

TEST(NormalizedRank, SylvesterAxiomsAtFixedLevel) {
  const auto p = parse_presentation(kMild1);
  const auto fq = enumerate_quotient(build_quotient(p, 4), 20000);
  std::mt19937_64 rng(67);
  for (int i = 0; i < 30; ++i) {
    const auto a = random_group_ring_matrix(rng, p, 2, 2), b = random_group_ring_matrix(rng, p, 2, 3);
    const Rational ra = normalized_rank(fq, a).value, rb = normalized_rank(fq, b).value;
    EXPECT_EQ(normalized_rank(fq, block_diagonal(a, b)).value, ra + rb);
    EXPECT_LE(normalized_rank(fq, a * b).value, std::min(ra, rb));
  }
  GroupRingMatrix one(2, 1, 1);
  one.add_term(0, 0, 1, GroupWord::identity());
  EXPECT_EQ(normalized_rank(fq, one).value, 1);
}

TEST(NormalizedRank, RegularRepresentationIsMultiplicative) {
  const auto p = parse_presentation(kMild1);
  const auto fq = enumerate_quotient(build_quotient(p, 4), 20000);
  std::mt19937_64 rng(71);
  for (int i = 0; i < 10; ++i) {
    const auto a = random_group_ring_matrix(rng, p, 2, 2), b = random_group_ring_matrix(rng, p, 2, 2);
    EXPECT_EQ(regular_rep(fq, a * b), regular_rep(fq, a) * regular_rep(fq, b));
  }
}

TEST(SubmatrixCheck, HoldsOnRandomMatrices) {
  const auto p = parse_presentation(kMild1);
  std::mt19937_64 rng(73);
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(submatrix_check(p, random_group_ring_matrix(rng, p, 2, 3), 4));
}

TEST(Integrality, NearestIntegerAndGap) {
  EXPECT_EQ(nearest_integer(Rational(1, 2)), BigInt(1));
  EXPECT_EQ(nearest_integer(Rational(-1, 2)), BigInt(0));
  EXPECT_EQ(nearest_integer(Rational(7, 4)), BigInt(2));
  EXPECT_EQ(gap_to_integer(Rational(7, 4)), Rational(1, 4));
  EXPECT_EQ(gap_to_integer(Rational(3)), Rational(0));
}

TEST(Reports, CsvAndJsonAreStable) {
  const auto p = parse_presentation(kZp2);
  const auto a = from(R"({"rows":1,"cols":1,"entries":[[[[1,"g"],[-1,"1"]]]]})", p);
  const auto r = rank_sequence(p, a, {2, 3});
  EXPECT_EQ(report_to_csv(r), "k,order,raw_rank,value_num,value_den,gap_num,gap_den\n2,2,1,1,2,1,2\n3,4,3,3,4,1,4\n");
  const auto json = report_to_json(r, integrality_report(r));
  EXPECT_NE(json.find("\"levels\""), std::string::npos);
  EXPECT_EQ(json, report_to_json(rank_sequence(p, a, {2, 3}), integrality_report(r)));
}
