#include "fpgrank/rank_approx.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "fpgrank/errors.hpp"

namespace fpgrank {

using nlohmann::json;

GroupRingMatrix::GroupRingMatrix(unsigned p, std::size_t rows, std::size_t cols)
    : field_(p), rows_(rows), cols_(cols), entries_(rows * cols) {}

void GroupRingMatrix::add_term(std::size_t i, std::size_t j, std::int64_t c, const GroupWord& w) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("GroupRingMatrix::add_term: index out of range");
  Residue r = field_.from_int(c);
  if (r == 0) return;
  GroupWord reduced = free_reduce(w);
  Entry& e = entries_[i * cols_ + j];
  for (auto it = e.begin(); it != e.end(); ++it) {
    if (it->word == reduced) {
      it->coefficient = field_.add(it->coefficient, r);
      if (it->coefficient == 0) e.erase(it);
      return;
    }
  }
  e.push_back(Term{r, std::move(reduced)});
}

GroupRingMatrix GroupRingMatrix::from_json(std::string_view json_text, const GroupPresentation& pres) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("matrix JSON: ") + e.what());
  }
  try {
    const auto rows = doc.at("rows").get<std::int64_t>();
    const auto cols = doc.at("cols").get<std::int64_t>();
    if (rows < 0 || cols < 0) throw ParseError("matrix JSON: negative dimensions");
    const json& entries = doc.at("entries");
    if (!entries.is_array() || std::int64_t(entries.size()) != rows)
      throw ParseError("matrix JSON: 'entries' must list " + std::to_string(rows) + " rows");
    GroupRingMatrix m(pres.p, std::size_t(rows), std::size_t(cols));
    for (std::size_t i = 0; i < std::size_t(rows); ++i) {
      const json& row = entries[i];
      if (!row.is_array() || std::int64_t(row.size()) != cols)
        throw ParseError("matrix JSON: row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
      for (std::size_t j = 0; j < std::size_t(cols); ++j) {
        const json& entry = row[j];
        if (!entry.is_array()) throw ParseError("matrix JSON: entry must be a list of [c, word] pairs");
        for (const json& term : entry) {
          if (!term.is_array() || term.size() != 2 || !term[0].is_number_integer() || !term[1].is_string())
            throw ParseError("matrix JSON: each term must be [integer, \"word\"]");
          m.add_term(i, j, term[0].get<std::int64_t>(), parse_word(term[1].get<std::string>(), pres.generators));
        }
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("matrix JSON: ") + e.what());
  }
}

std::string GroupRingMatrix::to_json(const std::vector<std::string>& names) const {
  json entries = json::array();
  for (std::size_t i = 0; i < rows_; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < cols_; ++j) {
      json entry = json::array();
      for (const auto& t : at(i, j)) entry.push_back({int(t.coefficient), to_string(t.word, names)});
      row.push_back(std::move(entry));
    }
    entries.push_back(std::move(row));
  }
  return json{{"rows", rows_}, {"cols", cols_}, {"entries", entries}}.dump();
}

GroupRingMatrix GroupRingMatrix::submatrix(const std::vector<std::size_t>& row_ids,
                                           const std::vector<std::size_t>& col_ids) const {
  GroupRingMatrix r(p(), row_ids.size(), col_ids.size());
  for (std::size_t i = 0; i < row_ids.size(); ++i)
    for (std::size_t j = 0; j < col_ids.size(); ++j) r.entries_[i * r.cols_ + j] = at(row_ids[i], col_ids[j]);
  return r;
}

GroupRingMatrix block_diagonal(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  if (a.p() != b.p()) throw std::invalid_argument("block_diagonal: prime mismatch");
  GroupRingMatrix r(a.p(), a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) r.entries_[i * r.cols_ + j] = a.at(i, j);
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) r.entries_[(a.rows_ + i) * r.cols_ + a.cols_ + j] = b.at(i, j);
  return r;
}

GroupRingMatrix operator*(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  if (a.p() != b.p() || a.cols_ != b.rows_) throw std::invalid_argument("GroupRingMatrix product: shape mismatch");
  GroupRingMatrix r(a.p(), a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j)
      for (std::size_t k = 0; k < a.cols_; ++k)
        for (const auto& ta : a.at(i, k))
          for (const auto& tb : b.at(k, j))
            r.add_term(i, j, std::int64_t(ta.coefficient) * tb.coefficient, ta.word * tb.word);
  return r;
}

FpMatrix regular_rep(const FiniteQuotient& fq, const GroupRingMatrix& a) {
  const std::size_t q = fq.order();
  const QuotientAlgebra& alg = fq.algebra();
  if (a.p() != alg.p()) throw std::invalid_argument("regular_rep: matrix and quotient use different primes");

  // right multiplication by each generator and inverse as a permutation of the elements
  const std::size_t d = alg.num_generators();
  std::vector<std::vector<FiniteQuotient::Id>> step(2 * d, std::vector<FiniteQuotient::Id>(q));
  for (std::size_t g = 0; g < d; ++g)
    for (FiniteQuotient::Id h = 0; h < q; ++h) {
      step[2 * g][h] = group_mul(fq, h, fq.generator(int(g)));
      step[2 * g + 1][h] = group_mul(fq, h, fq.generator_inverse(int(g)));
    }

  std::map<std::vector<std::pair<int, int>>, std::vector<FiniteQuotient::Id>> word_perm;
  auto right_action = [&](const GroupWord& w) -> const std::vector<FiniteQuotient::Id>& {
    std::vector<std::pair<int, int>> key;
    for (const auto& l : w.letters) key.emplace_back(l.generator, l.exponent);
    auto it = word_perm.find(key);
    if (it != word_perm.end()) return it->second;
    std::vector<FiniteQuotient::Id> perm(q);
    for (FiniteQuotient::Id h = 0; h < q; ++h) {
      FiniteQuotient::Id cur = h;
      for (const auto& l : w.letters) {
        if (l.generator < 0 || std::size_t(l.generator) >= d)
          throw std::logic_error("regular_rep: word uses an unknown generator");
        const auto& s = step[2 * l.generator + (l.exponent < 0 ? 1 : 0)];
        for (int e = 0; e < std::abs(l.exponent); ++e) cur = s[cur];
      }
      perm[h] = cur;
    }
    return word_perm.emplace(std::move(key), std::move(perm)).first->second;
  };

  FpMatrix m(a.p(), a.rows() * q, a.cols() * q);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (const auto& t : a.at(i, j)) {
        const auto& perm = right_action(t.word);
        for (std::size_t h = 0; h < q; ++h) m.add_to(i * q + h, j * q + perm[h], t.coefficient);
      }
  return m;
}

BigInt nearest_integer(const Rational& v) {
  Rational shifted = v + Rational(1, 2);
  BigInt num = boost::multiprecision::numerator(shifted);
  BigInt den = boost::multiprecision::denominator(shifted);
  BigInt q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

Rational gap_to_integer(const Rational& v) {
  Rational g = v - Rational(nearest_integer(v));
  return g < 0 ? Rational(-g) : g;
}

RankLevel normalized_rank(const FiniteQuotient& fq, const GroupRingMatrix& a) {
  RankLevel level;
  level.k = fq.algebra().cutoff();
  level.order = fq.order();
  level.raw_rank = rank(regular_rep(fq, a));
  level.value = Rational(BigInt(level.raw_rank), BigInt(level.order));
  level.gap = gap_to_integer(level.value);
  return level;
}

RankReport rank_sequence(const GroupPresentation& pres, const GroupRingMatrix& a, const std::vector<int>& k_list,
                         const Budget& budget, unsigned jobs) {
  if (k_list.empty()) throw std::invalid_argument("rank_sequence: empty k list");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (k_list[i] < 1) throw std::invalid_argument("rank_sequence: k must be positive");
    if (i && k_list[i] <= k_list[i - 1]) throw std::invalid_argument("rank_sequence: k list must be ascending");
  }
  if (a.p() != pres.p) throw std::invalid_argument("rank_sequence: matrix prime differs from presentation");

  struct Outcome {
    std::optional<RankLevel> level;
    std::string budget_error;
    std::exception_ptr failure;
  };
  std::vector<Outcome> outcomes(k_list.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < k_list.size();) {
      try {
        auto qa = build_quotient(pres, k_list[i], budget);
        auto fq = enumerate_quotient(qa, budget.max_elements);
        outcomes[i].level = normalized_rank(fq, a);
      } catch (const BudgetExceeded& e) {
        outcomes[i].budget_error = e.what();
      } catch (...) {
        outcomes[i].failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, unsigned(k_list.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RankReport report;
  report.rows = a.rows();
  report.cols = a.cols();
  for (auto& o : outcomes) {
    if (o.failure) std::rethrow_exception(o.failure);
    if (!o.level) {
      report.truncated = true;
      report.truncation_reason = o.budget_error;
      break;
    }
    report.levels.push_back(std::move(*o.level));
  }
  return report;
}

IntegralityDiagnostics integrality_report(const RankReport& r, const Rational& threshold) {
  IntegralityDiagnostics d;
  for (const auto& l : r.levels) d.gaps.push_back(l.gap);
  if (!r.levels.empty()) {
    d.nearest = nearest_integer(r.levels.back().value);
    d.final_gap = r.levels.back().gap;
  }
  d.consistent = d.final_gap < threshold;
  d.strictly_decreasing = true;
  for (std::size_t i = 1; i < d.gaps.size(); ++i)
    if (!(d.gaps[i] < d.gaps[i - 1])) d.strictly_decreasing = false;
  return d;
}

bool submatrix_check(const GroupPresentation& pres, const GroupRingMatrix& a, int k, const Budget& budget) {
  auto qa = build_quotient(pres, k, budget);
  auto fq = enumerate_quotient(qa, budget.max_elements);
  const std::size_t full = rank(regular_rep(fq, a));
  std::vector<std::size_t> all_rows(a.rows()), all_cols(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) all_rows[i] = i;
  for (std::size_t j = 0; j < a.cols(); ++j) all_cols[j] = j;
  for (std::size_t drop = 0; drop < a.rows(); ++drop) {
    auto rows = all_rows;
    rows.erase(rows.begin() + long(drop));
    if (rank(regular_rep(fq, a.submatrix(rows, all_cols))) > full) return false;
  }
  for (std::size_t drop = 0; drop < a.cols(); ++drop) {
    auto cols = all_cols;
    cols.erase(cols.begin() + long(drop));
    if (rank(regular_rep(fq, a.submatrix(all_rows, cols))) > full) return false;
  }
  return true;
}

namespace {

std::string str(const BigInt& v) { return v.str(); }

}  // namespace

std::string report_to_csv(const RankReport& r) {
  std::ostringstream out;
  out << "k,order,raw_rank,value_num,value_den,gap_num,gap_den\n";
  for (const auto& l : r.levels) {
    out << l.k << ',' << l.order << ',' << l.raw_rank << ',' << str(numerator(l.value)) << ','
        << str(denominator(l.value)) << ',' << str(numerator(l.gap)) << ',' << str(denominator(l.gap)) << '\n';
  }
  return out.str();
}

std::string report_to_json(const RankReport& r, const IntegralityDiagnostics& diag) {
  auto num = [](const BigInt& v) { return json::parse(v.str()); };
  json levels = json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"k", l.k},
                      {"order", l.order},
                      {"raw_rank", l.raw_rank},
                      {"value_num", num(numerator(l.value))},
                      {"value_den", num(denominator(l.value))},
                      {"gap_num", num(numerator(l.gap))},
                      {"gap_den", num(denominator(l.gap))}});
  }
  json gaps = json::array();
  for (const auto& g : diag.gaps) gaps.push_back(numerator(g).str() + "/" + denominator(g).str());
  json doc{{"rows", r.rows},
           {"cols", r.cols},
           {"truncated", r.truncated},
           {"levels", levels},
           {"integrality",
            {{"nearest_integer", num(diag.nearest)},
             {"final_gap_num", num(numerator(diag.final_gap))},
             {"final_gap_den", num(denominator(diag.final_gap))},
             {"gaps", gaps},
             {"consistent", diag.consistent},
             {"gaps_strictly_decreasing", diag.strictly_decreasing}}}};
  if (r.truncated) doc["truncation_reason"] = r.truncation_reason;
  return doc.dump(2) + "\n";
}

}  // namespace fpgrank
