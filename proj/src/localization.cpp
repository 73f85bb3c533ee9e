#include "fpgrank/localization.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "fpgrank/errors.hpp"
#include "fpgrank/fplinalg.hpp"

namespace fpgrank {

BaseRing BaseRing::prime_field(unsigned p) { return BaseRing(RingKind::prime_field, p, 1); }

BaseRing BaseRing::truncated(unsigned p, int m) {
  if (m < 1) throw std::invalid_argument("truncation order must be positive");
  return BaseRing(RingKind::truncated_poly, p, m);
}

BaseRing BaseRing::matrices(unsigned p, int m) {
  if (m < 1) throw std::invalid_argument("matrix size must be positive");
  return BaseRing(RingKind::matrix, p, m);
}

std::size_t BaseRing::element_size() const {
  switch (kind_) {
    case RingKind::prime_field: return 1;
    case RingKind::truncated_poly: return std::size_t(m_);
    case RingKind::matrix: return std::size_t(m_) * std::size_t(m_);
  }
  return 0;
}

BaseRing::Element BaseRing::one() const { return from_int(1); }

BaseRing::Element BaseRing::from_int(std::int64_t c) const {
  Element r = zero();
  const Residue v = field_.from_int(c);
  if (kind_ == RingKind::matrix)
    for (int i = 0; i < m_; ++i) r[std::size_t(i) * m_ + i] = v;
  else
    r[0] = v;
  return r;
}

BaseRing::Element BaseRing::add(const Element& a, const Element& b) const {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = field_.add(a[i], b[i]);
  return r;
}

BaseRing::Element BaseRing::sub(const Element& a, const Element& b) const {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = field_.sub(a[i], b[i]);
  return r;
}

BaseRing::Element BaseRing::neg(const Element& a) const {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = field_.neg(a[i]);
  return r;
}

BaseRing::Element BaseRing::mul(const Element& a, const Element& b) const {
  Element r = zero();
  switch (kind_) {
    case RingKind::prime_field:
      r[0] = field_.mul(a[0], b[0]);
      break;
    case RingKind::truncated_poly:
      for (int i = 0; i < m_; ++i) {
        if (!a[i]) continue;
        for (int j = 0; i + j < m_; ++j) r[i + j] = field_.add(r[i + j], field_.mul(a[i], b[j]));
      }
      break;
    case RingKind::matrix:
      for (int i = 0; i < m_; ++i)
        for (int l = 0; l < m_; ++l) {
          const Residue c = a[std::size_t(i) * m_ + l];
          if (!c) continue;
          for (int j = 0; j < m_; ++j)
            r[std::size_t(i) * m_ + j] = field_.add(r[std::size_t(i) * m_ + j], field_.mul(c, b[std::size_t(l) * m_ + j]));
        }
      break;
  }
  return r;
}

bool BaseRing::is_zero(const Element& a) const {
  for (auto c : a)
    if (c) return false;
  return true;
}

namespace {

FpMatrix to_fp(const BaseRing& ring, const BaseRing::Element& a) {
  const int m = ring.size();
  FpMatrix r(ring.p(), m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) r.set(i, j, a[std::size_t(i) * m + j]);
  return r;
}

}  // namespace

bool BaseRing::is_unit(const Element& a) const {
  if (kind_ != RingKind::matrix) return a[0] != 0;
  return rank(to_fp(*this, a)) == std::size_t(m_);
}

BaseRing::Element BaseRing::inverse(const Element& a) const {
  if (!is_unit(a)) throw std::domain_error("element is not a unit");
  switch (kind_) {
    case RingKind::prime_field:
      return Element{field_.inv(a[0])};
    case RingKind::truncated_poly: {
      Element r = zero();
      const Residue c_inv = field_.inv(a[0]);
      r[0] = c_inv;
      for (int n = 1; n < m_; ++n) {
        Residue s = 0;
        for (int i = 1; i <= n; ++i) s = field_.add(s, field_.mul(a[i], r[n - i]));
        r[n] = field_.neg(field_.mul(c_inv, s));
      }
      return r;
    }
    case RingKind::matrix: {
      FpMatrix inv(p(), m_, m_);
      invert(to_fp(*this, a), inv);
      Element r = zero();
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) r[std::size_t(i) * m_ + j] = inv.get(i, j);
      return r;
    }
  }
  return zero();
}

BaseRing::Element BaseRing::random(std::mt19937_64& rng) const {
  std::uniform_int_distribution<unsigned> coef(0, p() - 1);
  Element r = zero();
  for (auto& c : r) c = Residue(coef(rng));
  return r;
}

std::string BaseRing::to_string(const Element& a) const {
  std::ostringstream out;
  switch (kind_) {
    case RingKind::prime_field:
      out << int(a[0]);
      break;
    case RingKind::truncated_poly: {
      bool first = true;
      for (int i = 0; i < m_; ++i) {
        if (!a[i]) continue;
        if (!first) out << " + ";
        first = false;
        if (i == 0 || a[i] != 1) out << int(a[i]);
        if (i > 0) out << (a[i] != 1 ? "*" : "") << "t" << (i > 1 ? "^" + std::to_string(i) : "");
      }
      if (first) out << "0";
      break;
    }
    case RingKind::matrix:
      out << "[";
      for (int i = 0; i < m_; ++i) {
        out << (i ? "; " : "");
        for (int j = 0; j < m_; ++j) out << (j ? " " : "") << int(a[std::size_t(i) * m_ + j]);
      }
      out << "]";
      break;
  }
  return out.str();
}

RingMatrix::RingMatrix(BaseRing ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols, ring_.zero()) {}

RingMatrix RingMatrix::identity(const BaseRing& ring, std::size_t n) {
  RingMatrix r(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) r.at(i, i) = ring.one();
  return r;
}

RingMatrix RingMatrix::random(const BaseRing& ring, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  RingMatrix r(ring, rows, cols);
  for (auto& e : r.data_) e = ring.random(rng);
  return r;
}

RingMatrix RingMatrix::operator+(const RingMatrix& o) const {
  if (!(ring_ == o.ring_) || rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matrix sum: shape or ring mismatch");
  RingMatrix r(ring_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = ring_.add(data_[i], o.data_[i]);
  return r;
}

RingMatrix RingMatrix::operator*(const RingMatrix& o) const {
  if (!(ring_ == o.ring_) || cols_ != o.rows_) throw std::invalid_argument("matrix product: shape or ring mismatch");
  RingMatrix r(ring_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t l = 0; l < cols_; ++l) {
      if (ring_.is_zero(at(i, l))) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) = ring_.add(r.at(i, j), ring_.mul(at(i, l), o.at(l, j)));
    }
  return r;
}

RingMatrix RingMatrix::negated() const {
  RingMatrix r(ring_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = ring_.neg(data_[i]);
  return r;
}

RingMatrix RingMatrix::mapped(const BaseRing& target, const std::function<Element(const Element&)>& phi) const {
  RingMatrix r(target, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = phi(data_[i]);
  return r;
}

RingMatrix RingMatrix::inverse() const {
  if (rows_ != cols_) throw std::domain_error("only square matrices are invertible");
  const std::size_t n = rows_;
  if (ring_.is_local()) {
    RingMatrix a = *this;
    RingMatrix inv = identity(ring_, n);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && !ring_.is_unit(a.at(piv, c))) ++piv;
      if (piv == n) throw std::domain_error("matrix is not invertible");
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a.at(c, j), a.at(piv, j));
        std::swap(inv.at(c, j), inv.at(piv, j));
      }
      const Element u = ring_.inverse(a.at(c, c));
      for (std::size_t j = 0; j < n; ++j) {
        a.at(c, j) = ring_.mul(u, a.at(c, j));
        inv.at(c, j) = ring_.mul(u, inv.at(c, j));
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c || ring_.is_zero(a.at(i, c))) continue;
        const Element f = a.at(i, c);
        for (std::size_t j = 0; j < n; ++j) {
          a.at(i, j) = ring_.sub(a.at(i, j), ring_.mul(f, a.at(c, j)));
          inv.at(i, j) = ring_.sub(inv.at(i, j), ring_.mul(f, inv.at(c, j)));
        }
      }
    }
    return inv;
  }

  const std::size_t m = std::size_t(ring_.size());
  FpMatrix flat(ring_.p(), n * m, n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v) flat.set(i * m + u, j * m + v, at(i, j)[u * m + v]);
  FpMatrix out(ring_.p(), n * m, n * m);
  if (!invert(flat, out)) throw std::domain_error("matrix is not invertible");
  RingMatrix r(ring_, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v) r.at(i, j)[u * m + v] = out.get(i * m + u, j * m + v);
  return r;
}

RingMatrix block_matrix(const RingMatrix& a, const RingMatrix& b, const RingMatrix& c, const RingMatrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
    throw std::invalid_argument("block_matrix: incompatible blocks");
  RingMatrix r(a.ring(), a.rows() + c.rows(), a.cols() + b.cols());
  auto place = [&](const RingMatrix& m, std::size_t r0, std::size_t c0) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) r.at(r0 + i, c0 + j) = m.at(i, j);
  };
  place(a, 0, 0);
  place(b, 0, a.cols());
  place(c, a.rows(), 0);
  place(d, a.rows(), a.cols());
  return r;
}

void LocTriple::validate() const {
  const std::size_t n = C.rows();
  if (n == 0 || C.cols() != n || a.rows() != 1 || a.cols() != n || x.rows() != n || x.cols() != 1)
    throw std::invalid_argument("triple dimensions do not agree");
  if (!(a.ring() == C.ring()) || !(x.ring() == C.ring())) throw std::invalid_argument("triple mixes base rings");
}

LocTriple loc_lambda(const BaseRing& ring, const BaseRing::Element& r) {
  LocTriple t{RingMatrix::identity(ring, 1), RingMatrix::identity(ring, 1), RingMatrix(ring, 1, 1)};
  t.x.at(0, 0) = r;
  return t;
}

namespace {

void check_same_ring(const LocTriple& t1, const LocTriple& t2) {
  t1.validate();
  t2.validate();
  if (!(t1.ring() == t2.ring())) throw std::invalid_argument("triples over different base rings");
}

}  // namespace

LocTriple loc_add(const LocTriple& t1, const LocTriple& t2) {
  check_same_ring(t1, t2);
  const BaseRing& R = t1.ring();
  const std::size_t n = t1.size(), m = t2.size();
  LocTriple r{RingMatrix(R, 1, n + m), block_matrix(t1.C, RingMatrix(R, n, m), RingMatrix(R, m, n), t2.C),
              RingMatrix(R, n + m, 1)};
  for (std::size_t j = 0; j < n; ++j) r.a.at(0, j) = t1.a.at(0, j);
  for (std::size_t j = 0; j < m; ++j) r.a.at(0, n + j) = t2.a.at(0, j);
  for (std::size_t i = 0; i < n; ++i) r.x.at(i, 0) = t1.x.at(i, 0);
  for (std::size_t i = 0; i < m; ++i) r.x.at(n + i, 0) = t2.x.at(i, 0);
  return r;
}

LocTriple loc_mul(const LocTriple& t1, const LocTriple& t2) {
  check_same_ring(t1, t2);
  const BaseRing& R = t1.ring();
  const std::size_t n = t1.size(), m = t2.size();
  LocTriple r{RingMatrix(R, 1, n + m), block_matrix(t1.C, (t1.x * t2.a).negated(), RingMatrix(R, m, n), t2.C),
              RingMatrix(R, n + m, 1)};
  for (std::size_t j = 0; j < n; ++j) r.a.at(0, j) = t1.a.at(0, j);
  for (std::size_t i = 0; i < m; ++i) r.x.at(n + i, 0) = t2.x.at(i, 0);
  return r;
}

LocTriple r1_transform(const LocTriple& t, const RingMatrix& u, const RingMatrix& v) {
  t.validate();
  const std::size_t n = t.size();
  if (u.rows() != n || u.cols() != n || v.rows() != n || v.cols() != n)
    throw std::invalid_argument("r1_transform: dimension mismatch");
  return LocTriple{t.a * u, v * t.C * u, v * t.x};
}

EvalTarget identity_target(const BaseRing& ring) {
  return EvalTarget{"identity", ring, ring, [](const BaseRing::Element& e) { return e; }};
}

EvalTarget constant_term_target(const BaseRing& trunc) {
  if (trunc.kind() != RingKind::truncated_poly) throw std::invalid_argument("t -> 0 needs a truncated polynomial ring");
  return EvalTarget{"fp", trunc, BaseRing::prime_field(trunc.p()),
                    [](const BaseRing::Element& e) { return BaseRing::Element{e[0]}; }};
}

EvalTarget jordan_target(const BaseRing& trunc, int r) {
  if (trunc.kind() != RingKind::truncated_poly) throw std::invalid_argument("t -> J needs a truncated polynomial ring");
  if (r < 1 || r > trunc.size())
    throw std::invalid_argument("Jordan block size must lie in [1, " + std::to_string(trunc.size()) + "]");
  const BaseRing target = BaseRing::matrices(trunc.p(), r);
  std::vector<BaseRing::Element> powers{target.one()};
  BaseRing::Element j = target.zero();
  for (int i = 0; i + 1 < r; ++i) j[std::size_t(i) * r + i + 1] = 1;
  for (int i = 1; i < trunc.size(); ++i) powers.push_back(target.mul(powers.back(), j));
  return EvalTarget{"matrix:" + std::to_string(r), trunc, target, [target, powers](const BaseRing::Element& e) {
                      BaseRing::Element acc = target.zero();
                      for (std::size_t i = 0; i < e.size(); ++i)
                        if (e[i]) acc = target.add(acc, target.mul(target.from_int(e[i]), powers[i]));
                      return acc;
                    }};
}

EvalTarget parse_target(std::string_view spec, const BaseRing& trunc) {
  if (spec == "trunc") return identity_target(trunc);
  if (spec == "fp") return constant_term_target(trunc);
  if (spec.substr(0, 7) == "matrix:") {
    const std::string n(spec.substr(7));
    std::size_t used = 0;
    int r = 0;
    try {
      r = std::stoi(n, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == n.size() && !n.empty()) return jordan_target(trunc, r);
  }
  throw std::invalid_argument("unknown evaluation target '" + std::string(spec) + "' (use trunc, fp or matrix:R)");
}

BaseRing::Element loc_eval(const LocTriple& t, const EvalTarget& target) {
  t.validate();
  if (!(t.ring() == target.source)) throw std::invalid_argument("evaluation target has a different source ring");
  const RingMatrix a = t.a.mapped(target.target, target.phi);
  const RingMatrix c = t.C.mapped(target.target, target.phi);
  const RingMatrix x = t.x.mapped(target.target, target.phi);
  return (a * c.inverse() * x).at(0, 0);
}

LocTriple random_triple(const BaseRing& ring, std::size_t n, std::mt19937_64& rng) {
  RingMatrix c = RingMatrix::random(ring, n, n, rng);
  for (;;) {
    try {
      c.inverse();
      break;
    } catch (const std::domain_error&) {
      c = RingMatrix::random(ring, n, n, rng);
    }
  }
  return LocTriple{RingMatrix::random(ring, 1, n, rng), std::move(c), RingMatrix::random(ring, n, 1, rng)};
}

namespace {

using nlohmann::json;

BaseRing::Element parse_element(const json& e, const BaseRing& ring) {
  BaseRing::Element r = ring.zero();
  if (e.is_number_integer()) return ring.from_int(e.get<std::int64_t>());
  if (!e.is_array() || e.size() > r.size())
    throw ParseError("triple JSON: entry must be an integer or at most " + std::to_string(r.size()) + " coefficients");
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i].is_number_integer()) throw ParseError("triple JSON: coefficients must be integers");
    r[i] = ring.field().from_int(e[i].get<std::int64_t>());
  }
  return r;
}

RingMatrix parse_matrix(const json& m, const BaseRing& ring, const char* name) {
  if (!m.is_array() || m.empty() || !m[0].is_array())
    throw ParseError(std::string("triple JSON: '") + name + "' must be a nonempty list of rows");
  RingMatrix r(ring, m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i].is_array() || m[i].size() != r.cols())
      throw ParseError(std::string("triple JSON: ragged rows in '") + name + "'");
    for (std::size_t j = 0; j < r.cols(); ++j) r.at(i, j) = parse_element(m[i][j], ring);
  }
  return r;
}

}  // namespace

TripleFile parse_triples_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("triple JSON: ") + e.what());
  }
  try {
    const auto p = doc.at("p").get<std::int64_t>();
    const auto m = doc.value("m", std::int64_t(1));
    if (p < 2 || p > 255 || !is_prime(unsigned(p))) throw ParseError("triple JSON: p must be a prime below 256");
    if (m < 1 || m > 64) throw ParseError("triple JSON: m must lie in [1, 64]");
    TripleFile f{BaseRing::truncated(unsigned(p), int(m)), {}};
    const json& ts = doc.at("triples");
    if (!ts.is_array() || ts.empty()) throw ParseError("triple JSON: 'triples' must be a nonempty list");
    for (const json& t : ts) {
      LocTriple lt{parse_matrix(t.at("a"), f.ring, "a"), parse_matrix(t.at("C"), f.ring, "C"),
                   parse_matrix(t.at("x"), f.ring, "x")};
      try {
        lt.validate();
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("triple JSON: ") + e.what());
      }
      f.triples.push_back(std::move(lt));
    }
    return f;
  } catch (const json::exception& e) {
    throw ParseError(std::string("triple JSON: ") + e.what());
  }
}

}  // namespace fpgrank
