#pragma once

#include <array>
#include <cstdint>

namespace fpgrank {

/// Residue in 0..p-1 for a prime p < 256.
using Residue = std::uint8_t;

bool is_prime(std::int64_t n);

/// Arithmetic in F_p for a small prime p; inverses come from a table.
class PrimeField {
 public:
  explicit PrimeField(unsigned p);

  unsigned p() const { return p_; }

  Residue add(Residue a, Residue b) const {
    unsigned s = unsigned(a) + b;
    return Residue(s >= p_ ? s - p_ : s);
  }
  Residue sub(Residue a, Residue b) const {
    return Residue(a >= b ? a - b : a + p_ - b);
  }
  Residue neg(Residue a) const { return Residue(a == 0 ? 0 : p_ - a); }
  Residue mul(Residue a, Residue b) const {
    return Residue((unsigned(a) * b) % p_);
  }
  /// Undefined for a == 0.
  Residue inv(Residue a) const { return inverse_[a]; }

  Residue from_int(std::int64_t v) const {
    std::int64_t r = v % std::int64_t(p_);
    return Residue(r < 0 ? r + p_ : r);
  }

 private:
  unsigned p_;
  std::array<Residue, 256> inverse_{};
};

/// C(n, k) mod p by Lucas's theorem.
Residue binomial_mod_p(std::uint64_t n, std::uint64_t k, unsigned p);

}  // namespace fpgrank
