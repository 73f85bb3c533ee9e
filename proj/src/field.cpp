#include "fpgrank/field.hpp"

#include <stdexcept>
#include <string>

namespace fpgrank {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(unsigned p) : p_(p) {
  if (p >= 256 || !is_prime(p))
    throw std::invalid_argument("field characteristic must be a prime below 256, got " +
                                std::to_string(p));
  for (unsigned a = 1; a < p; ++a)
    for (unsigned b = 1; b < p; ++b)
      if ((a * b) % p == 1) inverse_[a] = Residue(b);
}

Residue binomial_mod_p(std::uint64_t n, std::uint64_t k, unsigned p) {
  unsigned result = 1;
  while (n > 0 || k > 0) {
    unsigned nd = unsigned(n % p), kd = unsigned(k % p);
    if (kd > nd) return 0;
    unsigned num = 1, den = 1;
    for (unsigned i = 0; i < kd; ++i) {
      num = num * (nd - i) % p;
      den = den * (i + 1) % p;
    }
    // den^(p-2) is the inverse of den since 0 < den < p
    unsigned inv = 1, base = den;
    for (unsigned e = p - 2; e > 0; e >>= 1) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
    }
    unsigned c = num * inv % p;
    result = result * c % p;
    n /= p;
    k /= p;
  }
  return Residue(result);
}

}  // namespace fpgrank
