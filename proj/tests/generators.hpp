#pragma once

#include <random>

#include "fpgrank/fplinalg.hpp"
#include "fpgrank/free_series.hpp"
#include "fpgrank/presentation.hpp"

namespace fpgrank::gen {

inline GroupWord random_word(std::mt19937_64& rng, int num_generators, int max_letters) {
  std::uniform_int_distribution<int> len(0, max_letters), gen(0, num_generators - 1), exp(-2, 2);
  GroupWord w;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    int e = exp(rng);
    if (e == 0) e = 1;
    w = w * GroupWord::generator(gen(rng), e);
  }
  return w;
}

inline FpMatrix random_matrix(std::mt19937_64& rng, unsigned p, std::size_t rows, std::size_t cols,
                              double density = 0.5) {
  FpMatrix m(p, rows, cols);
  std::bernoulli_distribution nonzero(density);
  std::uniform_int_distribution<unsigned> coef(1, p - 1);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (nonzero(rng)) m.set(i, j, Residue(coef(rng)));
  return m;
}

/// Random polynomial with terms of weighted degree in [min_degree, cutoff).
inline TruncPoly random_poly(std::mt19937_64& rng, std::shared_ptr<const SeriesContext> ctx, int min_degree,
                             int terms = 6) {
  TruncPoly f(ctx);
  const int nv = int(ctx->num_vars());
  std::uniform_int_distribution<int> var(0, nv - 1), len(0, ctx->cutoff);
  std::uniform_int_distribution<unsigned> coef(1, ctx->p - 1);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> letters;
    int deg = 0;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      const int v = var(rng);
      letters.push_back(v);
      deg += ctx->weights[v];
    }
    if (deg < min_degree || deg >= ctx->cutoff) continue;
    f.add_term(letters, coef(rng));
  }
  return f;
}

}  // namespace fpgrank::gen
