#pragma once

// Lindenstrauss basic sequence in l_1^{2n+2}: x_k = e_k - (e_{2k+1} + e_{2k+2}) / 2
// (indices from 1). The biorthogonal functionals are dyadic sums along the
// ancestor chain of the binary tree k -> {2k+1, 2k+2}, so every value is exact.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "latmax/basis.hpp"
#include "latmax/constructions/bundle.hpp"

namespace latmax {

/// Tree parent of a 1-based coordinate; 0 for the roots 1 and 2.
inline std::size_t lindenstrauss_parent(std::size_t i) { return i >= 3 ? (i - 1) / 2 : 0; }

inline BiorthogonalSystem lindenstrauss(std::size_t n) {
  if (n == 0) throw DomainError("lindenstrauss: n must be positive");
  const Space space = Space::lp(2 * n + 2, 1.0);
  std::vector<SparseVector> xs(n), fs(n);
  std::vector<std::string> labels(n);
  for (std::size_t k = 1; k <= n; ++k) {
    auto& x = xs[k - 1];
    x.index = {k - 1, 2 * k, 2 * k + 1};
    x.value = {1.0, -0.5, -0.5};
    auto& f = fs[k - 1];
    double w = 1.0;
    for (std::size_t i = k; i != 0; i = lindenstrauss_parent(i), w *= 0.5) {
      f.index.push_back(i - 1);
      f.value.push_back(w);
    }
    labels[k - 1] = "x" + std::to_string(k);
  }
  return BiorthogonalSystem(space, std::move(xs), std::move(fs), false, std::move(labels));
}

/// I_k = {2^{k+1} - 1, ..., 2^{k+1} + 2^k - 2}, 1-based.
inline std::vector<std::size_t> lindenstrauss_level_set(unsigned k) {
  if (k > 40) throw DomainError("level set index too large");
  const std::size_t first = (std::size_t{1} << (k + 1)) - 1;
  std::vector<std::size_t> out(std::size_t{1} << k);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = first + t;
  return out;
}

/// Smallest n for which y_m is available: phi_2 applied m times to 1.
inline std::size_t lindenstrauss_min_length(unsigned m) { return 3 * (std::size_t{1} << m) - 2; }

/// Coefficients of y_m = sum_{k<m} 2^{-k} sum_{j in I_k} x_j over a system of length n.
inline std::vector<double> lindenstrauss_y_coefficients(unsigned m, std::size_t n) {
  std::vector<double> a(n, 0.0);
  for (unsigned k = 0; k < m; ++k) {
    for (std::size_t j : lindenstrauss_level_set(k)) {
      if (j > n) throw DomainError("lindenstrauss: system too short for y_m");
      a[j - 1] = std::ldexp(1.0, -static_cast<int>(k));
    }
  }
  return a;
}

/// y_0..y_m. Expected: ||y_j|| = 2 for j >= 1 and ||join_{1<=j<=m} |y_j| || = m + 1.
inline WitnessBundle lindenstrauss_witness(unsigned m, std::size_t n) {
  if (m > 30) throw DomainError("lindenstrauss witness: m too large");
  if (n < lindenstrauss_min_length(m))
    throw DomainError("lindenstrauss witness: need n >= " + std::to_string(lindenstrauss_min_length(m)));
  const auto sys = lindenstrauss(n);
  WitnessBundle b;
  for (unsigned j = 0; j <= m; ++j) {
    b.add("y" + std::to_string(j), sys.span_vector(lindenstrauss_y_coefficients(j, n)));
    if (j >= 1) b.expect("norm_y" + std::to_string(j), 2.0);
  }
  b.expect("join_norm", static_cast<double>(m) + 1.0);
  b.expect("bibasis_lower", (static_cast<double>(m) + 1.0) / 2.0, Provenance::bound);
  return b;
}

/// Closed form y_m = e_1 - 2^{-m} * indicator(I_m), as coordinates of l_1^{2n+2}.
inline std::vector<double> lindenstrauss_y_closed_form(unsigned m, std::size_t n) {
  std::vector<double> c(2 * n + 2, 0.0);
  c[0] = 1.0;
  for (std::size_t i : lindenstrauss_level_set(m)) {
    if (i > c.size()) throw DomainError("lindenstrauss: ambient too small for I_m");
    c[i - 1] -= std::ldexp(1.0, -static_cast<int>(m));
  }
  return c;
}

}  // namespace latmax
