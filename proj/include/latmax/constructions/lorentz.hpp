#pragma once

// Lorentz sequence norm ||x||_{p,q} = (sum_k k^{q/p - 1} (x*_k)^q)^{1/q} and
// the two fundamental functions of the blocked basis.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "latmax/estimation.hpp"

namespace latmax {

inline void check_lorentz_exponents(double p, double q) {
  if (!(q >= 1.0) || !(p > q) || !std::isfinite(p))
    throw DomainError("lorentz norm needs 1 <= q < p < infinity");
}

inline double lorentz_norm(double p, double q, std::span<const double> x) {
  check_lorentz_exponents(p, q);
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw DomainError("lorentz norm needs finite entries");
    r[i] = std::abs(x[i]);
  }
  std::sort(r.begin(), r.end(), std::greater<>());
  const double e = q / p - 1.0;
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] == 0.0) break;
    s += std::pow(static_cast<double>(k + 1), e) * std::pow(r[k], q);
  }
  return std::pow(s, 1.0 / q);
}

struct LorentzBlockingDemo {
  double p = 0.0, q = 0.0;
  /// (n, ||e_1 + ... + e_n||) for n = 2, 4, ..., n_max.
  std::vector<std::pair<double, double>> unit_sample;
  /// (count, ||u_1 + ... + u_count||), u_j the normalized constant block of
  /// length 2^{j-1}, disjoint and consecutive; total length 2^count - 1 <= n_max.
  std::vector<std::pair<double, double>> block_sample;
  GrowthFit unit_fit;
  GrowthFit block_fit;
};

inline LorentzBlockingDemo lorentz_blocking_demo(double p, double q, std::size_t n_max) {
  check_lorentz_exponents(p, q);
  if (n_max < 16) throw DomainError("lorentz demo needs n_max >= 16");
  LorentzBlockingDemo out;
  out.p = p;
  out.q = q;
  for (std::size_t n = 2; n <= n_max; n *= 2) {
    const std::vector<double> ones(n, 1.0);
    out.unit_sample.emplace_back(static_cast<double>(n), lorentz_norm(p, q, ones));
  }
  std::vector<double> x;
  for (std::size_t count = 1;; ++count) {
    const std::size_t len = std::size_t{1} << (count - 1);
    if (x.size() + len > n_max) break;
    const std::vector<double> block(len, 1.0);
    const double c = 1.0 / lorentz_norm(p, q, block);
    x.insert(x.end(), len, c);
    if (count >= 2) out.block_sample.emplace_back(static_cast<double>(count), lorentz_norm(p, q, x));
  }
  out.unit_fit = growth_fit(out.unit_sample);
  out.block_fit = growth_fit(out.block_sample);
  return out;
}

}  // namespace latmax
