#pragma once

// Discrete Rademacher functions r_k(w) = 1 - 2 bit_k(w) on {0,1}^n with the
// uniform probability measure, hosted in LpBlock(2^n, 1, weights 2^-n).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latmax/basis.hpp"

namespace latmax {

inline constexpr unsigned kRademacherMaxOrder = 20;

inline Space probability_l1(unsigned n) {
  return Space::lp(std::vector<double>(std::size_t{1} << n, std::ldexp(1.0, -static_cast<int>(n))), 1.0);
}

inline BiorthogonalSystem rademacher_l1(unsigned n) {
  if (n < 1 || n > kRademacherMaxOrder) throw DomainError("rademacher_l1 needs 1 <= n <= 20");
  const std::size_t d = std::size_t{1} << n;
  const double w = std::ldexp(1.0, -static_cast<int>(n));
  std::vector<SparseVector> rs(n), fs(n);
  std::vector<std::string> labels(n);
  for (unsigned k = 0; k < n; ++k) {
    rs[k].index.resize(d);
    rs[k].value.resize(d);
    fs[k].index.resize(d);
    fs[k].value.resize(d);
    for (std::size_t omega = 0; omega < d; ++omega) {
      const double r = (omega >> k) & 1u ? -1.0 : 1.0;
      rs[k].index[omega] = fs[k].index[omega] = omega;
      rs[k].value[omega] = r;
      fs[k].value[omega] = r * w;
    }
    labels[k] = "r" + std::to_string(k + 1);
  }
  return BiorthogonalSystem(probability_l1(n), std::move(rs), std::move(fs), false, std::move(labels));
}

/// E |sum_k alpha_k r_k| over 2^n points, without materializing the system.
inline double rademacher_combination_norm(std::span<const double> alpha) {
  const std::size_t n = alpha.size();
  if (n < 1 || n > kRademacherMaxOrder) throw DomainError("rademacher norm needs 1..20 coefficients");
  const std::size_t d = std::size_t{1} << n;
  double total = 0.0;
  for (std::size_t omega = 0; omega < d; ++omega) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += (omega >> k) & 1u ? -alpha[k] : alpha[k];
    total += std::abs(s);
  }
  return std::ldexp(total, -static_cast<int>(n));
}

/// E |r_1 + ... + r_m| = sum_j C(m, j) |m - 2j| / 2^m, in exact integer arithmetic.
inline double rademacher_binomial_mean(unsigned m) {
  if (m > 60) throw DomainError("binomial mean limited to m <= 60");
  std::uint64_t c = 1, total = 0;
  for (unsigned j = 0; j <= m; ++j) {
    const std::int64_t diff = static_cast<std::int64_t>(m) - 2 * static_cast<std::int64_t>(j);
    total += c * static_cast<std::uint64_t>(diff < 0 ? -diff : diff);
    c = c * (m - j) / (j + 1);
  }
  return std::ldexp(static_cast<double>(total), -static_cast<int>(m));
}

}  // namespace latmax
