#pragma once

// L_p-normalized Haar system on the dyadic grid of 2^J cells. Index 0 is the
// constant function; index 2^k + j is supported on the j-th interval of
// level k, +2^{k/p} on its left half and -2^{k/p} on its right half.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "latmax/basis.hpp"

namespace latmax {

inline constexpr unsigned kHaarMaxResolution = 14;

inline double conjugate_exponent(double p) {
  if (p == 1.0) return kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

/// Level of a Haar index (0 for the constant and for index 1).
inline unsigned haar_level(std::size_t index) {
  return index <= 1 ? 0u : static_cast<unsigned>(std::bit_width(index) - 1);
}

/// Cell range [first, last) of the support of a non-constant Haar index.
inline std::pair<std::size_t, std::size_t> haar_support(unsigned J, std::size_t index) {
  if (index == 0) return {0, std::size_t{1} << J};
  const unsigned k = haar_level(index);
  const std::size_t j = index - (std::size_t{1} << k);
  const std::size_t width = std::size_t{1} << (J - k);
  return {j * width, (j + 1) * width};
}

inline BiorthogonalSystem haar_system(unsigned J, double p) {
  if (J > kHaarMaxResolution) throw DomainError("haar resolution limited to J <= 14");
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("haar system needs 1 <= p < infinity");
  const std::size_t d = std::size_t{1} << J;
  const double q = conjugate_exponent(p);
  const double cell = std::ldexp(1.0, -static_cast<int>(J));
  std::vector<SparseVector> hs(d), fs(d);
  std::vector<std::string> labels(d);
  for (std::size_t idx = 0; idx < d; ++idx) {
    auto& h = hs[idx];
    auto& f = fs[idx];
    const auto [first, last] = haar_support(J, idx);
    const unsigned k = haar_level(idx);
    const double amp = idx == 0 ? 1.0 : std::pow(2.0, static_cast<double>(k) / p);
    const double dual = idx == 0 ? 1.0 : (std::isinf(q) ? 1.0 : std::pow(2.0, static_cast<double>(k) / q));
    const std::size_t mid = first + (last - first) / 2;
    for (std::size_t c = first; c < last; ++c) {
      const double s = (idx == 0 || c < mid) ? 1.0 : -1.0;
      h.index.push_back(c);
      h.value.push_back(s * amp);
      f.index.push_back(c);
      f.value.push_back(s * dual * cell);
    }
    labels[idx] = idx == 0 ? "h0" : "h" + std::to_string(k) + "_" + std::to_string(idx - (std::size_t{1} << k));
  }
  return BiorthogonalSystem(Space::dyadic_lp(J, p), std::move(hs), std::move(fs), false, std::move(labels));
}

/// Root-to-leaf indices of the leftmost branch: 0, 1, 2, 4, ..., 2^{J-1}.
inline std::vector<std::size_t> branch_ordering(unsigned J) {
  std::vector<std::size_t> out{0};
  for (unsigned k = 0; k < J; ++k) out.push_back(std::size_t{1} << k);
  return out;
}

/// Coefficients 2^{-depth/q} along the branch, depth = position in the branch.
inline std::vector<double> branch_witness(unsigned J, double p) {
  const double q = conjugate_exponent(p);
  std::vector<double> a(std::size_t{1} << J, 0.0);
  const auto order = branch_ordering(J);
  for (std::size_t depth = 0; depth < order.size(); ++depth)
    a[order[depth]] = std::isinf(q) ? 1.0 : std::pow(2.0, -static_cast<double>(depth) / q);
  return a;
}

/// All Haar functions of levels < L ordered by the midpoint of their support,
/// with coefficients -2^{-k/p}. Returns the ordered index list and the
/// coefficient vector over the full system.
inline std::pair<std::vector<std::size_t>, std::vector<double>> haar_midpoint_witness(unsigned J, unsigned L,
                                                                                     double p) {
  if (L > J) throw DomainError("midpoint witness needs L <= J");
  std::vector<std::size_t> order;
  for (std::size_t idx = 1; idx < (std::size_t{1} << L); ++idx) order.push_back(idx);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto [a0, a1] = haar_support(J, a);
    const auto [b0, b1] = haar_support(J, b);
    return a0 + a1 < b0 + b1;
  });
  std::vector<double> coeffs(std::size_t{1} << J, 0.0);
  for (std::size_t idx : order) coeffs[idx] = -std::pow(2.0, -static_cast<double>(haar_level(idx)) / p);
  return {order, coeffs};
}

}  // namespace latmax
