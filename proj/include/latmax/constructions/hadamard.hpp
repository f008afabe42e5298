#pragma once

// Hadamard-mixed sequence u_k = e_k + 2^{-n} sum_j h_kj f_j in
// SupBlock(2^n) (+)_inf l_2^{2^n}, with the e's the sup-block unit vectors
// and the f's the l_2-block unit vectors.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "latmax/basis.hpp"
#include "latmax/constructions/bundle.hpp"

namespace latmax {

inline constexpr unsigned kHadamardMaxOrder = 14;
inline constexpr unsigned kHadamardDenseOrder = 10;

/// Sylvester recursion H_{2m} = [[H, H], [H, -H]].
inline Eigen::MatrixXd sylvester_hadamard(unsigned n) {
  if (n > kHadamardDenseOrder) throw DomainError("dense Hadamard matrices limited to order 2^10");
  Eigen::MatrixXd h(1, 1);
  h(0, 0) = 1.0;
  for (unsigned s = 0; s < n; ++s) {
    const auto m = h.rows();
    Eigen::MatrixXd next(2 * m, 2 * m);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

/// In-place fast Walsh-Hadamard transform (Sylvester ordering).
inline void fwht(std::span<double> v) {
  if (!std::has_single_bit(v.size())) throw DomainError("fwht needs a power-of-two length");
  for (std::size_t len = 1; len < v.size(); len <<= 1)
    for (std::size_t i = 0; i < v.size(); i += len << 1)
      for (std::size_t j = i; j < i + len; ++j) {
        const double a = v[j], b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
}

inline Space hadamard_host(unsigned n) {
  const std::size_t d = std::size_t{1} << n;
  return Space::direct_sum(kInfinity, {Space::sup(d), Space::lp(d, 2.0)});
}

struct HadamardMixed {
  BiorthogonalSystem system;
  WitnessBundle witness;
  unsigned n = 0;
};

inline HadamardMixed hadamard_mixed(unsigned n) {
  if (n < 1 || n > kHadamardDenseOrder)
    throw DomainError("hadamard_mixed assembles systems for 1 <= n <= 10; "
                      "use the streaming evaluators up to n = 14");
  const std::size_t d = std::size_t{1} << n;
  const double scale = std::ldexp(1.0, -static_cast<int>(n));
  const auto h = sylvester_hadamard(n);
  std::vector<SparseVector> us(d), fs(d);
  std::vector<std::string> labels(d);
  for (std::size_t k = 0; k < d; ++k) {
    auto& u = us[k];
    u.index.push_back(k);
    u.value.push_back(1.0);
    for (std::size_t j = 0; j < d; ++j) {
      u.index.push_back(d + j);
      u.value.push_back(scale * h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)));
    }
    fs[k].index = {k};
    fs[k].value = {1.0};
    labels[k] = "u" + std::to_string(k + 1);
  }
  HadamardMixed out{BiorthogonalSystem(hadamard_host(n), std::move(us), std::move(fs), false,
                                       std::move(labels)),
                    {}, n};
  std::vector<double> ones(d, 1.0);
  out.witness.add("sign_sum_plus", out.system.span_vector(ones));
  out.witness.expect("sign_sum_upper", 2.0, Provenance::derived, 1e-9, true);
  out.witness.expect("modulus_sum", std::sqrt(static_cast<double>(d)), Provenance::derived);
  return out;
}

/// || sum_k alpha_k u_k || = max( max|alpha_k|, 2^{-n} ||H alpha||_2 ) without
/// materializing the system.
inline double hadamard_combination_norm(unsigned n, std::span<const double> alpha) {
  if (n > kHadamardMaxOrder) throw DomainError("hadamard order limited to 14");
  const std::size_t d = std::size_t{1} << n;
  if (alpha.size() != d) throw StructuralError("coefficient length must be 2^n");
  std::vector<double> v(alpha.begin(), alpha.end());
  double sup = 0.0;
  for (double a : v) sup = std::max(sup, std::abs(a));
  fwht(v);
  double ss = 0.0;
  for (double a : v) ss += a * a;
  return std::max(sup, std::ldexp(std::sqrt(ss), -static_cast<int>(n)));
}

/// || sum_k |alpha_k u_k| || = max( max|alpha_k|, 2^{-n/2} sum|alpha_k| ):
/// the l_2 block of sum |alpha_k u_k| is 2^{-n} sum_k |alpha_k| on every coordinate.
inline double hadamard_modulus_norm(unsigned n, std::span<const double> alpha) {
  if (n > kHadamardMaxOrder) throw DomainError("hadamard order limited to 14");
  const std::size_t d = std::size_t{1} << n;
  if (alpha.size() != d) throw StructuralError("coefficient length must be 2^n");
  double sup = 0.0, sum = 0.0;
  for (double a : alpha) {
    sup = std::max(sup, std::abs(a));
    sum += std::abs(a);
  }
  const double per_coord = std::ldexp(sum, -static_cast<int>(n));
  return std::max(sup, per_coord * std::sqrt(static_cast<double>(d)));
}

}  // namespace latmax
