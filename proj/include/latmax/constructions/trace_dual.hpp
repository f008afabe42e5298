#pragma once

// Trace-duality lower bound for the nuclear norm of the lower-triangular
// ones matrix tau_n, paired against A_kl = 1/(k - l) with ||A|| <= pi.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>

#include "latmax/constructions/triangular.hpp"
#include "latmax/estimation.hpp"

namespace latmax {

inline Eigen::MatrixXd lower_triangular_ones(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = 0; l <= k; ++l) t(k, l) = 1.0;
  return t;
}

/// H_1 + ... + H_n.
inline double harmonic_total(std::size_t n) {
  double h = 0.0, total = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    h += 1.0 / static_cast<double>(m);
    total += h;
  }
  return total;
}

struct TraceDualCertificate {
  std::size_t n = 0;
  /// sum_{k,l} A_kl tau_kl evaluated entrywise (equals H_1 + ... + H_{n-1}).
  double pairing = 0.0;
  /// H_1 + ... + H_n.
  double harmonic_total = 0.0;
  double nuclear = 0.0;
  /// harmonic_total / pi.
  double bound = 0.0;
};

inline TraceDualCertificate trace_dual_certificate(std::size_t n) {
  if (n < 2) throw DomainError("trace dual certificate needs n >= 2");
  TraceDualCertificate c;
  c.n = n;
  const auto a = triangular_kernel(n);
  const auto tau = lower_triangular_ones(n);
  c.pairing = (a.array() * tau.array()).sum();
  c.harmonic_total = harmonic_total(n);
  c.nuclear = nuclear_norm(tau);
  c.bound = c.harmonic_total / std::numbers::pi;
  return c;
}

}  // namespace latmax
