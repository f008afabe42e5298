#pragma once

// Triangular-truncation basis in l_p^n (+)_p l_p^n:
//   v_i = f_i + S g_i,  w_i = -S f_i + g_i,  S = alpha T,  T_ij = 1/(i - j) (i != j).
// The witness x = sum v_i has bounded norm while its maximal partial sum
// grows through the harmonic sums in the g block.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "latmax/basis.hpp"
#include "latmax/constructions/bundle.hpp"
#include "latmax/estimation.hpp"

namespace latmax {

inline constexpr std::size_t kTriangularDenseLimit = 512;

inline Eigen::MatrixXd triangular_kernel(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd t(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) t(i, j) = i == j ? 0.0 : 1.0 / static_cast<double>(i - j);
  return t;
}

/// max_i sum_j |T_ij|; T is antisymmetric so this also bounds the column sums.
inline double triangular_row_sum_bound(std::size_t n) {
  double best = 0.0;
  std::vector<double> h(n + 1, 0.0);
  for (std::size_t d = 1; d <= n; ++d) h[d] = h[d - 1] + 1.0 / static_cast<double>(d);
  for (std::size_t i = 1; i <= n; ++i) best = std::max(best, h[i - 1] + h[n - i]);
  return best;
}

/// Certified upper bound on ||T||_{p -> p}: pi on l_2 (Hilbert's inequality),
/// otherwise Riesz-Thorin between the row-sum bound at p = 1, infinity and pi.
inline double triangular_kernel_bound(std::size_t n, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("kernel bound needs 1 < p < infinity");
  if (p == 2.0) return std::numbers::pi;
  const double theta = 1.0 - std::abs(1.0 - 2.0 / p);
  return std::pow(triangular_row_sum_bound(n), 1.0 - theta) * std::pow(std::numbers::pi, theta);
}

struct TriangularBasis {
  BiorthogonalSystem system;
  WitnessBundle witness;
  double alpha = 0.0;
  double kernel_bound = 0.0;
  std::size_t n = 0;
  double p = 2.0;
};

inline double triangular_default_alpha(std::size_t n, double p) {
  return 1.0 / (2.0 * triangular_kernel_bound(n, p));
}

/// Columns (v_1..v_n, w_1..w_n) as a 2n x 2n matrix.
inline Eigen::MatrixXd triangular_vector_matrix(std::size_t n, double alpha) {
  const Eigen::MatrixXd s = alpha * triangular_kernel(n);
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2 * m, 2 * m);
  a.block(m, 0, m, m) = s;
  a.block(0, m, m, m) = -s;
  return a;
}

/// Inverse of I - P through X <- X (I + P), P <- P^2, valid when ||P|| < 1.
inline Eigen::MatrixXd neumann_inverse(const Eigen::MatrixXd& a, double residual_target = 1e-12,
                                       std::size_t max_steps = 64) {
  const auto d = a.rows();
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d) - a;
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(d, d);
  for (std::size_t step = 0; step < max_steps; ++step) {
    const double residual = (a * x - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (residual < residual_target) return x;
    x = x + x * p;
    p = p * p;
  }
  throw DomainError("Neumann series did not reach the residual target");
}

inline TriangularBasis triangular_basis(std::size_t n, double p, std::optional<double> alpha = {}) {
  if (n < 2) throw DomainError("triangular basis needs n >= 2");
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("triangular basis needs 1 < p < infinity");
  if (n > kTriangularDenseLimit)
    throw DomainError("triangular basis is assembled densely only up to n = 512; "
                      "use triangular_witness_profile for larger n");
  const double bound = triangular_kernel_bound(n, p);
  const double a_value = alpha.value_or(1.0 / (2.0 * bound));
  if (!(a_value > 0.0) || !std::isfinite(a_value)) throw DomainError("alpha must be positive");

  const Space block = Space::lp(n, p);
  const Space space = Space::direct_sum(p, {block, block});
  const Eigen::MatrixXd a = triangular_vector_matrix(n, a_value);
  const Eigen::MatrixXd inv = neumann_inverse(a);
  const auto d = a.rows();
  std::vector<SparseVector> xs(static_cast<std::size_t>(d)), fs(static_cast<std::size_t>(d));
  std::vector<std::string> labels(static_cast<std::size_t>(d));
  std::vector<double> buf(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    for (Eigen::Index i = 0; i < d; ++i) buf[static_cast<std::size_t>(i)] = a(i, k);
    xs[ks] = SparseVector::from_dense(buf);
    for (Eigen::Index i = 0; i < d; ++i) buf[static_cast<std::size_t>(i)] = inv(k, i);
    fs[ks] = SparseVector::from_dense(buf);
    labels[ks] = (ks < n ? "v" : "w") + std::to_string(ks % n + 1);
  }
  TriangularBasis out{BiorthogonalSystem(space, std::move(xs), std::move(fs), false, std::move(labels)),
                      {}, a_value, bound, n, p};

  const std::vector<double> ones(n, 1.0);
  out.witness.add("x", out.system.span_vector(ones));
  out.witness.expect("norm_x_upper", 1.5 * std::pow(static_cast<double>(n), 1.0 / p), Provenance::bound,
                     1e-9, true);
  double h = 0.0;
  for (std::size_t j = 2; j <= n; ++j) {
    h += 1.0 / static_cast<double>(j - 1);
    out.witness.expect("g_coefficient_" + std::to_string(j), out.alpha * h, Provenance::exact, 1e-12);
  }
  return out;
}

/// g_j coordinate of sum_{i<=k} v_i (1-based j, k).
inline double triangular_partial_g(std::size_t j, std::size_t k, double alpha) {
  double s = 0.0;
  for (std::size_t i = 1; i <= k; ++i)
    if (i != j) s += 1.0 / (static_cast<double>(j) - static_cast<double>(i));
  return alpha * s;
}

struct TriangularWitnessProfile {
  std::size_t n = 0;
  double p = 2.0;
  double alpha = 0.0;
  /// || join_k |sum_{i<=k} v_i| ||
  double maximal_norm = 0.0;
  /// The same join restricted to the g block.
  double maximal_g_norm = 0.0;
  /// || sum_i v_i ||
  double x_norm = 0.0;
};

/// Streams the partial sums of x = sum v_i in O(n^2) time and O(n) memory.
inline TriangularWitnessProfile triangular_witness_profile(std::size_t n, double p,
                                                           std::optional<double> alpha = {}) {
  if (n < 2) throw DomainError("triangular witness needs n >= 2");
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("triangular witness needs 1 < p < infinity");
  TriangularWitnessProfile out;
  out.n = n;
  out.p = p;
  out.alpha = alpha.value_or(triangular_default_alpha(n, p));
  std::vector<double> g(n, 0.0), g_join(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      g[j] += out.alpha / (static_cast<double>(j) - static_cast<double>(k));
      g_join[j] = std::max(g_join[j], std::abs(g[j]));
    }
  }
  const Space block = Space::lp(n, p);
  const std::vector<double> f_ones(n, 1.0);
  const double f_norm = norm(block, f_ones);
  auto combine = [&](double a, double b) { return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p); };
  out.maximal_g_norm = norm(block, g_join);
  out.maximal_norm = combine(f_norm, out.maximal_g_norm);
  out.x_norm = combine(f_norm, norm(block, g));
  return out;
}

struct TriangularOperatorNorms {
  double norm_a = 0.0;
  double norm_a_inverse = 0.0;
};

/// ||A|| and ||A^{-1}|| on l_2^{2n} from the singular values of A.
inline TriangularOperatorNorms triangular_operator_norms(std::size_t n, double alpha) {
  const auto s = singular_values(triangular_vector_matrix(n, alpha));
  return {s(0), 1.0 / s(s.size() - 1)};
}

}  // namespace latmax
