#pragma once

// Orlicz function phi(t) = exp(1 - 1/t) on (0, t0], continued by its tangent
// line beyond t0, and the Luxemburg norm inf{lambda : sum phi(|x_k|/lambda) <= 1}.
// phi fails the Delta_2 condition at 0: phi(2t)/phi(t) = exp(1/(2t)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "latmax/lattice.hpp"

namespace latmax {

struct OrliczParams {
  double splice = 0.5;
  std::size_t convexity_grid = 4096;
};

class OrliczFunction {
 public:
  explicit OrliczFunction(OrliczParams params = {}) : params_(params) {
    if (!(params_.splice > 0.0) || !(params_.splice < 1.0))
      throw DomainError("orlicz splice point must lie in (0, 1)");
    value_at_splice_ = std::exp(1.0 - 1.0 / params_.splice);
    slope_at_splice_ = value_at_splice_ / (params_.splice * params_.splice);
    check_convexity();
  }

  double operator()(double t) const {
    t = std::abs(t);
    if (t == 0.0) return 0.0;
    if (t <= params_.splice) return std::exp(1.0 - 1.0 / t);
    return value_at_splice_ + slope_at_splice_ * (t - params_.splice);
  }

  /// The t with phi(t) = 1.
  double unit_level() const {
    return params_.splice + (1.0 - value_at_splice_) / slope_at_splice_;
  }

  double delta2_ratio(double t) const { return (*this)(2.0 * t) / (*this)(t); }

  const OrliczParams& params() const noexcept { return params_; }

 private:
  void check_convexity() const {
    const std::size_t n = params_.convexity_grid;
    const double hi = 2.0 * std::max(params_.splice, 1.0);
    const double h = hi / static_cast<double>(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double t = h * static_cast<double>(i);
      const double second = (*this)(t - h) - 2.0 * (*this)(t) + (*this)(t + h);
      if (second < -1e-12 * std::max(1.0, (*this)(t)))
        throw DomainError("orlicz function is not convex for this splice point");
    }
  }

  OrliczParams params_;
  double value_at_splice_ = 0.0;
  double slope_at_splice_ = 0.0;
};

/// I(x) = sum phi(|x_k|).
inline double orlicz_modular(const OrliczFunction& phi, std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += phi(v);
  return s;
}

inline constexpr double kLuxemburgTolerance = 1e-10;

inline double luxemburg_norm(const OrliczFunction& phi, std::span<const double> x) {
  double hi = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("luxemburg norm needs finite entries");
    hi = std::max(hi, std::abs(v));
  }
  if (hi == 0.0) return 0.0;
  auto modular_at = [&](double lambda) {
    double s = 0.0;
    for (double v : x) s += phi(v / lambda);
    return s;
  };
  double lo = 0.0;
  while (modular_at(hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > kLuxemburgTolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (modular_at(mid) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

struct OrliczOrderBoundDemo {
  /// (K, Luxemburg norm of the upper bound of y^1..y^K).
  std::vector<std::pair<double, double>> norms;
  /// (K, I(2 * upper bound)).
  std::vector<std::pair<double, double>> doubled_modular;
};

/// x_k = 1 / (1 + 2 ln k); y^k = x_k e^k. Their least upper bound over
/// k <= K is the truncation P_K x. Its norm stays bounded while the modular of
/// 2 P_K x grows like e^{1/2} ln K.
inline std::vector<double> orlicz_demo_sequence(std::size_t K) {
  std::vector<double> x(K);
  for (std::size_t k = 1; k <= K; ++k) x[k - 1] = 1.0 / (1.0 + 2.0 * std::log(static_cast<double>(k)));
  return x;
}

inline OrliczOrderBoundDemo orlicz_orderbound_demo(std::size_t K_max, const OrliczFunction& phi = OrliczFunction()) {
  if (K_max < 2) throw DomainError("orlicz demo needs K >= 2");
  OrliczOrderBoundDemo out;
  const auto x = orlicz_demo_sequence(K_max);
  std::vector<std::size_t> ks;
  for (std::size_t K = 2; K <= std::min<std::size_t>(K_max, 16); ++K) ks.push_back(K);
  for (std::size_t K = 32; K <= K_max; K *= 2) ks.push_back(K);
  if (ks.back() != K_max) ks.push_back(K_max);
  for (std::size_t K : ks) {
    std::span<const double> head(x.data(), K);
    out.norms.emplace_back(static_cast<double>(K), luxemburg_norm(phi, head));
    std::vector<double> doubled(head.begin(), head.end());
    for (double& v : doubled) v *= 2.0;
    out.doubled_modular.emplace_back(static_cast<double>(K), orlicz_modular(phi, doubled));
  }
  return out;
}

}  // namespace latmax
