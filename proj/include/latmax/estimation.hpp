#pragma once

// Numerical back end: singular-value norms, witness-family sup search with
// golden-section coordinate ascent, and log-log growth fitting.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latmax/lattice.hpp"

namespace latmax {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

// ---------------------------------------------------------------------------
// Deterministic randomness. The standard distributions are implementation
// defined, so the variates are derived from the raw engine output.

class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    if (n == 0) throw DomainError("below(0)");
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    return r * std::cos(2.0 * M_PI * u2);
  }

  double sign() { return (engine_() >> 63) ? -1.0 : 1.0; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// ---------------------------------------------------------------------------
// Singular values.

namespace detail {
inline void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw DomainError("matrix has non-finite entries");
}
}  // namespace detail

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  detail::require_finite(m);
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();
}

inline double spectral_norm(const Eigen::MatrixXd& m) {
  const auto s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

inline double nuclear_norm(const Eigen::MatrixXd& m) { return singular_values(m).sum(); }

// ---------------------------------------------------------------------------
// Sup search.

using Objective = std::function<double(std::span<const double>)>;

struct WitnessFamily {
  std::vector<std::vector<double>> structured;
  /// Exhaustive sign cube over the first `sign_cube_dim` coordinates.
  std::size_t sign_cube_dim = 0;
  /// Optional magnitudes multiplying the sign cube coordinates.
  std::vector<double> magnitudes;
  std::size_t random_samples = 0;
  std::size_t dim = 0;
  std::size_t ascent_sweeps = 3;
  double ascent_radius = 1.0;
};

struct SearchResult {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> witness;
  enum class Source { none, structured, sign_cube, random_ascent } source = Source::none;
  std::size_t evaluations = 0;
  /// True when every structured and sign-cube witness was evaluated.
  bool exhaustive_complete = false;
};

inline constexpr double kGoldenTolerance = 1e-10;

namespace detail {

class Budgeted {
 public:
  Budgeted(const Objective& f, std::size_t budget, SearchResult& out)
      : f_(f), budget_(budget), out_(out) {}

  bool exhausted() const { return out_.evaluations >= budget_; }

  /// Evaluates and records; returns NaN once the budget is spent.
  double operator()(std::span<const double> x, SearchResult::Source source) {
    if (exhausted()) return std::numeric_limits<double>::quiet_NaN();
    ++out_.evaluations;
    const double v = f_(x);
    if (std::isfinite(v) && v > out_.value) {
      out_.value = v;
      out_.witness.assign(x.begin(), x.end());
      out_.source = source;
    }
    return v;
  }

 private:
  const Objective& f_;
  std::size_t budget_;
  SearchResult& out_;
};

/// Golden-section maximization of g on [lo, hi].
template <class G>
void golden_maximize(G&& g, double lo, double hi, double tol, std::size_t max_iter = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  for (std::size_t it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (std::isnan(gc) || std::isnan(gd)) return;
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    }
  }
}

}  // namespace detail

/// Maximizes the objective over (i) structured witnesses, (ii) a sign cube
/// and (iii) seeded Gaussian samples refined by coordinate ascent. The
/// evaluation sequence depends only on the family and seed, so a larger
/// budget evaluates a superset and never reports a smaller value.
inline SearchResult sup_search(const Objective& objective, const WitnessFamily& family,
                               std::size_t budget, std::uint64_t seed = kDefaultSeed) {
  if (family.structured.empty() && family.sign_cube_dim == 0 && family.random_samples == 0)
    throw DomainError("witness family is empty");
  if (family.sign_cube_dim > 20) throw DomainError("sign cube limited to 20 coordinates");
  if (family.sign_cube_dim > family.dim && family.sign_cube_dim > 0)
    throw DomainError("sign cube wider than the witness dimension");
  if (!family.magnitudes.empty() && family.magnitudes.size() < family.sign_cube_dim)
    throw DomainError("magnitudes shorter than the sign cube");
  const std::size_t cube = family.sign_cube_dim ? (std::size_t{1} << family.sign_cube_dim) : 0;
  const std::size_t exhaustive_size = family.structured.size() + cube;
  if (budget < exhaustive_size)
    throw DomainError("budget " + std::to_string(budget) + " below exhaustive family size " +
                      std::to_string(exhaustive_size));

  SearchResult out;
  detail::Budgeted eval(objective, budget, out);
  for (const auto& w : family.structured) eval(w, SearchResult::Source::structured);
  if (cube) {
    std::vector<double> w(family.dim, 0.0);
    for (std::size_t mask = 0; mask < cube; ++mask) {
      for (std::size_t i = 0; i < family.sign_cube_dim; ++i) {
        const double mag = family.magnitudes.empty() ? 1.0 : family.magnitudes[i];
        w[i] = (mask >> i) & 1u ? -mag : mag;
      }
      eval(w, SearchResult::Source::sign_cube);
    }
  }
  out.exhaustive_complete = true;

  Rng rng(seed);
  for (std::size_t s = 0; s < family.random_samples && !eval.exhausted(); ++s) {
    std::vector<double> x(family.dim);
    double nrm = 0.0;
    for (double& v : x) {
      v = rng.normal();
      nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    if (nrm > 0.0)
      for (double& v : x) v /= nrm;
    double fx = eval(x, SearchResult::Source::random_ascent);
    if (std::isnan(fx)) break;
    for (std::size_t sweep = 0; sweep < family.ascent_sweeps && !eval.exhausted(); ++sweep) {
      for (std::size_t i = 0; i < x.size() && !eval.exhausted(); ++i) {
        const double centre = x[i];
        double best_t = centre, best_v = fx;
        detail::golden_maximize(
            [&](double t) {
              x[i] = t;
              const double v = eval(x, SearchResult::Source::random_ascent);
              if (std::isfinite(v) && v > best_v) {
                best_v = v;
                best_t = t;
              }
              return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
            },
            centre - family.ascent_radius, centre + family.ascent_radius, kGoldenTolerance);
        x[i] = best_t;
        fx = best_v;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Growth fitting: value ~ c * n^a * (log n)^b.

struct GrowthFit {
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
  std::vector<std::pair<double, double>> sample;
  bool b_fixed = false;
};

struct GrowthFitOptions {
  /// Pins b instead of fitting it; the ridge term then has no effect.
  std::optional<double> fixed_log_exponent;
  double ridge = 1e-9;
};

inline double growth_fit_residual(const GrowthFit& fit) {
  double ss = 0.0;
  for (const auto& [n, v] : fit.sample) {
    const double model = std::log(fit.c) + fit.a * std::log(n) + fit.b * std::log(std::log(n));
    const double r = std::log(v) - model;
    ss += r * r;
  }
  return std::sqrt(ss / static_cast<double>(fit.sample.size()));
}

inline GrowthFit growth_fit(std::vector<std::pair<double, double>> sample,
                            const GrowthFitOptions& options = {}) {
  if (sample.size() < 4) throw DomainError("growth fit needs at least 4 points");
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto [n, v] = sample[i];
    if (!std::isfinite(n) || !std::isfinite(v)) throw DomainError("growth fit sample must be finite");
    if (!(n > 1.0)) throw DomainError("growth fit needs n > 1");
    if (!(v > 0.0)) throw DomainError("growth fit needs positive values");
    if (i > 0 && !(n > sample[i - 1].first)) throw DomainError("growth fit needs increasing n");
  }
  const auto rows = static_cast<Eigen::Index>(sample.size());
  const bool fixed = options.fixed_log_exponent.has_value();
  const Eigen::Index cols = fixed ? 2 : 3;
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto [n, v] = sample[static_cast<std::size_t>(r)];
    X(r, 0) = 1.0;
    X(r, 1) = std::log(n);
    y(r) = std::log(v);
    if (fixed)
      y(r) -= *options.fixed_log_exponent * std::log(std::log(n));
    else
      X(r, 2) = std::log(std::log(n));
  }
  Eigen::MatrixXd normal = X.transpose() * X;
  if (!fixed) normal(2, 2) += options.ridge;
  const Eigen::VectorXd beta = normal.ldlt().solve(X.transpose() * y);

  GrowthFit fit;
  fit.c = std::exp(beta(0));
  fit.a = beta(1);
  fit.b = fixed ? *options.fixed_log_exponent : beta(2);
  fit.b_fixed = fixed;
  fit.sample = std::move(sample);
  fit.residual = growth_fit_residual(fit);
  return fit;
}

/// Ordinary least squares y = intercept + slope * x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

inline LineFit line_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("line fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("line fit needs distinct x");
  return {my - sxy / sxx * mx, sxy / sxx};
}

}  // namespace latmax
