#pragma once

// Greedy orderings, greedy sums, the lattice maximal greedy operator and the
// ordered-projection maximal operator, with their constants.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latmax/basis.hpp"
#include "latmax/estimation.hpp"
#include "latmax/report.hpp"

namespace latmax {

struct GreedyOrdering {
  std::vector<std::size_t> permutation;
  std::vector<double> source;

  /// Number of nonzero coefficients.
  std::size_t support() const {
    return static_cast<std::size_t>(
        std::count_if(source.begin(), source.end(), [](double v) { return v != 0.0; }));
  }
};

/// Moduli nonincreasing, ties by smaller index, zeros last in index order.
inline GreedyOrdering natural_greedy_ordering(std::span<const double> coeffs) {
  for (double v : coeffs) {
    if (!std::isfinite(v)) throw DomainError("greedy ordering needs finite coefficients");
  }
  GreedyOrdering g;
  g.source.assign(coeffs.begin(), coeffs.end());
  g.permutation = identity_order(coeffs.size());
  std::stable_sort(g.permutation.begin(), g.permutation.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(coeffs[i]) > std::abs(coeffs[j]);
  });
  return g;
}

/// Whether `perm` is a greedy ordering of `coeffs`: a permutation with
/// nonincreasing moduli (ties in any order).
inline bool is_greedy_ordering(std::span<const double> coeffs, std::span<const std::size_t> perm) {
  if (perm.size() != coeffs.size()) return false;
  std::vector<char> seen(coeffs.size(), 0);
  for (std::size_t i : perm) {
    if (i >= coeffs.size() || seen[i]) return false;
    seen[i] = 1;
  }
  for (std::size_t t = 1; t < perm.size(); ++t) {
    if (std::abs(coeffs[perm[t]]) > std::abs(coeffs[perm[t - 1]])) return false;
  }
  return true;
}

inline constexpr std::size_t kMaxEnumeratedSupport = 12;

/// Every greedy ordering of the support (ties permuted in all ways); the zero
/// coefficients follow in index order.
inline std::vector<std::vector<std::size_t>> all_greedy_orderings(std::span<const double> coeffs) {
  const auto natural = natural_greedy_ordering(coeffs);
  const std::size_t r = natural.support();
  if (r > kMaxEnumeratedSupport)
    throw DomainError("greedy ordering enumeration limited to support 12");
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end) in the permutation
  for (std::size_t t = 0; t < r;) {
    std::size_t u = t + 1;
    while (u < r && std::abs(coeffs[natural.permutation[u]]) == std::abs(coeffs[natural.permutation[t]])) ++u;
    groups.emplace_back(t, u);
    t = u;
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> perm = natural.permutation;
  // Odometer over per-group permutations in lexicographic order.
  for (auto [b, e] : groups) std::sort(perm.begin() + static_cast<long>(b), perm.begin() + static_cast<long>(e));
  while (true) {
    out.push_back(perm);
    std::size_t g = groups.size();
    bool advanced = false;
    while (g > 0) {
      --g;
      auto [b, e] = groups[g];
      if (std::next_permutation(perm.begin() + static_cast<long>(b), perm.begin() + static_cast<long>(e))) {
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

/// A coefficient vector with the same signs whose natural greedy ordering is
/// exactly `ordering` on the support: |a_{pi(i)}| + (r - 1 - i) * delta.
inline std::vector<double> strictly_greedy_perturbation(std::span<const double> coeffs,
                                                        std::span<const std::size_t> ordering,
                                                        double delta) {
  if (!is_greedy_ordering(coeffs, ordering)) throw DomainError("not a greedy ordering");
  if (!(delta > 0.0)) throw DomainError("perturbation size must be positive");
  std::vector<double> out(coeffs.begin(), coeffs.end());
  std::size_t r = 0;
  for (double v : coeffs) r += v != 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t k = ordering[i];
    const double mag = std::abs(coeffs[k]) + static_cast<double>(r - 1 - i) * delta;
    out[k] = std::copysign(mag, coeffs[k]);
  }
  return out;
}

namespace detail {
inline void check_greedy_m(const GreedyOrdering& g, std::size_t m) {
  if (m > g.permutation.size()) throw DomainError("greedy index exceeds the ordering length");
}
}  // namespace detail

/// G_m in coefficient form: sum of the first m ordered terms.
inline Element greedy_sum_of(const BiorthogonalSystem& sys, std::span<const double> a,
                             const GreedyOrdering& g, std::size_t m) {
  sys.require_coefficients(a);
  detail::check_greedy_m(g, m);
  std::vector<double> c(sys.dim(), 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    const std::size_t k = g.permutation[t];
    if (k < a.size()) sys.add_term(c, k, a[k]);
  }
  return Element(sys.space(), std::move(c));
}

inline Element greedy_sum(const BiorthogonalSystem& sys, const Element& x, std::size_t m,
                          const GreedyOrdering& g) {
  const auto a = coefficients(sys, x);
  return greedy_sum_of(sys, a, g, m);
}

inline Element greedy_maximal_of(const BiorthogonalSystem& sys, std::span<const double> a,
                                 const GreedyOrdering& g, std::size_t m) {
  sys.require_coefficients(a);
  detail::check_greedy_m(g, m);
  return Element(sys.space(), ordered_maximal_coords(sys, a, g.permutation, m));
}

/// join_{n <= m} |G_n(x)|.
inline Element greedy_maximal(const BiorthogonalSystem& sys, const Element& x, std::size_t m,
                              const GreedyOrdering& g) {
  const auto a = coefficients(sys, x);
  return greedy_maximal_of(sys, a, g, m);
}

/// P_A^vee(x) for an ordered list of distinct indices A.
inline Element ordered_projection_maximal_of(const BiorthogonalSystem& sys, std::span<const double> a,
                                             std::span<const std::size_t> order) {
  sys.require_coefficients(a);
  std::vector<char> seen(sys.size(), 0);
  for (std::size_t k : order) {
    if (k >= sys.size()) throw DomainError("index list leaves the system");
    if (seen[k]) throw DomainError("index list repeats an index");
    seen[k] = 1;
  }
  return Element(sys.space(), ordered_maximal_coords(sys, a, order, order.size()));
}

inline Element ordered_projection_maximal(const BiorthogonalSystem& sys, const Element& x,
                                          std::span<const std::size_t> order) {
  const auto a = coefficients(sys, x);
  return ordered_projection_maximal_of(sys, a, order);
}

// ---------------------------------------------------------------------------
// Ratios and constants.

/// max_n ||G_n x|| / ||x|| along the natural ordering.
inline double qg_ratio(const BiorthogonalSystem& sys, std::span<const double> a) {
  const auto full = sys.span_coords(a);
  const double denom = detail::require_nonzero_norm(sys, full);
  const auto g = natural_greedy_ordering(a);
  const std::size_t r = g.support();
  std::vector<double> partial(sys.dim(), 0.0);
  double best = 0.0;
  for (std::size_t t = 0; t < r; ++t) {
    sys.add_term(partial, g.permutation[t], a[g.permutation[t]]);
    best = std::max(best, detail::norm_of(sys.space(), partial));
  }
  return best / denom;
}

/// ||G^vee_{|supp|}(x)|| / ||x|| along a given ordering (natural if empty).
inline double uqg_ratio(const BiorthogonalSystem& sys, std::span<const double> a,
                        std::span<const std::size_t> ordering = {}) {
  sys.require_coefficients(a);
  const auto full = sys.span_coords(a);
  const double denom = detail::require_nonzero_norm(sys, full);
  std::vector<std::size_t> perm;
  if (ordering.empty()) {
    perm = natural_greedy_ordering(a).permutation;
  } else {
    if (!is_greedy_ordering(a, ordering)) throw DomainError("not a greedy ordering");
    perm.assign(ordering.begin(), ordering.end());
  }
  std::size_t r = 0;
  for (double v : a) r += v != 0.0;
  return detail::norm_of(sys.space(), ordered_maximal_coords(sys, a, perm, r)) / denom;
}

/// ||P_A^vee x|| / ||x||.
inline double kvee_ratio(const BiorthogonalSystem& sys, std::span<const double> a,
                         std::span<const std::size_t> order) {
  const auto full = sys.span_coords(a);
  const double denom = detail::require_nonzero_norm(sys, full);
  return norm(ordered_projection_maximal_of(sys, a, order)) / denom;
}

inline ConstantReport qg_constant(const BiorthogonalSystem& sys,
                                  const std::vector<std::vector<double>>& witnesses,
                                  SearchTag tag = SearchTag::structured_family) {
  return detail::family_maximum(ConstantName::quasi_greedy, witnesses, tag,
                                [&](const auto& w) { return qg_ratio(sys, w); });
}

struct UqgOptions {
  /// Maximize over every greedy ordering of each witness (support <= 12).
  bool all_orderings = false;
};

inline ConstantReport uqg_constant(const BiorthogonalSystem& sys,
                                   const std::vector<std::vector<double>>& witnesses,
                                   SearchTag tag = SearchTag::structured_family,
                                   UqgOptions options = {}) {
  if (witnesses.empty()) throw DomainError("witness family is empty");
  ConstantReport r;
  r.constant = ConstantName::uniform_quasi_greedy;
  r.search = tag;
  r.exhaustive = tag == SearchTag::exhaustive_signs;
  r.value = -1.0;
  for (const auto& w : witnesses) {
    std::vector<std::vector<std::size_t>> orderings;
    if (options.all_orderings)
      orderings = all_greedy_orderings(w);
    else
      orderings.push_back(natural_greedy_ordering(w).permutation);
    for (const auto& perm : orderings) {
      const double v = uqg_ratio(sys, w, perm);
      ++r.budget;
      if (v > r.value) {
        r.value = v;
        r.witness = w;
        r.order = perm;
        r.m = static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](double c) { return c != 0.0; }));
      }
    }
  }
  return r;
}

struct KveeOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Structured candidates: ordered index list and the coefficients on it
  /// (coefficients indexed by the system, not by position in the list).
  std::vector<std::pair<std::vector<std::size_t>, std::vector<double>>> structured;
  std::size_t sweeps = 3;
  /// Random ordered subsets tried after the structured candidates.
  std::size_t random_subsets = 4;
};

/// Lower bound for k_m^vee = sup_{|A| <= m} ||P_A^vee||: structured
/// candidates, then random ordered subsets of size m whose coefficients are
/// refined by golden-section coordinate ascent.
inline ConstantReport kvee_estimate(const BiorthogonalSystem& sys, std::size_t m, std::size_t budget,
                                    const KveeOptions& options = {}) {
  if (m == 0 || m > sys.size()) throw DomainError("kvee: m must lie in [1, system length]");
  ConstantReport r;
  r.constant = ConstantName::kvee;
  r.m = m;
  r.value = -1.0;
  r.search = SearchTag::structured_family;

  auto consider = [&](const std::vector<std::size_t>& order, std::span<const double> a, SearchTag tag) {
    std::vector<double> full(sys.size(), 0.0);
    for (std::size_t k : order) full[k] = a[k];
    bool nonzero = false;
    for (double v : full) nonzero |= v != 0.0;
    if (!nonzero) return -1.0;
    const double v = kvee_ratio(sys, full, order);
    ++r.budget;
    if (v > r.value) {
      r.value = v;
      r.witness = std::move(full);
      r.order = order;
      r.search = tag;
    }
    return v;
  };

  for (const auto& [order, coeffs] : options.structured) {
    if (order.size() > m) throw DomainError("structured candidate longer than m");
    if (coeffs.size() != sys.size()) throw DomainError("structured coefficients must span the system");
    if (r.budget >= budget) break;
    consider(order, coeffs, SearchTag::structured_family);
  }

  Rng rng(options.seed);
  for (std::size_t s = 0; s < options.random_subsets && r.budget < budget; ++s) {
    std::vector<std::size_t> pool = identity_order(sys.size());
    rng.shuffle(pool);
    std::vector<std::size_t> order(pool.begin(), pool.begin() + static_cast<long>(m));
    std::vector<double> a(sys.size(), 0.0);
    for (std::size_t k : order) a[k] = rng.normal();

    Objective f = [&](std::span<const double> coeffs) {
      std::vector<double> full(sys.size(), 0.0);
      for (std::size_t t = 0; t < order.size(); ++t) full[order[t]] = coeffs[t];
      for (double v : full)
        if (v != 0.0) return kvee_ratio(sys, full, order);
      return -1.0;
    };
    std::vector<double> start(m);
    double scale = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      start[t] = a[order[t]];
      scale = std::max(scale, std::abs(start[t]));
    }
    std::vector<double> x = start;
    double fx = f(x);
    std::size_t used = 1;
    for (std::size_t sweep = 0; sweep < options.sweeps && r.budget + used < budget; ++sweep) {
      for (std::size_t i = 0; i < m && r.budget + used < budget; ++i) {
        const double centre = x[i];
        double best_t = centre, best_v = fx;
        detail::golden_maximize(
            [&](double t) {
              if (r.budget + used >= budget) return -std::numeric_limits<double>::infinity();
              ++used;
              x[i] = t;
              const double v = f(x);
              if (v > best_v) {
                best_v = v;
                best_t = t;
              }
              return v;
            },
            centre - 2.0 * scale, centre + 2.0 * scale, kGoldenTolerance * std::max(scale, 1.0));
        x[i] = best_t;
        fx = best_v;
      }
    }
    r.budget += used;
    std::vector<double> full(sys.size(), 0.0);
    for (std::size_t t = 0; t < m; ++t) full[order[t]] = x[t];
    if (fx > r.value) {
      r.value = kvee_ratio(sys, full, order);
      r.witness = std::move(full);
      r.order = order;
      r.search = SearchTag::random_ascent;
    }
  }
  if (r.value < 0.0) throw DomainError("kvee: budget too small to evaluate any candidate");
  return r;
}

/// Recomputes a report's ratio from its stored witness.
inline double recompute(const BiorthogonalSystem& sys, const ConstantReport& r) {
  switch (r.constant) {
    case ConstantName::basis: return basis_ratio(sys, r.witness);
    case ConstantName::bibasis: return bibasis_ratio(sys, r.witness);
    case ConstantName::absolute: return absolute_ratio(sys, r.witness);
    case ConstantName::quasi_greedy: return qg_ratio(sys, r.witness);
    case ConstantName::uniform_quasi_greedy: return uqg_ratio(sys, r.witness, r.order);
    case ConstantName::kvee: return kvee_ratio(sys, r.witness, r.order);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Constant-coefficient inequalities with measured constants.

struct InequalityCheck {
  std::string name;
  double worst_ratio = 0.0;  // max lhs / rhs over all instances
  std::size_t instances = 0;
  bool holds = true;
};

struct ConstantCoefficientReport {
  double c_qg = 0.0;
  double c_qg_vee = 0.0;
  std::vector<InequalityCheck> checks;
  bool all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.holds; });
  }
};

inline constexpr double kInequalitySlack = 1e-9;

/// For each ordered index set A = (n_1..n_m), signs eps and magnitudes a on
/// A, with 1_A = sum e_{n_i}, 1_eps = sum eps_i e_{n_i}, x = sum a_i eps_i e_{n_i}:
///   constant_maximal:   ||P_A^vee 1_A||                 <= C^vee ||1_A||
///   maximal_lower:      ||P_A^vee 1_A|| / (2 C^vee)     <= ||1_eps||
///   sign_sum_maximal:   ||1_eps||                       <= ||P_A^vee 1_eps||
///   signed_maximal:     ||P_A^vee 1_eps||               <= 2 C^vee ||1_A||
///   convex_max:         ||P_A^vee x|| / max|a|          <= 2 C^vee ||1_A||
///   ratio_bound:        ||P_A^vee x||                   <= 8 C_qg^2 C^vee (max|a|/min|a|) ||x||
/// The constants are whatever the caller measured; with lower bounds in place
/// of the true constants a ratio above 1 is possible and is reported as is.
inline ConstantCoefficientReport constant_coefficient_checks(
    const BiorthogonalSystem& sys, const std::vector<std::vector<std::size_t>>& index_sets,
    const std::vector<std::vector<double>>& signs, double c_qg, double c_qg_vee,
    const std::vector<std::vector<double>>& magnitudes = {}) {
  if (index_sets.size() != signs.size()) throw StructuralError("one sign pattern per index set");
  if (!magnitudes.empty() && magnitudes.size() != index_sets.size())
    throw StructuralError("one magnitude vector per index set");
  ConstantCoefficientReport rep;
  rep.c_qg = c_qg;
  rep.c_qg_vee = c_qg_vee;
  InequalityCheck constant_maximal{"constant_maximal"}, maximal_lower{"maximal_lower"},
      sign_sum_maximal{"sign_sum_maximal"}, signed_maximal{"signed_maximal"},
      convex_max{"convex_max"}, ratio_bound{"ratio_bound"};
  auto record = [](InequalityCheck& c, double lhs, double rhs) {
    ++c.instances;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInfinity : 0.0);
    c.worst_ratio = std::max(c.worst_ratio, ratio);
    if (ratio > 1.0 + kInequalitySlack) c.holds = false;
  };

  for (std::size_t s = 0; s < index_sets.size(); ++s) {
    const auto& A = index_sets[s];
    const auto& eps = signs[s];
    if (A.empty() || eps.size() != A.size()) throw StructuralError("sign pattern must match its index set");
    std::vector<double> mags(A.size(), 1.0);
    if (!magnitudes.empty()) {
      if (magnitudes[s].size() != A.size()) throw StructuralError("magnitudes must match their index set");
      mags = magnitudes[s];
    }
    std::vector<double> ones(sys.size(), 0.0), signed_ones(sys.size(), 0.0), x(sys.size(), 0.0);
    double amax = 0.0, amin = kInfinity;
    for (std::size_t t = 0; t < A.size(); ++t) {
      if (A[t] >= sys.size()) throw DomainError("index set leaves the system");
      if (std::abs(eps[t]) != 1.0) throw DomainError("signs must be +1 or -1");
      ones[A[t]] = 1.0;
      signed_ones[A[t]] = eps[t];
      x[A[t]] = mags[t] * eps[t];
      amax = std::max(amax, std::abs(mags[t]));
      amin = std::min(amin, std::abs(mags[t]));
    }
    const double n_ones = norm(sys.span_vector(ones));
    const double n_signed = norm(sys.span_vector(signed_ones));
    const double max_ones = norm(ordered_projection_maximal_of(sys, ones, A));
    const double max_signed = norm(ordered_projection_maximal_of(sys, signed_ones, A));

    record(constant_maximal, max_ones, c_qg_vee * n_ones);
    record(maximal_lower, max_ones / (2.0 * c_qg_vee), n_signed);
    record(sign_sum_maximal, n_signed, max_signed);
    record(signed_maximal, max_signed, 2.0 * c_qg_vee * n_ones);
    if (amax > 0.0) {
      const double max_x = norm(ordered_projection_maximal_of(sys, x, A));
      record(convex_max, max_x / amax, 2.0 * c_qg_vee * n_ones);
      if (amin > 0.0)
        record(ratio_bound, max_x, 8.0 * c_qg * c_qg * c_qg_vee * (amax / amin) * norm(sys.span_vector(x)));
    }
  }
  rep.checks = {constant_maximal, maximal_lower, sign_sum_maximal, signed_maximal, convex_max, ratio_bound};
  return rep;
}

}  // namespace latmax
