#pragma once

// Named experiments over the constructions, with their parameter schemas and
// acceptance assertions, and the runner that writes the report files.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "latmax/harness/config.hpp"
#include "latmax/harness/table.hpp"
#include "latmax/io/json.hpp"
#include "latmax/latmax.hpp"

#ifndef LATMAX_VERSION
#define LATMAX_VERSION "0.3.0"
#endif

namespace latmax::harness {

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunResult {
  Table values;
  json fits = nullptr;
  json summary = json::object();
  std::vector<Assertion> assertions;

  void check(std::string name, bool ok, std::string detail = {}) {
    assertions.push_back({std::move(name), ok, std::move(detail)});
  }
  bool passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.passed; });
  }
};

using ExperimentFn = std::function<RunResult(const Params&, std::uint64_t seed)>;

struct ExperimentInfo {
  std::string id;
  std::string description;
  std::vector<ParamSpec> params;
  ExperimentFn run;
};

inline std::string fmt(double v) { return format_double(v); }

inline bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

// ---------------------------------------------------------------------------
// Shared pieces used by both the catalog and the acceptance suite.

/// A random lattice of the given dimension: one weighted block, or a direct
/// sum of two.
inline Space random_host(Rng& rng, std::size_t dim) {
  static constexpr double exponents[] = {1.0, 1.5, 2.0, 3.0, kInfinity};
  auto block = [&](std::size_t d) {
    const double p = exponents[rng.below(5)];
    if (std::isinf(p)) return Space::sup(d);
    std::vector<double> w(d);
    for (double& x : w) x = rng.uniform(0.5, 2.0);
    return Space::lp(std::move(w), p);
  };
  if (dim < 2 || rng.below(2) == 0) return block(dim);
  const std::size_t left = 1 + rng.below(dim - 1);
  return Space::direct_sum(exponents[rng.below(5)], {block(left), block(dim - left)});
}

/// count Gaussian vectors in a random host of dimension count + extra, with
/// pseudo-inverse functionals.
inline BiorthogonalSystem random_system(Rng& rng, std::size_t count, std::size_t extra) {
  const Space host = random_host(rng, count + extra);
  std::vector<Element> vs;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> c(host.dim());
    for (double& x : c) x = rng.normal();
    vs.emplace_back(host, std::move(c));
  }
  return BiorthogonalSystem::with_dual(host, vs);
}

/// Coefficients drawn from {0, +-1/2, +-1, +-2} so moduli tie often.
inline std::vector<double> tied_coefficients(Rng& rng, std::size_t count) {
  static constexpr double values[] = {0.0, 0.5, -0.5, 1.0, -1.0, 1.0, -1.0, 2.0, -2.0};
  std::vector<double> a(count);
  do {
    for (double& x : a) x = values[rng.below(9)];
  } while (std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; }));
  return a;
}

struct EquivalenceOutcome {
  double all_orderings_max = 0.0;
  double natural_perturbed_max = 0.0;
  bool orderings_realized = true;
};

/// Max over witnesses, greedy orderings and m of ||G^vee_{pi,m}(x)||/||x||
/// against the max over strictly greedy perturbations of the full-support
/// natural-order value.
inline EquivalenceOutcome greedy_equivalence(const BiorthogonalSystem& sys,
                                             const std::vector<std::vector<double>>& witnesses,
                                             double delta) {
  EquivalenceOutcome out;
  for (const auto& a : witnesses) {
    const double denom = norm(sys.span_vector(a));
    const std::size_t r = natural_greedy_ordering(a).support();
    for (const auto& pi : all_greedy_orderings(a)) {
      GreedyOrdering g{pi, a};
      for (std::size_t m = 1; m <= r; ++m)
        out.all_orderings_max = std::max(out.all_orderings_max, norm(greedy_maximal_of(sys, a, g, m)) / denom);
      const auto b = strictly_greedy_perturbation(a, pi, delta);
      const auto natural = natural_greedy_ordering(b);
      if (!std::equal(pi.begin(), pi.begin() + static_cast<long>(r), natural.permutation.begin()))
        out.orderings_realized = false;
      out.natural_perturbed_max = std::max(out.natural_perturbed_max, uqg_ratio(sys, b));
    }
  }
  return out;
}

/// Haar kvee structured candidates for a given m.
inline KveeOptions haar_kvee_options(unsigned J, double p, std::size_t m, std::uint64_t seed) {
  KveeOptions o;
  o.seed = seed;
  for (unsigned L = 1; L <= J && (std::size_t{1} << L) - 1 <= m; ++L) o.structured.push_back(haar_midpoint_witness(J, L, p));
  const auto branch = branch_ordering(J);
  if (branch.size() <= m) o.structured.emplace_back(branch, branch_witness(J, p));
  return o;
}

// ---------------------------------------------------------------------------
// Experiments.

inline RunResult run_greedy_equivalence(const Params& ps, std::uint64_t seed) {
  const auto systems = ps.integer_in("systems", 1, 100000);
  const auto max_dim = ps.integer_in("max_dim", 2, 8);
  const auto witnesses = ps.integer_in("witnesses", 1, 1000);
  const double delta = ps.real("delta");
  RunResult r;
  r.values.columns = {"system", "count", "dim", "all_orderings_max", "natural_perturbed_max", "abs_diff"};
  Rng rng(seed);
  double worst = 0.0;
  bool realized = true;
  for (std::int64_t s = 0; s < systems; ++s) {
    const auto count = static_cast<std::size_t>(2 + rng.below(static_cast<std::size_t>(max_dim - 1)));
    const auto sys = random_system(rng, count, rng.below(3));
    std::vector<std::vector<double>> ws;
    for (std::int64_t w = 0; w < witnesses; ++w) ws.push_back(tied_coefficients(rng, count));
    const auto out = greedy_equivalence(sys, ws, delta);
    const double diff = std::abs(out.all_orderings_max - out.natural_perturbed_max);
    worst = std::max(worst, diff);
    realized = realized && out.orderings_realized;
    r.values.add({s, static_cast<std::int64_t>(count), static_cast<std::int64_t>(sys.dim()), out.all_orderings_max,
                  out.natural_perturbed_max, diff});
  }
  r.summary["max_abs_diff"] = worst;
  r.check("orderings_agree", worst <= 1e-9, "max |difference| = " + fmt(worst));
  r.check("perturbation_realizes_ordering", realized);
  return r;
}

inline RunResult run_haar_branch(const Params& ps, std::uint64_t) {
  const auto j_min = ps.integer_in("J_min", 1, 14);
  const auto j_max = ps.integer_in("J_max", j_min + 1, 14);
  const double p = ps.real("p");
  RunResult r;
  r.values.columns = {"J", "branch_maximal_norm", "witness_norm", "ratio"};
  double prev = -1.0;
  bool increasing = true;
  for (auto J = j_min; J <= j_max; ++J) {
    const auto sys = haar_system(static_cast<unsigned>(J), p);
    const auto a = branch_witness(static_cast<unsigned>(J), p);
    const double num = norm(ordered_projection_maximal_of(sys, a, branch_ordering(static_cast<unsigned>(J))));
    const double den = norm(sys.span_vector(a));
    increasing = increasing && num > prev;
    prev = num;
    r.values.add({J, num, den, num / den});
  }
  r.check("branch_norm_strictly_increasing", increasing);
  return r;
}

inline RunResult run_haar_envelope(const Params& ps, std::uint64_t seed) {
  const auto J = static_cast<unsigned>(ps.integer_in("J", 1, 12));
  const double p = ps.real("p");
  const auto samples = ps.integer_in("samples", 1, 1000000);
  const double cap = ps.real("cap");
  const auto sys = haar_system(J, p);
  RunResult r;
  r.values.columns = {"sample", "bibasis_ratio", "uqg_ratio"};
  Rng rng(seed);
  double worst_bib = 0.0, worst_uqg = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    std::vector<double> a(sys.size());
    for (double& x : a) x = rng.normal();
    const double bib = bibasis_ratio(sys, a);
    const double uqg = uqg_ratio(sys, a);
    worst_bib = std::max(worst_bib, bib);
    worst_uqg = std::max(worst_uqg, uqg);
    r.values.add({s, bib, uqg});
  }
  r.summary["max_bibasis_ratio"] = worst_bib;
  r.summary["max_uqg_ratio"] = worst_uqg;
  r.check("bibasis_envelope", worst_bib <= cap, "max = " + fmt(worst_bib) + ", observed envelope only");
  r.check("uqg_envelope", worst_uqg <= cap, "max = " + fmt(worst_uqg) + ", observed envelope only");
  return r;
}

inline RunResult run_haar_kvee(const Params& ps, std::uint64_t seed) {
  const auto J = static_cast<unsigned>(ps.integer_in("J", 2, 12));
  const double p = ps.real("p");
  const auto ms = ps.integers("m");
  const auto budget = static_cast<std::size_t>(ps.integer_in("budget", 1, 100000000));
  const double ratio_cap = ps.real("ratio_cap");
  const auto sys = haar_system(J, p);
  RunResult r;
  r.values.columns = {"m", "log2_m", "estimate", "ratio_to_log2_m", "search", "evaluations"};
  std::vector<double> xs, ys;
  std::vector<std::pair<double, double>> sample;
  double worst_ratio = 0.0;
  for (auto m : ms) {
    if (m < 2 || static_cast<std::size_t>(m) > sys.size()) throw UsageError("m must lie in [2, 2^J]");
    const auto rep = kvee_estimate(sys, static_cast<std::size_t>(m), budget,
                                   haar_kvee_options(J, p, static_cast<std::size_t>(m), seed));
    const double l = std::log2(static_cast<double>(m));
    xs.push_back(l);
    ys.push_back(rep.value);
    sample.emplace_back(static_cast<double>(m), rep.value);
    worst_ratio = std::max(worst_ratio, rep.value / l);
    r.values.add({m, l, rep.value, rep.value / l, std::string(to_string(rep.search)),
                  static_cast<std::int64_t>(rep.budget)});
  }
  const auto line = line_fit(xs, ys);
  r.fits = json{{"linear_log2", {{"intercept", line.intercept}, {"slope", line.slope}}}};
  if (sample.size() >= 4) r.fits["growth"] = to_json(growth_fit(sample));
  r.summary["budget"] = budget;
  r.check("log2_slope_positive", line.slope > 0.0, "slope = " + fmt(line.slope));
  r.check("ratio_to_log2_bounded", worst_ratio <= ratio_cap, "max ratio = " + fmt(worst_ratio));
  return r;
}

inline RunResult run_hadamard_mixed(const Params& ps, std::uint64_t seed) {
  const auto n_min = ps.integer_in("n_min", 1, kHadamardMaxOrder);
  const auto n_max = ps.integer_in("n_max", n_min, kHadamardMaxOrder);
  const auto exhaustive_max = ps.integer_in("exhaustive_max", 0, 4);
  const auto samples = ps.integer_in("samples", 1, 100000000);
  const auto alpha_samples = ps.integer_in("alpha_samples", 1, 100000000);
  RunResult r;
  r.values.columns = {"n",          "patterns",          "exhaustive",     "max_sign_sum_norm",
                      "modulus_sum_norm", "expected_modulus", "absolute_lower", "window_min",
                      "window_max"};
  Rng rng(seed);
  bool sign_ok = true, modulus_ok = true, window_ok = true, absolute_ok = true;
  for (auto n = n_min; n <= n_max; ++n) {
    const std::size_t d = std::size_t{1} << n;
    const bool exhaustive = n <= exhaustive_max;
    std::vector<double> eps(d);
    double worst = 0.0;
    std::int64_t patterns = 0;
    if (exhaustive) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask, ++patterns) {
        for (std::size_t k = 0; k < d; ++k) eps[k] = (mask >> k) & 1u ? -1.0 : 1.0;
        worst = std::max(worst, hadamard_combination_norm(static_cast<unsigned>(n), eps));
      }
    } else {
      for (; patterns < samples; ++patterns) {
        for (double& e : eps) e = rng.sign();
        worst = std::max(worst, hadamard_combination_norm(static_cast<unsigned>(n), eps));
      }
    }
    const std::vector<double> ones(d, 1.0);
    const double modulus = hadamard_modulus_norm(static_cast<unsigned>(n), ones);
    const double expected = std::sqrt(static_cast<double>(d));
    const double absolute_lower = modulus / hadamard_combination_norm(static_cast<unsigned>(n), ones);
    double wmin = kInfinity, wmax = 0.0;
    std::vector<double> alpha(d);
    for (std::int64_t s = 0; s < alpha_samples; ++s) {
      double sup = 0.0;
      for (double& a : alpha) {
        a = rng.uniform(-1.0, 1.0);
        sup = std::max(sup, std::abs(a));
      }
      for (double& a : alpha) a /= sup;
      const double v = hadamard_combination_norm(static_cast<unsigned>(n), alpha);
      wmin = std::min(wmin, v);
      wmax = std::max(wmax, v);
    }
    sign_ok = sign_ok && worst <= 3.0 && worst <= 2.0 + 1e-9;
    modulus_ok = modulus_ok && within(modulus, expected, 1e-9);
    absolute_ok = absolute_ok && absolute_lower >= std::ldexp(expected, -1) - 1e-9;
    window_ok = window_ok && wmin >= 1.0 - 1e-12 && wmax <= 3.0;
    r.values.add({n, patterns, static_cast<std::int64_t>(exhaustive), worst, modulus, expected, absolute_lower,
                  wmin, wmax});
  }
  r.check("sign_sums_bounded", sign_ok, "sign sums <= 3 and <= 2 in this host");
  r.check("modulus_sum_exact", modulus_ok);
  r.check("absolute_lower_bound", absolute_ok);
  r.check("unconditional_window", window_ok);
  return r;
}

inline RunResult run_l2_blocks(const Params& ps, std::uint64_t seed) {
  const auto blocks = ps.integer_in("blocks", 1, 10000);
  const auto m_max = ps.integer_in("m_max", 1, 20);
  RunResult r;
  r.values.columns = {"block", "m", "subset_sum_sup", "half_abs_sum", "ratio"};
  Rng rng(seed);
  bool ok = true;
  for (std::int64_t b = 0; b < blocks; ++b) {
    const auto m = static_cast<std::size_t>(1 + rng.below(static_cast<std::size_t>(m_max)));
    std::vector<double> x(m);
    double half = 0.0;
    for (double& v : x) {
      v = rng.normal();
      half += 0.5 * std::abs(v);
    }
    double sup = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        if ((mask >> i) & 1u) s += x[i];
      sup = std::max(sup, std::abs(s));
    }
    ok = ok && sup >= half - 1e-12;
    r.values.add({b, static_cast<std::int64_t>(m), sup, half, sup / half});
  }
  r.check("subset_sum_lower_bound", ok);
  return r;
}

inline RunResult run_lindenstrauss_witness(const Params& ps, std::uint64_t) {
  const auto N = static_cast<unsigned>(ps.integer_in("N", 1, 20));
  auto n = ps.integer("n");
  if (n == 0) n = static_cast<std::int64_t>(lindenstrauss_min_length(N));
  if (static_cast<std::size_t>(n) < lindenstrauss_min_length(N))
    throw UsageError("n must be at least " + std::to_string(lindenstrauss_min_length(N)));
  const auto sys = lindenstrauss(static_cast<std::size_t>(n));
  RunResult r;
  r.values.columns = {"m", "norm_y", "running_join_norm", "bibasis_ratio", "uqg_ratio"};
  std::vector<double> join(sys.dim(), 0.0);
  bool norms_ok = true, join_ok = true, ratios_ok = true;
  double final_join = 0.0;
  for (unsigned m = 1; m <= N; ++m) {
    const auto a = lindenstrauss_y_coefficients(m, sys.size());
    const auto y = sys.span_vector(a);
    for (std::size_t i = 0; i < join.size(); ++i) join[i] = std::max(join[i], std::abs(y[i]));
    final_join = norm(sys.space(), join);
    const double bib = bibasis_ratio(sys, a), uqg = uqg_ratio(sys, a);
    norms_ok = norms_ok && within(norm(y), 2.0, 1e-9);
    join_ok = join_ok && within(final_join, m + 1.0, 1e-9);
    ratios_ok = ratios_ok && bib >= (m + 1.0) / 2.0 - 1e-9 && uqg >= (m + 1.0) / 2.0 - 1e-9;
    r.values.add({static_cast<std::int64_t>(m), norm(y), final_join, bib, uqg});
  }
  r.summary["final_join_norm"] = final_join;
  r.check("norm_y_equals_2", norms_ok);
  r.check("join_norm_equals_m_plus_1", join_ok, "final join norm = " + fmt(final_join));
  r.check("bibasis_and_uqg_lower_bounds", ratios_ok);
  return r;
}

inline RunResult run_lorentz(const Params& ps, std::uint64_t) {
  const double p = ps.real("p"), q = ps.real("q");
  const auto n_max = static_cast<std::size_t>(ps.integer_in("n_max", 16, 1 << 24));
  const auto demo = lorentz_blocking_demo(p, q, n_max);
  RunResult r;
  r.values.columns = {"family", "n", "fundamental_function"};
  for (const auto& [n, v] : demo.unit_sample) r.values.add({std::string("unit"), static_cast<std::int64_t>(n), v});
  for (const auto& [n, v] : demo.block_sample) r.values.add({std::string("block"), static_cast<std::int64_t>(n), v});
  r.fits = json{{"unit", to_json(demo.unit_fit)}, {"block", to_json(demo.block_fit)}};
  r.check("unit_exponent", within(demo.unit_fit.a, 1.0 / p, 0.05), "a = " + fmt(demo.unit_fit.a));
  r.check("block_exponent", within(demo.block_fit.a, 1.0 / q, 0.08), "a = " + fmt(demo.block_fit.a));
  return r;
}

inline RunResult run_orlicz(const Params& ps, std::uint64_t) {
  const auto K = static_cast<std::size_t>(ps.integer_in("K_max", 2, 10000000));
  const OrliczFunction phi(OrliczParams{ps.real("splice")});
  const auto demo = orlicz_orderbound_demo(K, phi);
  RunResult r;
  r.values.columns = {"K", "upper_bound_norm", "doubled_modular"};
  bool norm_inc = true, modular_inc = true;
  for (std::size_t i = 0; i < demo.norms.size(); ++i) {
    if (i > 0) {
      norm_inc = norm_inc && demo.norms[i].second > demo.norms[i - 1].second;
      modular_inc = modular_inc && demo.doubled_modular[i].second > demo.doubled_modular[i - 1].second;
    }
    r.values.add({static_cast<std::int64_t>(demo.norms[i].first), demo.norms[i].second,
                  demo.doubled_modular[i].second});
  }
  const double first = demo.doubled_modular.front().second, last = demo.doubled_modular.back().second;
  r.summary["delta2_ratio_at_0.05"] = phi.delta2_ratio(0.05);
  r.check("upper_bound_norm_increasing", norm_inc);
  r.check("doubled_modular_increasing", modular_inc);
  r.check("doubled_modular_unbounded_trend", last > 2.0 * first,
          "I(2 P_K x) from " + fmt(first) + " to " + fmt(last));
  return r;
}

inline RunResult run_rademacher(const Params& ps, std::uint64_t seed) {
  const auto n = static_cast<unsigned>(ps.integer_in("n", 1, 16));
  const auto samples = ps.integer_in("samples", 1, 1000000);
  const auto ms = ps.integers("m");
  const auto sys = rademacher_l1(n);
  Rng rng(seed);
  double worst_identity = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    std::vector<double> alpha(n);
    double sum_abs = 0.0;
    for (double& a : alpha) {
      a = rng.normal();
      sum_abs += std::abs(a);
    }
    std::vector<double> moduli(sys.dim(), 0.0);
    for (unsigned k = 0; k < n; ++k) {
      const auto& v = sys.vector(k);
      for (std::size_t t = 0; t < v.index.size(); ++t) moduli[v.index[t]] += std::abs(alpha[k] * v.value[t]);
    }
    worst_identity = std::max(worst_identity, std::abs(norm(sys.space(), moduli) - sum_abs) / sum_abs);
  }
  RunResult r;
  r.values.columns = {"m", "sum_abs", "binomial_mean", "streamed_mean", "ratio"};
  std::vector<std::pair<double, double>> sample;
  bool means_agree = true;
  for (auto m : ms) {
    if (m < 1 || m > kRademacherMaxOrder) throw UsageError("m must lie in [1, 20]");
    const double mean = rademacher_binomial_mean(static_cast<unsigned>(m));
    const std::vector<double> ones(static_cast<std::size_t>(m), 1.0);
    const double streamed = rademacher_combination_norm(ones);
    means_agree = means_agree && mean == streamed;
    const double ratio = static_cast<double>(m) / mean;
    if (m > 1) sample.emplace_back(static_cast<double>(m), ratio);
    r.values.add({m, static_cast<double>(m), mean, streamed, ratio});
  }
  const auto fit = growth_fit(sample);
  r.fits = json{{"ratio", to_json(fit)}};
  r.summary["identity_max_relative_error"] = worst_identity;
  r.check("modulus_sum_identity", worst_identity <= 1e-12, "max relative error = " + fmt(worst_identity));
  r.check("binomial_mean_matches_enumeration", means_agree);
  r.check("ratio_exponent", within(fit.a, 0.5, 0.05), "a = " + fmt(fit.a));
  return r;
}

inline RunResult run_trace_dual(const Params& ps, std::uint64_t) {
  const auto ns = ps.integers("n");
  RunResult r;
  r.values.columns = {"n", "pairing", "harmonic_total", "nuclear_norm", "bound", "nuclear_over_n_log_n"};
  std::vector<std::pair<double, double>> sample;
  bool bound_ok = true, window_ok = true;
  for (auto n : ns) {
    if (n < 2 || n > 4096) throw UsageError("n must lie in [2, 4096]");
    const auto c = trace_dual_certificate(static_cast<std::size_t>(n));
    const double scaled = c.nuclear / (static_cast<double>(n) * std::log(static_cast<double>(n)));
    bound_ok = bound_ok && c.nuclear >= c.bound - 1e-6;
    window_ok = window_ok && scaled >= 1.0 / std::numbers::pi - 0.05 && scaled <= 2.0;
    sample.emplace_back(static_cast<double>(n), c.nuclear);
    r.values.add({n, c.pairing, c.harmonic_total, c.nuclear, c.bound, scaled});
  }
  r.check("nuclear_norm_certificate", bound_ok);
  r.check("nuclear_over_n_log_n_window", window_ok, "nuclear / (n ln n) in [1/pi - 0.05, 2]");
  if (sample.size() >= 4) {
    const auto fit = growth_fit(sample);
    r.fits = json{{"nuclear", to_json(fit)}};
    r.check("growth_a", within(fit.a, 1.0, 0.05), "a = " + fmt(fit.a));
    r.check("growth_b", within(fit.b, 1.0, 0.25), "b = " + fmt(fit.b));
  }
  return r;
}

inline RunResult run_triangular(const Params& ps, std::uint64_t) {
  const double p = ps.real("p");
  const auto ns = ps.integers("n");
  const auto spectral_max = ps.integer("spectral_max");
  const auto operator_max = ps.integer("operator_max");
  RunResult r;
  r.values.columns = {"n",         "alpha",         "maximal_norm", "maximal_g_norm", "x_norm",
                      "ratio",     "x_over_n_1_p",  "spectral_T",   "norm_A",         "norm_A_inverse"};
  std::vector<std::pair<double, double>> sample, g_sample;
  bool spectral_ok = true, operator_ok = true, window_ok = true, x_ok = true;
  for (auto n : ns) {
    if (n < 2 || n > 16384) throw UsageError("n must lie in [2, 16384]");
    const auto prof = triangular_witness_profile(static_cast<std::size_t>(n), p);
    const double dn = static_cast<double>(n);
    const double ratio = prof.maximal_norm / (std::pow(dn, 1.0 / p) * std::log(dn));
    window_ok = window_ok && ratio >= 0.02 && ratio <= 5.0;
    x_ok = x_ok && prof.x_norm <= 1.5 * std::pow(dn, 1.0 / p) + 1e-9;
    sample.emplace_back(dn, prof.maximal_norm);
    g_sample.emplace_back(dn, prof.maximal_g_norm);
    Cell spectral, na, ninv;
    if (p == 2.0 && n <= spectral_max) {
      const double s = spectral_norm(triangular_kernel(static_cast<std::size_t>(n)));
      spectral_ok = spectral_ok && s <= std::numbers::pi + 1e-6;
      spectral = s;
    }
    if (p == 2.0 && n <= operator_max) {
      const auto on = triangular_operator_norms(static_cast<std::size_t>(n), prof.alpha);
      operator_ok = operator_ok && on.norm_a <= 1.5 + 1e-6 && on.norm_a_inverse <= 2.0 + 1e-6;
      na = on.norm_a;
      ninv = on.norm_a_inverse;
    }
    r.values.add({n, prof.alpha, prof.maximal_norm, prof.maximal_g_norm, prof.x_norm, ratio,
                  prof.x_norm / std::pow(dn, 1.0 / p), spectral, na, ninv});
  }
  r.check("spectral_norm_at_most_pi", spectral_ok);
  r.check("operator_norms", operator_ok, "||A|| <= 1.5, ||A^-1|| <= 2");
  r.check("ratio_window", window_ok, "maximal / (n^{1/p} ln n) in [0.02, 5]");
  r.check("witness_norm_bound", x_ok, "||x|| <= 1.5 n^{1/p}");
  if (sample.size() >= 4) {
    const auto fit = growth_fit(sample);
    r.fits = json{{"maximal", to_json(fit)},
                  {"diagnostic_g_block", to_json(growth_fit(g_sample))},
                  {"diagnostic_fixed_b1", to_json(growth_fit(sample, {1.0}))}};
    r.check("growth_a", within(fit.a, 1.0 / p, 0.05), "a = " + fmt(fit.a));
    r.check("growth_b", within(fit.b, 1.0, 0.25), "b = " + fmt(fit.b));
  }
  return r;
}

inline RunResult run_typewriter(const Params& ps, std::uint64_t) {
  const auto J = static_cast<unsigned>(ps.integer_in("J", 1, kTypewriterMaxResolution));
  const double p = ps.real("p");
  const auto prof = typewriter_profile(J, p);
  RunResult r;
  r.values.columns = {"cell", "oscillation"};
  bool osc_ok = true;
  for (std::size_t i = 0; i < prof.oscillation.size(); ++i) {
    osc_ok = osc_ok && within(prof.oscillation[i], 1.0, 1e-9);
    r.values.add({static_cast<std::int64_t>(i), prof.oscillation[i]});
  }
  r.summary["window_maximal_sup"] = prof.window_maximal_sup;
  r.summary["window_terms"] = {prof.window_begin, prof.window_end};
  r.check("window_maximal_norm_equals_2", within(prof.window_maximal_sup, 2.0, 1e-9),
          "sup = " + fmt(prof.window_maximal_sup));
  r.check("oscillation_equals_1", osc_ok);
  return r;
}

// ---------------------------------------------------------------------------
// Catalog.

inline const std::vector<ExperimentInfo>& catalog() {
  static const std::vector<ExperimentInfo> entries = {
      {"greedy-equivalence",
       "Maximal greedy operator: all greedy orderings and all m versus natural order on strictly greedy "
       "perturbations, random systems",
       {{"systems", "200", "number of random systems"},
        {"max_dim", "8", "largest system length"},
        {"witnesses", "6", "tied coefficient vectors per system"},
        {"delta", "1e-12", "perturbation step"}},
       run_greedy_equivalence},
      {"haar-branch",
       "Haar system, ordered maximal operator along the leftmost branch with coefficients 2^{-depth/q}",
       {{"J_min", "4", "smallest resolution"}, {"J_max", "10", "largest resolution"}, {"p", "2", "L_p exponent"}},
       run_haar_branch},
      {"haar-envelope",
       "Haar system in dyadic L_p, bibasis and maximal greedy ratios on random vectors",
       {{"J", "8", "resolution"}, {"p", "2", "L_p exponent"}, {"samples", "1000", "random vectors"},
        {"cap", "10", "envelope asserted"}},
       run_haar_envelope},
      {"haar-kvee",
       "Haar system, k_m^vee lower bounds by structured and random ordered index sets",
       {{"J", "8", "resolution"},
        {"p", "2", "L_p exponent"},
        {"m", "4,8,16,32,64,128,256", "index set sizes"},
        {"budget", "4000", "objective evaluations per m"},
        {"ratio_cap", "2", "bound asserted on estimate / log2 m"}},
       run_haar_kvee},
      {"hadamard-mixed",
       "Hadamard-mixed sequence in a sup block plus l_2 block: sign sums, sum of moduli, unconditional window",
       {{"n_min", "2", "smallest order"},
        {"n_max", "12", "largest order"},
        {"exhaustive_max", "4", "orders enumerated over all sign patterns"},
        {"samples", "10000", "sampled sign patterns above exhaustive_max"},
        {"alpha_samples", "1000", "random coefficient vectors per order"}},
       run_hadamard_mixed},
      {"l2-blocks",
       "Scalar blocks: sup over 0/1 selections of |sum| against half the sum of moduli",
       {{"blocks", "8", "number of blocks"}, {"m_max", "12", "largest block length"}},
       run_l2_blocks},
      {"lindenstrauss-witness",
       "Lindenstrauss sequence in l_1: norms of y_m, running join norm, bibasis and maximal greedy ratios",
       {{"N", "6", "number of witness vectors"}, {"n", "0", "system length (0: smallest admissible)"}},
       run_lindenstrauss_witness},
      {"lorentz",
       "Lorentz l_{p,q}: fundamental functions of unit vectors and of normalized constant blocks",
       {{"p", "4", "outer exponent"}, {"q", "2", "inner exponent"}, {"n_max", "1024", "largest length"}},
       run_lorentz},
      {"orlicz",
       "Orlicz sequence space without Delta_2: norm and doubled modular of the upper bound of y^k = x_k e^k",
       {{"K_max", "1000", "largest truncation"}, {"splice", "0.5", "tangent splice point of phi"}},
       run_orlicz},
      {"rademacher-l1",
       "Rademacher functions in probability L_1: sum of moduli identity and growth of the absolute ratio",
       {{"n", "12", "number of Rademacher functions for the identity check"},
        {"samples", "1000", "random coefficient vectors"},
        {"m", "1..20", "lengths of the constant coefficient vectors"}},
       run_rademacher},
      {"trace-dual",
       "Nuclear norm of the lower triangular ones matrix against its trace-duality certificate",
       {{"n", "64,128,256,512,1024", "matrix sizes"}},
       run_trace_dual},
      {"triangular",
       "Triangular truncation basis in l_p (+) l_p: operator norms and growth of the maximal partial sum",
       {{"p", "2", "exponent"},
        {"n", "64,128,256,512,1024,2048,4096", "sizes"},
        {"spectral_max", "2048", "largest n for the spectral norm of T"},
        {"operator_max", "512", "largest n for ||A|| and ||A^-1||"}},
       run_triangular},
      {"typewriter",
       "Typewriter frame in dyadic L_p: maximal partial sums and oscillation of the expansion of 1",
       {{"J", "10", "resolution"}, {"p", "2", "L_p exponent"}},
       run_typewriter},
  };
  return entries;
}

inline const ExperimentInfo* find_experiment(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return &e;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Runner.

struct RunOutcome {
  int exit_code = 0;
  json manifest;
  RunResult result;
};

inline json assertions_to_json(const std::vector<Assertion>& as) {
  json out = json::array();
  for (const auto& a : as) out.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  return out;
}

/// Runs one experiment and writes manifest.json, values.csv|json and, when
/// the experiment fits growth laws, fit.json into the output directory.
/// Unknown ids and bad parameters raise UsageError before any computation.
inline RunOutcome run(const ExperimentConfig& config, bool write_files = true) {
  const auto* info = find_experiment(config.experiment);
  if (!info) throw UsageError("unknown experiment '" + config.experiment + "'");
  const Params params(info->params, config.params);

  RunOutcome out;
  json manifest{{"experiment", config.experiment},
                {"version", LATMAX_VERSION},
                {"params", params.values()},
                {"seed", config.seed},
                {"format", to_string(config.format)},
                {"output_dir", config.output_dir.generic_string()}};
  const auto start = std::chrono::steady_clock::now();
  std::string error;
  bool usage_error = false;
  try {
    out.result = info->run(params, config.seed);
  } catch (const UsageError& e) {
    error = e.what();
    usage_error = true;
  } catch (const std::invalid_argument& e) {
    // Parameters outside a construction's domain.
    error = e.what();
    usage_error = true;
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool passed = error.empty() && out.result.passed();
  manifest["wall_time_seconds"] = wall;
  manifest["status"] = passed ? "passed" : "failed";
  manifest["failed"] = !passed;
  manifest["assertions"] = assertions_to_json(out.result.assertions);
  manifest["summary"] = out.result.summary;
  if (out.result.summary.contains("budget")) manifest["budget"] = out.result.summary["budget"];
  if (!error.empty()) manifest["error"] = error;
  out.manifest = manifest;
  out.exit_code = passed ? 0 : (usage_error ? 2 : 1);

  if (write_files) {
    const auto& dir = config.output_dir;
    write_atomically(dir / "manifest.json", manifest.dump(2) + "\n");
    if (!out.result.values.columns.empty()) {
      if (config.format == Format::csv)
        write_atomically(dir / "values.csv", to_csv(out.result.values));
      else
        write_atomically(dir / "values.json", to_json(out.result.values).dump(2) + "\n");
    }
    if (!out.result.fits.is_null()) write_atomically(dir / "fit.json", out.result.fits.dump(2) + "\n");
  }
  if (usage_error) throw UsageError(error);
  return out;
}

}  // namespace latmax::harness
