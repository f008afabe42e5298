#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <numbers>

#include "latmax/latmax.hpp"

using namespace latmax;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::MatrixXd dense_vectors(const BiorthogonalSystem& sys) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sys.dim()), static_cast<Eigen::Index>(sys.size()));
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const auto& v = sys.vector(k);
    for (std::size_t t = 0; t < v.index.size(); ++t)
      m(static_cast<Eigen::Index>(v.index[t]), static_cast<Eigen::Index>(k)) = v.value[t];
  }
  return m;
}

Eigen::MatrixXd dense_functionals(const BiorthogonalSystem& sys) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sys.size()), static_cast<Eigen::Index>(sys.dim()));
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const auto& f = sys.functional(k);
    for (std::size_t t = 0; t < f.index.size(); ++t)
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(f.index[t])) = f.value[t];
  }
  return m;
}

double biorthogonality_defect(const BiorthogonalSystem& sys) {
  const Eigen::MatrixXd g = dense_functionals(sys) * dense_vectors(sys);
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double lp_norm(const std::vector<double>& a, double p) {
  double s = 0;
  for (double v : a) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

void check_bundle(const WitnessBundle& b, const std::function<double(const std::string&)>& recompute) {
  for (const auto& [name, ev] : b.expected) {
    const double v = recompute(name);
    if (ev.upper_bound)
      CHECK(v <= ev.value + ev.tolerance);
    else
      CHECK_THAT(v, WithinAbs(ev.value, ev.tolerance));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Lindenstrauss.

TEST_CASE("lindenstrauss vectors", "[lindenstrauss]") {
  const auto sys = lindenstrauss(5);
  CHECK(sys.dim() == 12);
  const auto x1 = sys.vector_element(0);
  std::vector<double> expected(12, 0.0);
  expected[0] = 1.0;
  expected[2] = expected[3] = -0.5;
  CHECK(std::vector<double>(x1.coords().begin(), x1.coords().end()) == expected);
  for (std::size_t n : {1u, 2u, 7u, 33u, 64u}) CHECK(biorthogonality_defect(lindenstrauss(n)) == 0.0);
}

TEST_CASE("lindenstrauss reconstruction against a linear solve", "[lindenstrauss]") {
  const auto sys = lindenstrauss(32);
  const Eigen::MatrixXd V = dense_vectors(sys);
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd a(32);
    for (auto& v : a) v = rng.normal();
    const Eigen::VectorXd x = V * a;
    const Eigen::VectorXd solved = V.colPivHouseholderQr().solve(x);
    const auto coeffs = coefficients(sys, Element(sys.space(), std::vector<double>(x.data(), x.data() + x.size())));
    for (Eigen::Index k = 0; k < 32; ++k) CHECK_THAT(coeffs[static_cast<std::size_t>(k)], WithinAbs(solved(k), 1e-10));
  }
}

TEST_CASE("lindenstrauss level sets", "[lindenstrauss]") {
  CHECK(lindenstrauss_level_set(2) == std::vector<std::size_t>{7, 8, 9, 10});
  std::vector<std::size_t> all;
  for (unsigned m = 0; m < 8; ++m) {
    const auto s = lindenstrauss_level_set(m);
    CHECK(s.size() == (std::size_t{1} << m));
    all.insert(all.end(), s.begin(), s.end());
  }
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
}

TEST_CASE("lindenstrauss witnesses", "[lindenstrauss]") {
  const unsigned N = 6;
  const std::size_t n = lindenstrauss_min_length(N);
  const auto b = lindenstrauss_witness(N, n);
  const auto sys = lindenstrauss(n);
  for (unsigned m = 0; m <= N; ++m) {
    const auto& y = b.vector("y" + std::to_string(m));
    const auto closed = lindenstrauss_y_closed_form(m, n);
    CHECK(std::vector<double>(y.coords().begin(), y.coords().end()) == closed);
    // Coefficients 2^{-k} on the level sets I_k, k < m.
    const auto a = coefficients(sys, y);
    for (unsigned k = 0; k < m; ++k)
      for (std::size_t j : lindenstrauss_level_set(k)) CHECK(a[j - 1] == std::ldexp(1.0, -static_cast<int>(k)));
  }
  CHECK(norm(b.vector("y3")) == 2.0);
  std::vector<Element> ys;
  for (unsigned m = 1; m <= N; ++m) ys.push_back(abs(b.vector("y" + std::to_string(m))));
  CHECK(norm(join(ys)) == N + 1.0);
  check_bundle(b, [&](const std::string& name) {
    if (name == "join_norm") return norm(join(ys));
    if (name == "bibasis_lower") return bibasis_ratio(sys, coefficients(sys, b.vector("y6")));
    return norm(b.vector("y" + name.substr(6)));
  });
  CHECK_THROWS_AS(lindenstrauss_witness(N, n - 1), DomainError);
}

TEST_CASE("lindenstrauss witnesses are greedy sums and partial sums", "[lindenstrauss]") {
  const unsigned N = 7;
  const std::size_t n = lindenstrauss_min_length(N);
  const auto sys = lindenstrauss(n);
  const auto aN = lindenstrauss_y_coefficients(N, n);
  const auto yN = sys.span_vector(aN);
  const auto g = natural_greedy_ordering(aN);
  std::size_t count = 0;
  for (unsigned m = 1; m <= N; ++m) {
    count += std::size_t{1} << (m - 1);
    const auto ym = sys.span_vector(lindenstrauss_y_coefficients(m, n));
    CHECK(max_abs_difference(greedy_sum(sys, yN, count, g), ym) == 0.0);
    // I_k leaves gaps, so the partial sum stops at the last index of I_{m-1}.
    CHECK(max_abs_difference(partial_sum(sys, yN, lindenstrauss_level_set(m - 1).back()), ym) == 0.0);
  }
  CHECK(bibasis_ratio(sys, aN) >= (N + 1.0) / 2.0 - 1e-12);
  CHECK(uqg_ratio(sys, aN) >= (N + 1.0) / 2.0 - 1e-12);
}

TEST_CASE("lindenstrauss basis constant lower bound stays bounded in n", "[lindenstrauss]") {
  Rng rng(2);
  double worst = 0.0;
  for (unsigned N = 2; N <= 10; ++N) {
    const std::size_t n = lindenstrauss_min_length(N);
    const auto sys = lindenstrauss(n);
    std::vector<std::vector<double>> fam;
    for (unsigned m = 1; m <= N; ++m) fam.push_back(lindenstrauss_y_coefficients(m, n));
    for (int i = 0; i < 20; ++i) {
      std::vector<double> a(n);
      for (double& v : a) v = rng.sign();
      fam.push_back(a);
    }
    worst = std::max(worst, basis_constant(sys, fam).value);
  }
  CHECK(worst <= 3.0);
}

// ---------------------------------------------------------------------------
// Triangular truncation.

TEST_CASE("triangular kernel norms", "[triangular]") {
  CHECK(spectral_norm(triangular_kernel(512)) <= std::numbers::pi + 1e-6);
  for (std::size_t n : {16u, 128u, 512u}) {
    const auto on = triangular_operator_norms(n, triangular_default_alpha(n, 2.0));
    CHECK(on.norm_a <= 1.5 + 1e-6);
    CHECK(on.norm_a_inverse <= 2.0 + 1e-6);
  }
}

TEST_CASE("triangular g coefficients", "[triangular]") {
  const double alpha = 1.0 / (2.0 * std::numbers::pi);
  CHECK_THAT(triangular_partial_g(4, 4, alpha), WithinAbs(alpha * 11.0 / 6.0, 1e-15));
  const auto tb = triangular_basis(16, 2.0, alpha);
  const auto& sys = tb.system;
  std::vector<double> partial(sys.dim(), 0.0);
  for (std::size_t j = 1; j <= 16; ++j) {
    sys.add_term(partial, j - 1, 1.0);
    if (j >= 2) {
      const auto& ev = tb.witness.expected.at("g_coefficient_" + std::to_string(j));
      CHECK_THAT(partial[16 + j - 1], WithinAbs(ev.value, 1e-12));
    }
  }
}

TEST_CASE("triangular basis structure", "[triangular]") {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto tb = triangular_basis(32, p);
    CHECK(biorthogonality_defect(tb.system) <= 1e-9);
    CHECK(norm(tb.witness.vector("x")) <= 1.5 * std::pow(32.0, 1.0 / p) + 1e-9);
    // The off-diagonal block S = alpha T is a 1/2-contraction of l_p.
    const Eigen::MatrixXd S = tb.alpha * triangular_kernel(32);
    Rng rng(3);
    double lo = kInfinity, hi = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> x(32), a(64);
      for (double& v : x) v = rng.normal();
      Eigen::VectorXd sx = S * Eigen::Map<Eigen::VectorXd>(x.data(), 32);
      CHECK(lp_norm(std::vector<double>(sx.data(), sx.data() + 32), p) <= 0.5 * lp_norm(x, p) + 1e-12);
      for (double& v : a) v = rng.normal();
      const double ratio = norm(tb.system.span_vector(a)) / lp_norm(a, p);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo <= 3.0);
  }
  CHECK_THROWS_AS(triangular_basis(8, 1.0), DomainError);
  CHECK_THROWS_AS(triangular_basis(1, 2.0), DomainError);
}

TEST_CASE("triangular witness profile against the dense basis", "[triangular]") {
  const auto tb = triangular_basis(64, 2.0);
  const std::vector<double> ones(64, 1.0);
  const auto prof = triangular_witness_profile(64, 2.0);
  CHECK_THAT(prof.maximal_norm, WithinRel(norm(maximal_partial_of(tb.system, ones, 64)), 1e-12));
  CHECK_THAT(prof.x_norm, WithinRel(norm(tb.witness.vector("x")), 1e-12));
}

TEST_CASE("triangular bibasis ratio at n = 256", "[triangular]") {
  const auto tb = triangular_basis(256, 2.0);
  std::vector<double> a(512, 0.0);
  std::fill(a.begin(), a.begin() + 256, 1.0);
  const double x = norm(tb.witness.vector("x"));
  CHECK(bibasis_ratio(tb.system, a) >= 0.05 * 16.0 * std::log(256.0) / x);
}

// ---------------------------------------------------------------------------
// Trace duality.

TEST_CASE("trace dual certificate", "[trace-dual]") {
  CHECK(harmonic_total(2) == 2.5);
  for (std::size_t n : {2u, 5u, 64u, 256u}) {
    const auto c = trace_dual_certificate(n);
    // Entrywise pairing of A_kl = 1/(k-l) with the lower triangular ones matrix.
    double pairing = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < k; ++l) pairing += 1.0 / static_cast<double>(k - l);
    CHECK_THAT(c.pairing, WithinRel(pairing, 1e-12));
    CHECK(c.nuclear >= c.bound - 1e-6);
    CHECK(c.nuclear >= c.pairing / std::numbers::pi - 1e-6);
    if (n >= 64) {
      const double scaled = c.nuclear / (static_cast<double>(n) * std::log(static_cast<double>(n)));
      CHECK(scaled >= 1.0 / std::numbers::pi - 0.05);
      CHECK(scaled <= 2.0);
    }
  }
}

// ---------------------------------------------------------------------------
// Hadamard-mixed.

TEST_CASE("sylvester rows are orthogonal", "[hadamard]") {
  for (unsigned n = 0; n <= 10; ++n) {
    const auto h = sylvester_hadamard(n);
    const Eigen::MatrixXd g = h * h.transpose();
    CHECK((g - std::ldexp(1.0, static_cast<int>(n)) * Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() == 0.0);
  }
  std::vector<double> v{1, 2, 3, 4};
  fwht(v);
  CHECK(v == std::vector<double>{10, -2, -4, 0});
}

TEST_CASE("hadamard mixed sign sums and moduli", "[hadamard]") {
  for (unsigned n = 1; n <= 4; ++n) {
    const auto hm = hadamard_mixed(n);
    const auto& sys = hm.system;
    CHECK(biorthogonality_defect(sys) <= 1e-12);
    const std::size_t d = sys.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      std::vector<double> eps(d);
      for (std::size_t k = 0; k < d; ++k) eps[k] = (mask >> k) & 1u ? -1.0 : 1.0;
      const double dense = norm(sys.span_vector(eps));
      CHECK(dense <= 2.0 + 1e-9);
      CHECK_THAT(hadamard_combination_norm(n, eps), WithinAbs(dense, 1e-12));
    }
    std::vector<double> moduli(sys.dim(), 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      const auto v = sys.vector_element(k);
      for (std::size_t i = 0; i < moduli.size(); ++i) moduli[i] += std::abs(v[i]);
    }
    if (n >= 2) CHECK_THAT(norm(sys.space(), moduli), WithinAbs(std::pow(2.0, n / 2.0), 1e-9));
    check_bundle(hm.witness, [&](const std::string& name) {
      return name == "modulus_sum" ? norm(sys.space(), moduli) : norm(hm.witness.vector("sign_sum_plus"));
    });
  }
  const auto h4 = hadamard_mixed(4);
  const std::vector<double> ones(16, 1.0);
  CHECK(absolute_ratio(h4.system, ones) >= 2.0 - 1e-12);
}

TEST_CASE("hadamard unconditional window and streaming evaluators", "[hadamard]") {
  Rng rng(4);
  for (unsigned n = 1; n <= 8; ++n) {
    const auto hm = hadamard_mixed(n);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a(hm.system.size());
      double sup = 0.0;
      for (double& v : a) {
        v = rng.normal();
        sup = std::max(sup, std::abs(v));
      }
      const double dense = norm(hm.system.span_vector(a));
      CHECK_THAT(hadamard_combination_norm(n, a), WithinRel(dense, 1e-12));
      CHECK(dense >= sup - 1e-12);
      CHECK(dense <= 3.0 * sup);
      std::vector<double> moduli(hm.system.dim(), 0.0);
      for (std::size_t k = 0; k < a.size(); ++k) {
        const auto v = hm.system.vector_element(k);
        for (std::size_t i = 0; i < moduli.size(); ++i) moduli[i] += std::abs(a[k] * v[i]);
      }
      CHECK_THAT(hadamard_modulus_norm(n, a), WithinRel(norm(hm.system.space(), moduli), 1e-12));
    }
  }
  CHECK_THROWS_AS(hadamard_mixed(11), DomainError);
}

// ---------------------------------------------------------------------------
// Rademacher.

TEST_CASE("rademacher system in probability L_1", "[rademacher]") {
  const auto sys = rademacher_l1(10);
  CHECK(biorthogonality_defect(sys) <= 1e-12);
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(10);
    double sum_abs = 0.0, ss = 0.0;
    for (double& v : a) {
      v = rng.normal();
      sum_abs += std::abs(v);
      ss += v * v;
    }
    CHECK_THAT(absolute_ratio(sys, a) * norm(sys.span_vector(a)), WithinRel(sum_abs, 1e-12));
    const double comb = norm(sys.span_vector(a));
    CHECK_THAT(rademacher_combination_norm(a), WithinRel(comb, 1e-12));
    // Khintchine window with the L_1 constant 1/sqrt 2.
    CHECK(comb >= std::sqrt(ss) / std::sqrt(2.0) - 1e-12);
    CHECK(comb <= std::sqrt(ss) + 1e-12);
  }
  std::vector<double> e1(10, 0.0);
  e1[0] = 1.0;
  CHECK(norm(sys.span_vector(e1)) == 1.0);
}

TEST_CASE("rademacher binomial mean", "[rademacher]") {
  for (unsigned m = 1; m <= 16; ++m) {
    double total = 0.0;
    for (std::uint32_t omega = 0; omega < (1u << m); ++omega)
      total += std::abs(static_cast<double>(m) - 2.0 * std::popcount(omega));
    CHECK(rademacher_binomial_mean(m) == std::ldexp(total, -static_cast<int>(m)));
  }
  // Sum_j C(12,j)|12-2j| / 2^12 = 2 * 12 * C(11,5) / 2^12 = 11088 / 4096.
  CHECK(rademacher_binomial_mean(12) == 11088.0 / 4096.0);
  CHECK(norm(rademacher_l1(12).span_vector(std::vector<double>(12, 1.0))) == rademacher_binomial_mean(12));
}

// ---------------------------------------------------------------------------
// Haar.

TEST_CASE("haar orthonormality in L_2", "[haar]") {
  const auto sys = haar_system(6, 2.0);
  const Eigen::MatrixXd V = dense_vectors(sys);
  const Eigen::MatrixXd gram = V.transpose() * V / 64.0;
  CHECK((gram - Eigen::MatrixXd::Identity(64, 64)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(biorthogonality_defect(haar_system(6, 3.0)) <= 1e-12);
  for (std::size_t k = 0; k < sys.size(); ++k) CHECK_THAT(norm(sys.vector_element(k)), WithinAbs(1.0, 1e-12));
  const auto sys3 = haar_system(5, 3.0);
  for (std::size_t k = 0; k < sys3.size(); ++k) CHECK_THAT(norm(sys3.vector_element(k)), WithinAbs(1.0, 1e-12));
}

TEST_CASE("haar reconstruction of step functions", "[haar]") {
  const auto sys = haar_system(8, 2.0);
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> f(256);
    for (double& v : f) v = rng.normal();
    const Element x(sys.space(), f);
    CHECK(max_abs_difference(partial_sum(sys, x, 256), x) < 1e-9);
  }
}

TEST_CASE("haar branch maximal norm grows with J", "[haar]") {
  double prev = 0.0;
  for (unsigned J = 4; J <= 10; ++J) {
    const auto sys = haar_system(J, 2.0);
    const auto a = branch_witness(J, 2.0);
    const auto order = branch_ordering(J);
    // Oracle: direct partial sums along the branch.
    std::vector<double> partial(sys.dim(), 0.0), joined(sys.dim(), 0.0);
    for (std::size_t idx : order) {
      const auto v = sys.vector_element(idx);
      for (std::size_t i = 0; i < partial.size(); ++i) {
        partial[i] += a[idx] * v[i];
        joined[i] = std::max(joined[i], std::abs(partial[i]));
      }
    }
    const double oracle = norm(sys.space(), joined);
    const double got = norm(ordered_projection_maximal_of(sys, a, order));
    CHECK_THAT(got, WithinRel(oracle, 1e-12));
    CHECK(got > prev);
    prev = got;
  }
}

// ---------------------------------------------------------------------------
// Typewriter.

TEST_CASE("typewriter frame partial sums", "[typewriter]") {
  const auto frame = typewriter_frame(4, 2.0);
  const auto& sys = frame.system;
  CHECK(sys.is_frame());
  const Element one(sys.space(), std::vector<double>(16, 1.0));
  // After (h_1, t_1): 1 + t_1, and t_1 covers the whole interval.
  CHECK(max_abs_difference(partial_sum(sys, one, 2), 2.0 * one) == 0.0);
  CHECK(max_abs_difference(partial_sum(sys, one, 3), one) == 0.0);
  CHECK(max_abs_difference(partial_sum(sys, one, sys.size()), one) <= 1e-12);
  Rng rng(7);
  std::vector<double> f(16);
  for (double& v : f) v = rng.normal();
  const Element x(sys.space(), f);
  CHECK(max_abs_difference(partial_sum(sys, x, sys.size()), x) <= 1e-8);
}

TEST_CASE("typewriter oscillation", "[typewriter]") {
  for (unsigned J : {3u, 10u}) {
    const auto prof = typewriter_profile(J, 2.0);
    CHECK_THAT(prof.window_maximal_sup, WithinAbs(2.0, 1e-9));
    for (double o : prof.oscillation) CHECK_THAT(o, WithinAbs(1.0, 1e-9));
  }
}

// ---------------------------------------------------------------------------
// Lorentz and Orlicz.

TEST_CASE("lorentz norm", "[lorentz]") {
  CHECK(lorentz_norm(4, 2, std::vector<double>{1}) == 1.0);
  CHECK_THAT(lorentz_norm(4, 2, std::vector<double>{1, 1}), WithinRel(std::sqrt(1 + std::pow(2.0, 0.5 - 1)), 1e-15));
  CHECK_THAT(lorentz_norm(3, 1, std::vector<double>{0, -2, 1}),
             WithinRel(2.0 + std::pow(2.0, 1.0 / 3 - 1), 1e-15));
  CHECK_THROWS_AS(lorentz_norm(2, 2, std::vector<double>{1}), DomainError);
  const auto demo = lorentz_blocking_demo(4, 2, 1024);
  CHECK_THAT(demo.unit_fit.a, WithinAbs(0.25, 0.05));
  // Block counts 2..10 fit in total length 2^10 - 1.
  CHECK(demo.block_sample.front().first == 2.0);
  CHECK(demo.block_sample.back().first == 10.0);
}

TEST_CASE("orlicz function and luxemburg norm", "[orlicz]") {
  const OrliczFunction phi;
  CHECK(phi(0.0) == 0.0);
  CHECK_THAT(phi.delta2_ratio(0.05), WithinRel(std::exp(10.0), 1e-12));
  const double t0 = phi.unit_level();
  CHECK_THAT(phi(t0), WithinAbs(1.0, 1e-12));
  // I(t0 e1 / lambda) <= 1 exactly when lambda >= 1.
  CHECK_THAT(luxemburg_norm(phi, std::vector<double>{t0}), WithinAbs(1.0, 1e-9));
  CHECK_THAT(luxemburg_norm(phi, std::vector<double>{1.0}), WithinRel(1.0 / t0, 1e-9));
  CHECK_THROWS_AS(OrliczFunction(OrliczParams{1.5}), DomainError);
  const auto demo = orlicz_orderbound_demo(1000, phi);
  for (std::size_t i = 1; i < demo.norms.size(); ++i) {
    CHECK(demo.norms[i].second > demo.norms[i - 1].second);
    CHECK(demo.doubled_modular[i].second > demo.doubled_modular[i - 1].second);
  }
}
