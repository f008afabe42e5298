#pragma once

// Typewriter frame on dyadic L_p: the Haar system woven with pairs
// (t_n, -t_n) of typewriter indicators, functionals (h_n*, f, f) where f is
// integration against the constant function.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "latmax/basis.hpp"
#include "latmax/constructions/haar.hpp"

namespace latmax {

inline constexpr unsigned kTypewriterMaxResolution = 12;

/// Cell range of t_n, n = 2^k + j: [j 2^{J-k}, (j+1) 2^{J-k}).
inline std::pair<std::size_t, std::size_t> typewriter_cells(unsigned J, std::size_t n) {
  if (n == 0 || n > (std::size_t{1} << J)) throw DomainError("typewriter index out of range");
  const unsigned k = static_cast<unsigned>(std::bit_width(n) - 1);
  const std::size_t j = n - (std::size_t{1} << k);
  const std::size_t width = std::size_t{1} << (J - k);
  return {j * width, (j + 1) * width};
}

inline FramePair typewriter_frame(unsigned J, double p) {
  if (J > kTypewriterMaxResolution) throw DomainError("typewriter resolution limited to J <= 12");
  if (!(p > 1.0) || std::isinf(p)) throw DomainError("typewriter frame needs 1 < p < infinity");
  const auto haar = haar_system(J, p);
  const std::size_t d = std::size_t{1} << J;
  const double cell = std::ldexp(1.0, -static_cast<int>(J));
  SparseVector f;
  for (std::size_t c = 0; c < d; ++c) {
    f.index.push_back(c);
    f.value.push_back(cell);
  }
  std::vector<SparseVector> xs, fs;
  std::vector<std::string> labels;
  xs.reserve(3 * d);
  fs.reserve(3 * d);
  for (std::size_t n = 1; n <= d; ++n) {
    xs.push_back(haar.vector(n - 1));
    fs.push_back(haar.functional(n - 1));
    labels.push_back("h" + std::to_string(n));
    const auto [first, last] = typewriter_cells(J, n);
    SparseVector t, neg;
    for (std::size_t c = first; c < last; ++c) {
      t.index.push_back(c);
      t.value.push_back(1.0);
      neg.index.push_back(c);
      neg.value.push_back(-1.0);
    }
    xs.push_back(std::move(t));
    fs.push_back(f);
    labels.push_back("t" + std::to_string(n));
    xs.push_back(std::move(neg));
    fs.push_back(f);
    labels.push_back("-t" + std::to_string(n));
  }
  return FramePair{BiorthogonalSystem(Space::dyadic_lp(J, p), std::move(xs), std::move(fs), true,
                                      std::move(labels))};
}

struct TypewriterProfile {
  unsigned J = 0;
  /// sup over the window of || join_{i<=n} |P_i 1| ||.
  double window_maximal_sup = 0.0;
  /// Per cell: max - min of P_n(1) over the window.
  std::vector<double> oscillation;
  /// || join_{i<=n} |P_i 1| || after each term n = 1..3 2^J.
  std::vector<double> maximal_norms;
  /// First and one-past-last term of the window (1-based term counts).
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
};

/// Partial sums of the frame expansion of the constant function. The window
/// is the last full typewriter pass, the terms of t_n for 2^{J-1} <= n < 2^J.
inline TypewriterProfile typewriter_profile(unsigned J, double p) {
  if (J < 1) throw DomainError("typewriter profile needs J >= 1");
  const auto frame = typewriter_frame(J, p);
  const auto& sys = frame.system;
  const std::size_t d = sys.dim();
  const std::vector<double> one(d, 1.0);
  const Element x(sys.space(), one);
  const auto a = coefficients(sys, x);

  TypewriterProfile out;
  out.J = J;
  const std::size_t half = std::size_t{1} << (J - 1);
  out.window_begin = 3 * (half - 1) + 1;  // first term of the triple for n = 2^{J-1}
  out.window_end = 3 * (2 * half - 1);    // last term of the triple for n = 2^J - 1
  std::vector<double> partial(d, 0.0), joined(d, 0.0), hi(d, -kInfinity), lo(d, kInfinity);
  for (std::size_t term = 1; term <= sys.size(); ++term) {
    const std::size_t k = term - 1;
    if (a[k] != 0.0) {
      const auto& v = sys.vector(k);
      for (std::size_t s = 0; s < v.index.size(); ++s) {
        const std::size_t i = v.index[s];
        partial[i] += a[k] * v.value[s];
        joined[i] = std::max(joined[i], std::abs(partial[i]));
      }
    }
    const double mn = norm(sys.space(), joined);
    out.maximal_norms.push_back(mn);
    if (term >= out.window_begin && term <= out.window_end) {
      out.window_maximal_sup = std::max(out.window_maximal_sup, mn);
      for (std::size_t i = 0; i < d; ++i) {
        hi[i] = std::max(hi[i], partial[i]);
        lo[i] = std::min(lo[i], partial[i]);
      }
    }
  }
  out.oscillation.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.oscillation[i] = hi[i] - lo[i];
  return out;
}

}  // namespace latmax
