#pragma once

// Biorthogonal systems over a lattice, partial sums, maximal partials and
// the basis / bibasis / absolute constants as witness-family maxima.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latmax/lattice.hpp"
#include "latmax/report.hpp"

namespace latmax {

struct SparseVector {
  std::vector<std::size_t> index;
  std::vector<double> value;

  static SparseVector from_dense(std::span<const double> dense) {
    SparseVector s;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] != 0.0) {
        s.index.push_back(i);
        s.value.push_back(dense[i]);
      }
    }
    return s;
  }

  std::size_t nnz() const noexcept { return index.size(); }

  double dot(std::span<const double> dense) const {
    double s = 0.0;
    for (std::size_t t = 0; t < index.size(); ++t) s += value[t] * dense[index[t]];
    return s;
  }

  std::vector<double> to_dense(std::size_t dim) const {
    std::vector<double> d(dim, 0.0);
    for (std::size_t t = 0; t < index.size(); ++t) d[index[t]] = value[t];
    return d;
  }
};

inline constexpr double kBiorthogonalityTolerance = 1e-9;

class BiorthogonalSystem {
 public:
  BiorthogonalSystem(Space space, std::vector<SparseVector> vectors,
                     std::vector<SparseVector> functionals, bool frame = false,
                     std::vector<std::string> labels = {})
      : space_(std::move(space)),
        vectors_(std::move(vectors)),
        functionals_(std::move(functionals)),
        labels_(std::move(labels)),
        frame_(frame) {
    validate();
  }

  BiorthogonalSystem(Space space, const std::vector<Element>& vectors,
                     const std::vector<Element>& functionals, bool frame = false,
                     std::vector<std::string> labels = {})
      : BiorthogonalSystem(space, densify(space, vectors), densify(space, functionals), frame,
                           std::move(labels)) {}

  /// Functionals from the pseudo-inverse of the vector matrix.
  static BiorthogonalSystem with_dual(const Space& space, const std::vector<Element>& vectors) {
    if (vectors.empty()) throw StructuralError("system needs at least one vector");
    const auto n = static_cast<Eigen::Index>(vectors.size());
    const auto d = static_cast<Eigen::Index>(space.dim());
    Eigen::MatrixXd v(d, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& e = vectors[static_cast<std::size_t>(k)];
      if (!(e.space() == space)) throw StructuralError("vector lives outside the system space");
      for (Eigen::Index i = 0; i < d; ++i) v(i, k) = e[static_cast<std::size_t>(i)];
    }
    const Eigen::MatrixXd f = v.completeOrthogonalDecomposition().pseudoInverse();
    std::vector<SparseVector> fs(vectors.size());
    std::vector<double> row(space.dim());
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index i = 0; i < d; ++i) row[static_cast<std::size_t>(i)] = f(k, i);
      fs[static_cast<std::size_t>(k)] = SparseVector::from_dense(row);
    }
    return BiorthogonalSystem(space, densify(space, vectors), std::move(fs));
  }

  const Space& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  std::size_t dim() const noexcept { return space_.dim(); }
  bool is_frame() const noexcept { return frame_; }
  const SparseVector& vector(std::size_t k) const { return vectors_.at(k); }
  const SparseVector& functional(std::size_t k) const { return functionals_.at(k); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  Element vector_element(std::size_t k) const {
    return Element(space_, vectors_.at(k).to_dense(dim()));
  }

  Element functional_element(std::size_t k) const {
    return Element(space_, functionals_.at(k).to_dense(dim()));
  }

  /// sum_k a_k x_k. Shorter coefficient vectors are zero padded.
  Element span_vector(std::span<const double> a) const {
    return Element(space_, span_coords(a));
  }

  std::vector<double> span_coords(std::span<const double> a) const {
    require_coefficients(a);
    std::vector<double> c(dim(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) add_term(c, k, a[k]);
    return c;
  }

  void add_term(std::vector<double>& coords, std::size_t k, double a) const {
    if (a == 0.0) return;
    const auto& v = vectors_[k];
    for (std::size_t t = 0; t < v.index.size(); ++t) coords[v.index[t]] += a * v.value[t];
  }

  void require_coefficients(std::span<const double> a) const {
    if (a.size() > size())
      throw StructuralError("coefficient vector longer than the system");
    for (double v : a) {
      if (!std::isfinite(v)) throw StructuralError("coefficients must be finite");
    }
  }

  void require_member(const Element& x) const {
    if (!x.space().same_node(space_) && !(x.space() == space_))
      throw StructuralError("element lives outside the system space");
  }

 private:
  static std::vector<SparseVector> densify(const Space& space, const std::vector<Element>& xs) {
    std::vector<SparseVector> out;
    out.reserve(xs.size());
    for (const auto& x : xs) {
      if (!(x.space() == space)) throw StructuralError("element lives outside the system space");
      out.push_back(SparseVector::from_dense(x.coords()));
    }
    return out;
  }

  void validate() const {
    if (vectors_.empty()) throw StructuralError("system needs at least one vector");
    if (vectors_.size() != functionals_.size())
      throw StructuralError("vector and functional counts differ");
    if (!labels_.empty() && labels_.size() != vectors_.size())
      throw StructuralError("label count differs from vector count");
    for (const auto* family : {&vectors_, &functionals_}) {
      for (const auto& s : *family) {
        if (s.index.size() != s.value.size()) throw StructuralError("malformed sparse vector");
        for (std::size_t t = 0; t < s.index.size(); ++t) {
          if (s.index[t] >= dim()) throw StructuralError("sparse index outside the space");
          if (!std::isfinite(s.value[t])) throw StructuralError("non-finite system entry");
        }
      }
    }
    for (const auto& v : vectors_) {
      if (v.nnz() == 0) throw StructuralError("system vectors must be nonzero");
    }
    if (frame_) return;

    // f_j(x_k) through an inverse index: coordinate -> functionals touching it.
    std::vector<std::vector<std::pair<std::size_t, double>>> by_coord(dim());
    for (std::size_t j = 0; j < functionals_.size(); ++j) {
      const auto& f = functionals_[j];
      for (std::size_t t = 0; t < f.index.size(); ++t) by_coord[f.index[t]].emplace_back(j, f.value[t]);
    }
    std::vector<double> row(functionals_.size(), 0.0);
    std::vector<char> seen(functionals_.size(), 0);
    std::vector<std::size_t> touched;
    for (std::size_t k = 0; k < vectors_.size(); ++k) {
      const auto& v = vectors_[k];
      for (std::size_t t = 0; t < v.index.size(); ++t) {
        for (const auto& [j, fv] : by_coord[v.index[t]]) {
          if (!seen[j]) {
            seen[j] = 1;
            touched.push_back(j);
          }
          row[j] += fv * v.value[t];
        }
      }
      bool diagonal_seen = false;
      for (std::size_t j : touched) {
        const double expected = j == k ? 1.0 : 0.0;
        if (j == k) diagonal_seen = true;
        if (std::abs(row[j] - expected) > kBiorthogonalityTolerance)
          throw StructuralError("biorthogonality fails: f_" + std::to_string(j) + "(x_" +
                                std::to_string(k) + ") = " + std::to_string(row[j]));
        row[j] = 0.0;
        seen[j] = 0;
      }
      touched.clear();
      if (!diagonal_seen) throw StructuralError("biorthogonality fails: f_k(x_k) = 0");
    }
  }

  Space space_;
  std::vector<SparseVector> vectors_;
  std::vector<SparseVector> functionals_;
  std::vector<std::string> labels_;
  bool frame_ = false;
};

/// A possibly redundant vector/functional sequence; reconstruction only.
struct FramePair {
  BiorthogonalSystem system;
  bool frame = true;
};

inline std::vector<double> coefficients(const BiorthogonalSystem& sys, const Element& x) {
  sys.require_member(x);
  std::vector<double> a(sys.size());
  for (std::size_t k = 0; k < sys.size(); ++k) a[k] = sys.functional(k).dot(x.coords());
  return a;
}

namespace detail {

/// Running l_p power sum for a single weighted block; other spaces fall back
/// to a full norm evaluation.
class NormTracker {
 public:
  NormTracker(const Space& space, std::span<const double> coords)
      : space_(space), coords_(coords) {
    if (space.kind() == Space::Kind::lp_block) {
      fast_ = true;
      p_ = space.p();
      for (std::size_t i = 0; i < coords.size(); ++i) sum_ += term(i, coords[i]);
    }
  }

  void before_change(std::size_t i) {
    if (fast_) sum_ -= term(i, coords_[i]);
  }
  void after_change(std::size_t i) {
    if (fast_) sum_ += term(i, coords_[i]);
  }

  double value() const {
    if (!fast_) return detail::norm_of(space_, coords_);
    const double s = std::max(sum_, 0.0);
    if (p_ == 1.0) return s;
    if (p_ == 2.0) return std::sqrt(s);
    return std::pow(s, 1.0 / p_);
  }

 private:
  double term(std::size_t i, double v) const {
    const double w = space_.weights()[i];
    const double a = std::abs(v);
    if (p_ == 1.0) return w * a;
    if (p_ == 2.0) return w * a * a;
    return w * std::pow(a, p_);
  }

  const Space& space_;
  std::span<const double> coords_;
  bool fast_ = false;
  double p_ = 1.0;
  double sum_ = 0.0;
};

}  // namespace detail

/// Join of |sum_{t<=i} a_{order[t]} x_{order[t]}| over i < m. Only the
/// coordinates touched by each new term are revisited, which gives the same
/// doubles as joining the full partial sums.
inline std::vector<double> ordered_maximal_coords(const BiorthogonalSystem& sys,
                                                  std::span<const double> a,
                                                  std::span<const std::size_t> order,
                                                  std::size_t m) {
  if (m > order.size()) throw DomainError("ordered maximal: m exceeds the index list");
  std::vector<double> partial(sys.dim(), 0.0);
  std::vector<double> joined(sys.dim(), 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    const std::size_t k = order[t];
    const double c = k < a.size() ? a[k] : 0.0;
    if (c == 0.0) continue;
    const auto& v = sys.vector(k);
    for (std::size_t s = 0; s < v.index.size(); ++s) {
      const std::size_t i = v.index[s];
      partial[i] += c * v.value[s];
      joined[i] = std::max(joined[i], std::abs(partial[i]));
    }
  }
  return joined;
}

inline std::vector<std::size_t> identity_order(std::size_t m) {
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  return order;
}

inline Element partial_sum(const BiorthogonalSystem& sys, const Element& x, std::size_t n) {
  if (n > sys.size()) throw DomainError("partial sum index exceeds system length");
  const auto a = coefficients(sys, x);
  std::vector<double> c(sys.dim(), 0.0);
  for (std::size_t k = 0; k < n; ++k) sys.add_term(c, k, a[k]);
  return Element(sys.space(), std::move(c));
}

inline Element maximal_partial(const BiorthogonalSystem& sys, const Element& x, std::size_t m) {
  if (m > sys.size()) throw DomainError("maximal partial index exceeds system length");
  const auto a = coefficients(sys, x);
  const auto order = identity_order(m);
  return Element(sys.space(), ordered_maximal_coords(sys, a, order, m));
}

/// Coefficient-space variant: join of |P_n (sum a_k x_k)| for n <= m.
inline Element maximal_partial_of(const BiorthogonalSystem& sys, std::span<const double> a,
                                  std::size_t m) {
  sys.require_coefficients(a);
  if (m > sys.size()) throw DomainError("maximal partial index exceeds system length");
  const auto order = identity_order(m);
  return Element(sys.space(), ordered_maximal_coords(sys, a, order, m));
}

namespace detail {

inline double require_nonzero_norm(const BiorthogonalSystem& sys, std::span<const double> x) {
  const double d = norm_of(sys.space(), x);
  if (!(d > 0.0)) throw DomainError("witness spans the zero vector");
  return d;
}

}  // namespace detail

/// max_n ||P_n x|| / ||x|| for x = sum a_k x_k.
inline double basis_ratio(const BiorthogonalSystem& sys, std::span<const double> a) {
  const auto full = sys.span_coords(a);
  const double denom = detail::require_nonzero_norm(sys, full);
  std::vector<double> partial(sys.dim(), 0.0);
  detail::NormTracker tracker(sys.space(), partial);
  double best_approx = 0.0;
  std::size_t best_step = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) continue;
    const auto& v = sys.vector(k);
    for (std::size_t s = 0; s < v.index.size(); ++s) {
      tracker.before_change(v.index[s]);
      partial[v.index[s]] += a[k] * v.value[s];
      tracker.after_change(v.index[s]);
    }
    const double value = tracker.value();
    if (value > best_approx) {
      best_approx = value;
      best_step = k + 1;
    }
  }
  std::vector<double> best(sys.dim(), 0.0);
  for (std::size_t k = 0; k < best_step; ++k) sys.add_term(best, k, a[k]);
  return detail::norm_of(sys.space(), best) / denom;
}

/// || join_n |P_n x| || / ||x||.
inline double bibasis_ratio(const BiorthogonalSystem& sys, std::span<const double> a) {
  sys.require_coefficients(a);
  const auto full = sys.span_coords(a);
  const double denom = detail::require_nonzero_norm(sys, full);
  const auto order = identity_order(a.size());
  return detail::norm_of(sys.space(), ordered_maximal_coords(sys, a, order, a.size())) / denom;
}

/// || sum_k |a_k x_k| || / || sum_k a_k x_k ||.
inline double absolute_ratio(const BiorthogonalSystem& sys, std::span<const double> a) {
  const auto full = sys.span_coords(a);
  const double denom = detail::require_nonzero_norm(sys, full);
  std::vector<double> moduli(sys.dim(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto& v = sys.vector(k);
    for (std::size_t s = 0; s < v.index.size(); ++s) moduli[v.index[s]] += std::abs(a[k] * v.value[s]);
  }
  return detail::norm_of(sys.space(), moduli) / denom;
}

namespace detail {

template <class Ratio>
ConstantReport family_maximum(ConstantName name, const std::vector<std::vector<double>>& witnesses,
                              SearchTag tag, Ratio ratio) {
  if (witnesses.empty()) throw DomainError("witness family is empty");
  ConstantReport r;
  r.constant = name;
  r.search = tag;
  r.value = -1.0;
  for (const auto& w : witnesses) {
    const double v = ratio(w);
    ++r.budget;
    if (v > r.value) {
      r.value = v;
      r.witness = w;
    }
  }
  r.exhaustive = tag == SearchTag::exhaustive_signs;
  return r;
}

}  // namespace detail

inline ConstantReport basis_constant(const BiorthogonalSystem& sys,
                                     const std::vector<std::vector<double>>& witnesses,
                                     SearchTag tag = SearchTag::structured_family) {
  return detail::family_maximum(ConstantName::basis, witnesses, tag,
                                [&](const auto& w) { return basis_ratio(sys, w); });
}

inline ConstantReport bibasis_constant(const BiorthogonalSystem& sys,
                                       const std::vector<std::vector<double>>& witnesses,
                                       SearchTag tag = SearchTag::structured_family) {
  return detail::family_maximum(ConstantName::bibasis, witnesses, tag,
                                [&](const auto& w) { return bibasis_ratio(sys, w); });
}

inline ConstantReport absolute_constant(const BiorthogonalSystem& sys,
                                        const std::vector<std::vector<double>>& witnesses,
                                        SearchTag tag = SearchTag::structured_family) {
  return detail::family_maximum(ConstantName::absolute, witnesses, tag,
                                [&](const auto& w) { return absolute_ratio(sys, w); });
}

/// All 2^m sign vectors of length m (m <= 20), padded to `length`.
inline std::vector<std::vector<double>> sign_cube(std::size_t m, std::size_t length) {
  if (m > 20) throw DomainError("sign cube limited to 20 coordinates");
  if (m > length) throw DomainError("sign cube wider than the coefficient length");
  std::vector<std::vector<double>> out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<double> w(length, 0.0);
    for (std::size_t i = 0; i < m; ++i) w[i] = (mask >> i) & 1u ? -1.0 : 1.0;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace latmax
