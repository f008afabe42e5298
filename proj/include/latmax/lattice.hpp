#pragma once

// Finite-dimensional Banach lattices with coordinatewise order.
//
// A Space is an immutable descriptor tree: weighted l_p blocks, sup blocks
// and outer-p direct sums of those. An Element is a dense coordinate vector
// tagged with the Space it lives in. Lattice operations (modulus, join) are
// coordinatewise; the norm is evaluated recursively over the descriptor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace latmax {

/// Shape mismatch: wrong dimension, mixed spaces, malformed descriptor.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter outside the documented range of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Space {
 public:
  enum class Kind { lp_block, sup_block, direct_sum };

  /// l_p^dim with unit weights. p = infinity yields a sup block.
  static Space lp(std::size_t dim, double p) {
    return lp(std::vector<double>(dim, 1.0), p);
  }

  static Space lp(std::vector<double> weights, double p) {
    if (weights.empty()) throw StructuralError("lp block must have positive dimension");
    check_exponent(p, "lp block");
    if (std::isinf(p)) return sup(weights.size());
    for (double w : weights) {
      if (!(w > 0.0) || !std::isfinite(w))
        throw StructuralError("lp block weights must be positive and finite");
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::lp_block;
    node->dim = weights.size();
    node->p = p;
    node->weights = std::move(weights);
    return Space(std::move(node));
  }

  static Space sup(std::size_t dim) {
    if (dim == 0) throw StructuralError("sup block must have positive dimension");
    auto node = std::make_shared<Node>();
    node->kind = Kind::sup_block;
    node->dim = dim;
    node->p = kInfinity;
    return Space(std::move(node));
  }

  static Space direct_sum(double outer_p, std::vector<Space> parts) {
    if (parts.empty()) throw StructuralError("direct sum needs at least one part");
    check_exponent(outer_p, "direct sum");
    auto node = std::make_shared<Node>();
    node->kind = Kind::direct_sum;
    node->p = outer_p;
    node->dim = 0;
    node->offsets.reserve(parts.size());
    for (const auto& part : parts) {
      node->offsets.push_back(node->dim);
      node->dim += part.dim();
    }
    node->parts = std::move(parts);
    return Space(std::move(node));
  }

  /// Dyadic L_p[0,1] at resolution J: 2^J cells of measure 2^-J.
  static Space dyadic_lp(unsigned resolution, double p) {
    if (resolution > 24) throw DomainError("dyadic resolution above 24 is not supported");
    const std::size_t cells = std::size_t{1} << resolution;
    return lp(std::vector<double>(cells, std::ldexp(1.0, -static_cast<int>(resolution))), p);
  }

  Kind kind() const noexcept { return node_->kind; }
  std::size_t dim() const noexcept { return node_->dim; }
  /// Block exponent, outer exponent for sums, infinity for sup blocks.
  double p() const noexcept { return node_->p; }
  std::span<const double> weights() const noexcept { return node_->weights; }
  std::span<const Space> parts() const noexcept { return node_->parts; }
  std::size_t part_offset(std::size_t i) const { return node_->offsets.at(i); }

  bool same_node(const Space& other) const noexcept { return node_ == other.node_; }

  friend bool operator==(const Space& a, const Space& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.kind != y.kind || x.dim != y.dim || x.p != y.p) return false;
    if (x.weights != y.weights) return false;
    if (x.parts.size() != y.parts.size()) return false;
    for (std::size_t i = 0; i < x.parts.size(); ++i) {
      if (!(x.parts[i] == y.parts[i])) return false;
    }
    return true;
  }

 private:
  struct Node {
    Kind kind{};
    std::size_t dim = 0;
    double p = 1.0;
    std::vector<double> weights;
    std::vector<Space> parts;
    std::vector<std::size_t> offsets;
  };

  explicit Space(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static void check_exponent(double p, const char* what) {
    if (std::isnan(p) || p < 1.0)
      throw StructuralError(std::string(what) + ": exponent must lie in [1, infinity]");
  }

  std::shared_ptr<const Node> node_;
};

class Element {
 public:
  Element(Space space, std::vector<double> coords)
      : space_(std::move(space)), coords_(std::move(coords)) {
    if (coords_.size() != space_.dim())
      throw StructuralError("element has " + std::to_string(coords_.size()) +
                            " coordinates, space has dimension " + std::to_string(space_.dim()));
    for (double c : coords_) {
      if (!std::isfinite(c)) throw StructuralError("element coordinates must be finite");
    }
  }

  static Element zero(const Space& space) {
    return Element(space, std::vector<double>(space.dim(), 0.0));
  }

  /// Unit vector e_i.
  static Element unit(const Space& space, std::size_t i) {
    std::vector<double> c(space.dim(), 0.0);
    c.at(i) = 1.0;
    return Element(space, std::move(c));
  }

  const Space& space() const noexcept { return space_; }
  std::span<const double> coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  Space space_;
  std::vector<double> coords_;
};

namespace detail {

inline double lp_block_norm(std::span<const double> w, double p, std::span<const double> x) {
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::abs(x[i]);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] * x[i];
    return std::sqrt(s);
  }
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(std::abs(x[i]) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

inline double combine(double p, std::span<const double> parts) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : parts) m = std::max(m, v);
    return m;
  }
  static thread_local std::vector<double> unit;
  unit.assign(parts.size(), 1.0);
  return lp_block_norm(unit, p, parts);
}

inline double norm_of(const Space& space, std::span<const double> x) {
  switch (space.kind()) {
    case Space::Kind::lp_block:
      return lp_block_norm(space.weights(), space.p(), x);
    case Space::Kind::sup_block: {
      double m = 0.0;
      for (double v : x) m = std::max(m, std::abs(v));
      return m;
    }
    case Space::Kind::direct_sum: {
      std::vector<double> part_norms;
      part_norms.reserve(space.parts().size());
      for (std::size_t i = 0; i < space.parts().size(); ++i) {
        const Space& part = space.parts()[i];
        part_norms.push_back(norm_of(part, x.subspan(space.part_offset(i), part.dim())));
      }
      return combine(space.p(), part_norms);
    }
  }
  return 0.0;
}

inline void require_same_space(const Element& a, const Element& b) {
  if (!a.space().same_node(b.space()) && !(a.space() == b.space()))
    throw StructuralError("elements live in different spaces");
}

}  // namespace detail

/// Lattice norm evaluated over raw coordinates (length must equal dim).
inline double norm(const Space& space, std::span<const double> coords) {
  if (coords.size() != space.dim()) throw StructuralError("coordinate count does not match space");
  return detail::norm_of(space, coords);
}

inline double norm(const Element& x) { return detail::norm_of(x.space(), x.coords()); }

inline Element abs(const Element& x) {
  std::vector<double> c(x.coords().begin(), x.coords().end());
  for (double& v : c) v = std::abs(v);
  return Element(x.space(), std::move(c));
}

inline Element join(std::span<const Element> xs) {
  if (xs.empty()) throw StructuralError("join of an empty family");
  std::vector<double> c(xs.front().coords().begin(), xs.front().coords().end());
  for (std::size_t k = 1; k < xs.size(); ++k) {
    detail::require_same_space(xs.front(), xs[k]);
    const auto y = xs[k].coords();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::max(c[i], y[i]);
  }
  return Element(xs.front().space(), std::move(c));
}

inline Element join(std::initializer_list<Element> xs) {
  return join(std::span<const Element>(xs.begin(), xs.size()));
}

inline Element meet(const Element& a, const Element& b) {
  detail::require_same_space(a, b);
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::min(a[i], b[i]);
  return Element(a.space(), std::move(c));
}

/// a <= b coordinatewise, up to an absolute slack.
inline bool dominated_by(const Element& a, const Element& b, double slack = 0.0) {
  detail::require_same_space(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + slack) return false;
  }
  return true;
}

inline Element operator+(const Element& a, const Element& b) {
  detail::require_same_space(a, b);
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return Element(a.space(), std::move(c));
}

inline Element operator-(const Element& a, const Element& b) {
  detail::require_same_space(a, b);
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
  return Element(a.space(), std::move(c));
}

inline Element operator*(double s, const Element& a) {
  std::vector<double> c(a.coords().begin(), a.coords().end());
  for (double& v : c) v *= s;
  return Element(a.space(), std::move(c));
}

inline Element operator-(const Element& a) { return -1.0 * a; }

inline double max_abs_difference(const Element& a, const Element& b) {
  detail::require_same_space(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace latmax
