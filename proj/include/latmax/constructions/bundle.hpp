#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latmax/lattice.hpp"

namespace latmax {

enum class Provenance { exact, derived, bound };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::derived: return "derived";
    case Provenance::bound: return "bound";
  }
  return "?";
}

struct ExpectedValue {
  double value = 0.0;
  Provenance provenance = Provenance::exact;
  double tolerance = 1e-9;
  /// For Provenance::bound, the recomputed value must not exceed `value`.
  bool upper_bound = false;
};

/// Named vectors plus the values they are expected to reproduce.
struct WitnessBundle {
  std::vector<std::pair<std::string, Element>> vectors;
  std::map<std::string, ExpectedValue> expected;

  const Element& vector(const std::string& name) const {
    for (const auto& [n, e] : vectors)
      if (n == name) return e;
    throw std::out_of_range("no witness vector named " + name);
  }

  void add(std::string name, Element e) { vectors.emplace_back(std::move(name), std::move(e)); }

  void expect(const std::string& name, double value, Provenance p = Provenance::exact,
              double tolerance = 1e-9, bool upper_bound = false) {
    expected[name] = ExpectedValue{value, p, tolerance, upper_bound};
  }

  static bool matches(const ExpectedValue& e, double measured) {
    if (e.upper_bound) return measured <= e.value + e.tolerance;
    return std::abs(measured - e.value) <= e.tolerance;
  }
};

}  // namespace latmax
