#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace latmax {

enum class ConstantName { basis, bibasis, absolute, quasi_greedy, uniform_quasi_greedy, kvee };

enum class SearchTag { exhaustive_signs, structured_family, random_ascent };

/// A certified lower bound for one of the lattice constants, together with
/// the coefficient vector that attains it. For kvee the witness is read
/// along `order`; for the greedy constants `m` is the number of greedy terms.
struct ConstantReport {
  ConstantName constant = ConstantName::basis;
  double value = 0.0;
  std::vector<double> witness;
  SearchTag search = SearchTag::structured_family;
  std::size_t budget = 0;
  std::vector<std::size_t> order;
  std::size_t m = 0;
  bool exhaustive = false;
};

inline std::string_view to_string(ConstantName c) {
  switch (c) {
    case ConstantName::basis: return "basis";
    case ConstantName::bibasis: return "bibasis";
    case ConstantName::absolute: return "absolute";
    case ConstantName::quasi_greedy: return "quasi_greedy";
    case ConstantName::uniform_quasi_greedy: return "uniform_quasi_greedy";
    case ConstantName::kvee: return "kvee";
  }
  return "?";
}

inline std::string_view to_string(SearchTag s) {
  switch (s) {
    case SearchTag::exhaustive_signs: return "exhaustive_signs";
    case SearchTag::structured_family: return "structured_family";
    case SearchTag::random_ascent: return "random_ascent";
  }
  return "?";
}

inline std::optional<ConstantName> constant_from_string(std::string_view s) {
  for (auto c : {ConstantName::basis, ConstantName::bibasis, ConstantName::absolute,
                 ConstantName::quasi_greedy, ConstantName::uniform_quasi_greedy, ConstantName::kvee}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

inline std::optional<SearchTag> search_from_string(std::string_view s) {
  for (auto t : {SearchTag::exhaustive_signs, SearchTag::structured_family, SearchTag::random_ascent}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

}  // namespace latmax
