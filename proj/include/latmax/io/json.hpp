#pragma once

// JSON forms of spaces, elements, constant reports and growth fits.

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "latmax/estimation.hpp"
#include "latmax/lattice.hpp"
#include "latmax/report.hpp"

namespace latmax {

using json = nlohmann::json;

namespace detail {
inline json exponent_to_json(double p) { return std::isinf(p) ? json("inf") : json(p); }

inline double exponent_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinity;
    throw StructuralError("exponent must be a number or \"inf\"");
  }
  return j.get<double>();
}
}  // namespace detail

inline json to_json(const Space& s) {
  switch (s.kind()) {
    case Space::Kind::lp_block: {
      json j{{"kind", "lp"}, {"dim", s.dim()}, {"p", detail::exponent_to_json(s.p())}};
      j["weights"] = std::vector<double>(s.weights().begin(), s.weights().end());
      return j;
    }
    case Space::Kind::sup_block:
      return json{{"kind", "sup"}, {"dim", s.dim()}};
    case Space::Kind::direct_sum: {
      json parts = json::array();
      for (const auto& part : s.parts()) parts.push_back(to_json(part));
      return json{{"kind", "sum"}, {"p", detail::exponent_to_json(s.p())}, {"parts", parts}};
    }
  }
  return {};
}

inline Space space_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "lp") {
    const double p = detail::exponent_from_json(j.at("p"));
    if (j.contains("weights")) {
      auto w = j.at("weights").get<std::vector<double>>();
      if (j.contains("dim") && j.at("dim").get<std::size_t>() != w.size())
        throw StructuralError("lp block weights disagree with dim");
      return Space::lp(std::move(w), p);
    }
    return Space::lp(j.at("dim").get<std::size_t>(), p);
  }
  if (kind == "sup") return Space::sup(j.at("dim").get<std::size_t>());
  if (kind == "sum") {
    std::vector<Space> parts;
    for (const auto& part : j.at("parts")) parts.push_back(space_from_json(part));
    return Space::direct_sum(detail::exponent_from_json(j.at("p")), std::move(parts));
  }
  throw StructuralError("unknown space kind " + kind);
}

inline json to_json(const Element& e) {
  return json{{"space", to_json(e.space())}, {"coords", std::vector<double>(e.coords().begin(), e.coords().end())}};
}

inline Element element_from_json(const json& j) {
  return Element(space_from_json(j.at("space")), j.at("coords").get<std::vector<double>>());
}

inline json to_json(const ConstantReport& r) {
  json j{{"constant", std::string(to_string(r.constant))},
         {"value", r.value},
         {"witness", r.witness},
         {"search", std::string(to_string(r.search))},
         {"budget", r.budget}};
  if (!r.order.empty()) j["order"] = r.order;
  if (r.m) j["m"] = r.m;
  if (r.exhaustive) j["exhaustive"] = true;
  return j;
}

inline ConstantReport report_from_json(const json& j) {
  ConstantReport r;
  const auto c = constant_from_string(j.at("constant").get<std::string>());
  const auto s = search_from_string(j.at("search").get<std::string>());
  if (!c || !s) throw StructuralError("unknown constant or search tag");
  r.constant = *c;
  r.search = *s;
  r.value = j.at("value").get<double>();
  r.witness = j.at("witness").get<std::vector<double>>();
  r.budget = j.at("budget").get<std::size_t>();
  if (j.contains("order")) r.order = j.at("order").get<std::vector<std::size_t>>();
  if (j.contains("m")) r.m = j.at("m").get<std::size_t>();
  if (j.contains("exhaustive")) r.exhaustive = j.at("exhaustive").get<bool>();
  return r;
}

inline json to_json(const GrowthFit& f) {
  json sample = json::array();
  for (const auto& [n, v] : f.sample) sample.push_back({n, v});
  return json{{"model", "c * n^a * (log n)^b"},
              {"c", f.c},
              {"a", f.a},
              {"b", f.b},
              {"b_fixed", f.b_fixed},
              {"residual", f.residual},
              {"sample", sample}};
}

}  // namespace latmax
