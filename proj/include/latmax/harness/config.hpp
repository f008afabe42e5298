#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "latmax/estimation.hpp"

namespace latmax::harness {

/// Bad experiment id, parameter or option; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

inline std::optional<Format> format_from_string(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  return std::nullopt;
}

inline const char* to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string description;
};

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> params;
  std::filesystem::path output_dir = "latmax-out";
  Format format = Format::csv;
  std::uint64_t seed = kDefaultSeed;
};

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// `key = value` lines; blank lines and lines starting with '#' are skipped.
inline std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    out[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

/// Splits `k=v`.
inline std::pair<std::string, std::string> split_assignment(std::string_view s) {
  const auto eq = s.find('=');
  if (eq == std::string_view::npos || eq == 0) throw UsageError("expected k=v, got '" + std::string(s) + "'");
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw UsageError(std::string(what) + ": expected a nonnegative integer, got '" + std::string(s) + "'");
  return v;
}

/// Parameters resolved against a schema: defaults filled in, unknown keys rejected.
class Params {
 public:
  Params(const std::vector<ParamSpec>& schema, const std::map<std::string, std::string>& given) {
    for (const auto& spec : schema) values_[spec.name] = spec.default_value;
    for (const auto& [k, v] : given) {
      if (!values_.count(k)) throw UsageError("unknown parameter '" + k + "'");
      values_[k] = v;
    }
  }

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  std::int64_t integer(const std::string& name) const {
    const auto& s = values_.at(name);
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw UsageError("parameter " + name + ": expected an integer, got '" + s + "'");
    return v;
  }

  std::int64_t integer_in(const std::string& name, std::int64_t lo, std::int64_t hi) const {
    const auto v = integer(name);
    if (v < lo || v > hi)
      throw UsageError("parameter " + name + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  double real(const std::string& name) const {
    const auto& s = values_.at(name);
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
      throw UsageError("parameter " + name + ": expected a finite number, got '" + s + "'");
    return v;
  }

  /// Comma list `a,b,c` or inclusive range `a..b`.
  std::vector<std::int64_t> integers(const std::string& name) const {
    const auto& s = values_.at(name);
    std::vector<std::int64_t> out;
    const auto dots = s.find("..");
    auto parse = [&](std::string_view t) {
      std::int64_t v = 0;
      const auto tt = trim(t);
      const auto res = std::from_chars(tt.data(), tt.data() + tt.size(), v);
      if (tt.empty() || res.ec != std::errc() || res.ptr != tt.data() + tt.size())
        throw UsageError("parameter " + name + ": bad integer list '" + s + "'");
      return v;
    };
    if (dots != std::string::npos) {
      const auto a = parse(std::string_view(s).substr(0, dots));
      const auto b = parse(std::string_view(s).substr(dots + 2));
      if (b < a) throw UsageError("parameter " + name + ": empty range");
      for (auto v = a; v <= b; ++v) out.push_back(v);
      return out;
    }
    std::size_t start = 0;
    while (start <= s.size()) {
      const auto comma = s.find(',', start);
      out.push_back(parse(std::string_view(s).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace latmax::harness
