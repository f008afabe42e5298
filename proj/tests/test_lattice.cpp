#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "latmax/harness/config.hpp"
#include "latmax/harness/table.hpp"
#include "latmax/io/json.hpp"
#include "latmax/latmax.hpp"

using namespace latmax;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Reference norm written out directly from the definition, recursing over the
// descriptor without the library's evaluator.
double reference_norm(const Space& s, const double* x) {
  switch (s.kind()) {
    case Space::Kind::sup_block: {
      double m = 0;
      for (std::size_t i = 0; i < s.dim(); ++i) m = std::max(m, std::abs(x[i]));
      return m;
    }
    case Space::Kind::lp_block: {
      double sum = 0;
      for (std::size_t i = 0; i < s.dim(); ++i) sum += s.weights()[i] * std::pow(std::abs(x[i]), s.p());
      return std::pow(sum, 1.0 / s.p());
    }
    case Space::Kind::direct_sum: {
      std::vector<double> parts;
      std::size_t off = 0;
      for (const auto& part : s.parts()) {
        parts.push_back(reference_norm(part, x + off));
        off += part.dim();
      }
      if (std::isinf(s.p())) return *std::max_element(parts.begin(), parts.end());
      double sum = 0;
      for (double v : parts) sum += std::pow(v, s.p());
      return std::pow(sum, 1.0 / s.p());
    }
  }
  return NAN;
}

Space random_space(Rng& rng, int depth = 0) {
  const std::size_t d = 1 + rng.below(4);
  switch (depth < 2 ? rng.below(3) : rng.below(2)) {
    case 0: {
      std::vector<double> w(d);
      for (double& v : w) v = rng.uniform(0.25, 3.0);
      static constexpr double ps[] = {1.0, 1.5, 2.0, 4.0};
      return Space::lp(std::move(w), ps[rng.below(4)]);
    }
    case 1: return Space::sup(d);
    default: {
      std::vector<Space> parts;
      for (std::size_t i = 0; i < 1 + rng.below(3); ++i) parts.push_back(random_space(rng, depth + 1));
      static constexpr double outer[] = {1.0, 2.0, 3.0, kInfinity};
      return Space::direct_sum(outer[rng.below(4)], std::move(parts));
    }
  }
}

Element random_element(Rng& rng, const Space& s, double scale = 1.0) {
  std::vector<double> c(s.dim());
  for (double& v : c) v = scale * rng.normal();
  return Element(s, std::move(c));
}

}  // namespace

TEST_CASE("norms of small hand examples", "[lattice]") {
  CHECK(norm(Element(Space::lp(3, 1.0), {1, -2, 3})) == 6.0);
  CHECK(norm(Element(Space::sup(3), {1, -2, 3})) == 3.0);
  const auto sum = Space::direct_sum(2.0, {Space::lp(2, 1.0), Space::lp(2, 1.0)});
  CHECK(norm(Element(sum, {3, 0, 0, 4})) == 5.0);
  CHECK_THAT(norm(Element(Space::lp(std::vector<double>{0.25, 0.25, 0.25, 0.25}, 2.0), {2, 2, 2, 2})),
             WithinAbs(2.0, 1e-15));
}

TEST_CASE("infinite exponent in an lp block becomes a sup block", "[lattice]") {
  const auto s = Space::lp(3, kInfinity);
  CHECK(s.kind() == Space::Kind::sup_block);
  CHECK(s == Space::sup(3));
}

TEST_CASE("malformed spaces and elements are rejected", "[lattice]") {
  CHECK_THROWS_AS(Space::lp(0, 2.0), StructuralError);
  CHECK_THROWS_AS(Space::lp(3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Space::lp(std::vector<double>{1.0, 0.0}, 2.0), StructuralError);
  CHECK_THROWS_AS(Space::lp(std::vector<double>{1.0, -1.0}, 2.0), StructuralError);
  CHECK_THROWS_AS(Space::direct_sum(2.0, {}), StructuralError);
  CHECK_THROWS_AS(Element(Space::sup(2), {1.0, 2.0, 3.0}), StructuralError);
  CHECK_THROWS_AS(Element(Space::sup(2), {1.0, NAN}), StructuralError);
  CHECK_THROWS_AS(Element(Space::sup(2), {INFINITY, 0.0}), StructuralError);
  CHECK_THROWS_AS(norm(Space::sup(2), std::vector<double>{1, 2, 3}), StructuralError);
}

TEST_CASE("direct sum dimension and offsets", "[lattice]") {
  const auto s = Space::direct_sum(1.0, {Space::sup(2), Space::lp(3, 2.0), Space::sup(1)});
  CHECK(s.dim() == 6);
  CHECK(s.part_offset(0) == 0);
  CHECK(s.part_offset(1) == 2);
  CHECK(s.part_offset(2) == 5);
}

TEST_CASE("dyadic L_p carries the measure in the weights", "[lattice]") {
  const auto s = Space::dyadic_lp(4, 3.0);
  CHECK(s.dim() == 16);
  for (double w : s.weights()) CHECK(w == 1.0 / 16);
  CHECK_THAT(norm(Element(s, std::vector<double>(16, 1.0))), WithinAbs(1.0, 1e-15));
}

TEST_CASE("abs and join", "[lattice]") {
  const auto s = Space::sup(3);
  const Element x(s, {1, -2, 0});
  CHECK(abs(x).coords()[1] == 2.0);
  CHECK(max_abs_difference(abs(x), Element(s, {1, 2, 0})) == 0.0);
  const Element a(Space::sup(2), {1, 0}), b(Space::sup(2), {0, 1});
  CHECK(max_abs_difference(join({a, b}), Element(Space::sup(2), {1, 1})) == 0.0);
  CHECK(max_abs_difference(join({x}), x) == 0.0);
  CHECK_THROWS_AS(join({a, Element(Space::sup(3), {0, 0, 0})}), StructuralError);
  CHECK_THROWS_AS(join(std::span<const Element>{}), StructuralError);
}

TEST_CASE("lattice norm properties on random spaces", "[lattice][property]") {
  Rng rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    const auto s = random_space(rng);
    const auto x = random_element(rng, s);
    const auto y = random_element(rng, s);
    const double nx = norm(x);
    REQUIRE_THAT(nx, WithinRel(reference_norm(s, x.coords().data()), 1e-12));
    CHECK(norm(abs(x)) == nx);
    CHECK(max_abs_difference(abs(abs(x)), abs(x)) == 0.0);
    CHECK(norm(x + y) <= nx + norm(y) + 1e-9);
    const double lambda = rng.uniform(-5, 5);
    CHECK_THAT(norm(lambda * x), WithinRel(std::abs(lambda) * nx, 1e-12));
    // |m| <= |x| coordinatewise implies norm(m) <= norm(x).
    const auto m = meet(abs(x), abs(y));
    CHECK(norm(m) <= nx + 1e-12);
    const auto j = join({abs(x), abs(y)});
    CHECK(dominated_by(abs(x), j));
    CHECK(max_abs_difference(join({x, y}), join({y, x})) == 0.0);
    const auto z = random_element(rng, s);
    CHECK(max_abs_difference(join({join({x, y}), z}), join({x, join({y, z})})) == 0.0);
    CHECK(max_abs_difference(join({x, x}), x) == 0.0);
  }
}

TEST_CASE("join over sign patterns equals the sum of moduli", "[lattice][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng.below(10);
    const auto s = Space::lp(5, 1.0);
    // Dyadic inputs keep every sum exact.
    std::vector<std::vector<double>> terms(m, std::vector<double>(5));
    for (auto& t : terms)
      for (double& v : t) v = static_cast<double>(static_cast<long>(rng.below(33)) - 16) / 8.0;
    std::vector<double> moduli(5, 0.0);
    for (const auto& t : terms)
      for (std::size_t i = 0; i < 5; ++i) moduli[i] += std::abs(t[i]);
    std::vector<Element> patterns;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      std::vector<double> c(5, 0.0);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < 5; ++i) c[i] += ((mask >> k) & 1u ? -1.0 : 1.0) * terms[k][i];
      patterns.push_back(abs(Element(s, std::move(c))));
    }
    CHECK(max_abs_difference(join(patterns), Element(s, moduli)) == 0.0);
  }
}

TEST_CASE("space and element json round trip", "[lattice][json]") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_space(rng);
    const auto x = random_element(rng, s);
    const auto j = to_json(x);
    const auto back = element_from_json(json::parse(j.dump()));
    CHECK(back.space() == s);
    CHECK(max_abs_difference(back, x) == 0.0);
  }
  const auto j = to_json(Space::direct_sum(kInfinity, {Space::sup(2), Space::lp(2, 2.0)}));
  CHECK(j["p"] == "inf");
  CHECK_THROWS(element_from_json(json::parse(R"({"space":{"kind":"sup","dim":2},"coords":[1]})")));
}

TEST_CASE("constant report json round trip", "[lattice][json]") {
  ConstantReport r;
  r.constant = ConstantName::kvee;
  r.value = 1.25;
  r.witness = {0.5, -1};
  r.search = SearchTag::random_ascent;
  r.budget = 17;
  r.order = {1, 0};
  r.m = 2;
  const auto j = to_json(r);
  CHECK(j["constant"] == "kvee");
  CHECK(j["search"] == "random_ascent");
  const auto back = report_from_json(j);
  CHECK(back.value == 1.25);
  CHECK(back.order == r.order);
  CHECK(back.budget == 17);
}

TEST_CASE("csv formatting is locale free and round trips doubles", "[harness]") {
  harness::Table t;
  t.columns = {"n", "value", "name"};
  t.add({std::int64_t{3}, 0.1, std::string("a,b")});
  t.add({std::int64_t{4}, 1e-300, std::monostate{}});
  const auto csv = harness::to_csv(t);
  CHECK(csv == "n,value,name\n3,0.1,\"a,b\"\n4,1e-300,\n");
  CHECK(std::stod(harness::format_double(2.0 / 3.0)) == 2.0 / 3.0);
}

TEST_CASE("config parsing", "[harness]") {
  const auto dir = std::filesystem::temp_directory_path() / "latmax_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "run.conf");
    f << "# comment\nexperiment = trace-dual\n  n = 64,128 \n";
  }
  const auto kv = harness::read_key_values(dir / "run.conf");
  CHECK(kv.at("experiment") == "trace-dual");
  CHECK(kv.at("n") == "64,128");
  {
    std::ofstream f(dir / "bad.conf");
    f << "no equals sign\n";
  }
  CHECK_THROWS_AS(harness::read_key_values(dir / "bad.conf"), harness::UsageError);

  const std::vector<harness::ParamSpec> schema{{"n", "1..4", ""}, {"p", "2", ""}};
  const harness::Params ps(schema, {{"p", "1.5"}});
  CHECK(ps.integers("n") == std::vector<std::int64_t>{1, 2, 3, 4});
  CHECK(ps.real("p") == 1.5);
  CHECK_THROWS_AS(harness::Params(schema, {{"q", "1"}}), harness::UsageError);
  CHECK_THROWS_AS(harness::Params(schema, {{"p", "x"}}).real("p"), harness::UsageError);
  CHECK(harness::split_assignment("a=b=c") == std::pair<std::string, std::string>{"a", "b=c"});
  CHECK_THROWS_AS(harness::split_assignment("=b"), harness::UsageError);
}
