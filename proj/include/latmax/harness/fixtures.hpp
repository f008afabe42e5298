#pragma once

// Witness vectors of the constructions as lattice elements, for export as
// JSON fixtures.

#include <cmath>
#include <string>
#include <vector>

#include "latmax/harness/config.hpp"
#include "latmax/io/json.hpp"
#include "latmax/latmax.hpp"

namespace latmax::harness {

struct FixtureInfo {
  std::string id;
  std::string description;
  std::vector<ParamSpec> params;
};

inline const std::vector<FixtureInfo>& fixture_catalog() {
  static const std::vector<FixtureInfo> entries = {
      {"hadamard-mixed", "sum of the Hadamard-mixed vectors u_1..u_{2^n}", {{"n", "3", "order"}}},
      {"haar", "branch witness in the Haar system", {{"J", "4", "resolution"}, {"p", "2", "L_p exponent"}}},
      {"lindenstrauss", "witness y_m in l_1", {{"m", "3", "witness index"}, {"n", "0", "system length (0: smallest)"}}},
      {"rademacher-l1", "sum of the first n Rademacher functions", {{"n", "4", "number of functions"}}},
      {"triangular", "sum of the v-vectors of the triangular basis", {{"n", "8", "size"}, {"p", "2", "exponent"}}},
      {"typewriter", "expansion of the constant function 1 in the frame", {{"J", "3", "resolution"}, {"p", "2", "L_p exponent"}}},
  };
  return entries;
}

inline Element make_fixture(const std::string& id, const std::map<std::string, std::string>& given) {
  const FixtureInfo* info = nullptr;
  for (const auto& f : fixture_catalog())
    if (f.id == id) info = &f;
  if (!info) throw UsageError("unknown fixture '" + id + "'");
  const Params ps(info->params, given);
  if (id == "hadamard-mixed") {
    const auto n = static_cast<unsigned>(ps.integer_in("n", 1, kHadamardDenseOrder));
    return hadamard_mixed(n).witness.vector("sign_sum_plus");
  }
  if (id == "haar") {
    const auto J = static_cast<unsigned>(ps.integer_in("J", 1, kHaarMaxResolution));
    const auto sys = haar_system(J, ps.real("p"));
    return sys.span_vector(branch_witness(J, ps.real("p")));
  }
  if (id == "lindenstrauss") {
    const auto m = static_cast<unsigned>(ps.integer_in("m", 0, 20));
    auto n = static_cast<std::size_t>(ps.integer_in("n", 0, 1 << 24));
    if (n == 0) n = std::max<std::size_t>(1, lindenstrauss_min_length(m));
    return lindenstrauss_witness(m, n).vector("y" + std::to_string(m));
  }
  if (id == "rademacher-l1") {
    const auto n = static_cast<unsigned>(ps.integer_in("n", 1, kRademacherMaxOrder));
    return rademacher_l1(n).span_vector(std::vector<double>(n, 1.0));
  }
  if (id == "triangular") {
    const auto n = static_cast<std::size_t>(ps.integer_in("n", 1, kTriangularDenseLimit));
    return triangular_basis(n, ps.real("p")).witness.vector("x");
  }
  const auto J = static_cast<unsigned>(ps.integer_in("J", 1, kTypewriterMaxResolution));
  const auto frame = typewriter_frame(J, ps.real("p"));
  return Element(frame.system.space(), std::vector<double>(frame.system.dim(), 1.0));
}

}  // namespace latmax::harness
