// Walks the Lindenstrauss witnesses y_1..y_N: each has l_1 norm 2 while the
// join of their moduli grows like N + 1.

#include <cstdlib>
#include <iostream>

#include "latmax/latmax.hpp"

int main(int argc, char** argv) {
  const unsigned N = argc > 1 ? static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10)) : 6;
  if (N < 1 || N > 20) {
    std::cerr << "usage: lindenstrauss_demo [N in 1..20]\n";
    return 2;
  }
  const std::size_t n = latmax::lindenstrauss_min_length(N);
  const auto sys = latmax::lindenstrauss(n);
  std::vector<double> join(sys.dim(), 0.0);
  std::cout << "n = " << n << " vectors in l_1^" << sys.dim() << "\n";
  std::cout << "m  ||y_m||  ||join||  bibasis  uqg\n";
  for (unsigned m = 1; m <= N; ++m) {
    const auto a = latmax::lindenstrauss_y_coefficients(m, n);
    const auto y = sys.span_vector(a);
    for (std::size_t i = 0; i < join.size(); ++i) join[i] = std::max(join[i], std::abs(y[i]));
    std::cout << m << "  " << latmax::norm(y) << "  " << latmax::norm(sys.space(), join) << "  "
              << latmax::bibasis_ratio(sys, a) << "  " << latmax::uqg_ratio(sys, a) << "\n";
  }
  std::cout << "final join norm " << latmax::norm(sys.space(), join) << "\n";
}
