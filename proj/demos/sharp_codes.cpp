// Stabilized Delsarte bounds and code searches for a few angle sets.

#include <iostream>

#include "dlp/dlp.hpp"

int main() {
  struct Case {
    int n;
    const char* angles;
  };
  for (auto [n, angles] : {Case{2, "-1/2"}, Case{3, "-1/2,1/2"}, Case{5, "-1/3,1/3"}, Case{10, "-1,-1/2,1/2"}}) {
    auto v = dlp::codes::hallucination_probe(n, dlp::codes::AngleSet::parse(angles));
    std::cout << "n=" << n << " X={" << angles << "}  bound=" << v.certificate.bound_raw->str()
              << "  outcome=" << dlp::codes::to_string(v.outcome) << "  nodes=" << v.nodes << "\n";
  }
}
