// j!/n^j K_j(n(1-u)/2) approaches u^j as n grows.

#include <cstdio>

#include "dlp/dlp.hpp"

int main() {
  const dlp::Rational u(1, 2);
  std::printf("%6s %4s %14s %14s\n", "n", "j", "error", "n*error");
  for (unsigned j = 1; j <= 4; ++j)
    for (unsigned n = 100; n <= 3200; n *= 2) {
      auto s = dlp::hamming::limit_probe(j, u, n);
      std::printf("%6u %4u %14.3e %14.6f\n", n, j, s.error.to_double(), (s.error * dlp::Rational(static_cast<long>(n))).to_double());
    }
}
