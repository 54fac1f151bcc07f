// PSD completion of a partial matrix before and after squaring its entries.

#include <iostream>

#include "dlp/dlp.hpp"

namespace {

void show(const char* label, const dlp::PartialSymMatrix& p) {
  auto r = dlp::psdcomp::complete_psd(p);
  std::cout << label << ": " << dlp::psdcomp::to_string(r.status) << "\n";
  if (r.status != dlp::psdcomp::CompletionStatus::Completable) return;
  for (std::size_t i = 0; i < r.witness.dim(); ++i) {
    std::cout << "  ";
    for (std::size_t j = 0; j < r.witness.dim(); ++j) std::cout << r.witness(i, j).str() << (j + 1 < r.witness.dim() ? "\t" : "\n");
  }
}

}  // namespace

int main() {
  dlp::PartialSymMatrix p(3);
  p.specify(0, 0, 1);
  p.specify(0, 2, -1);
  p.specify(1, 1, 2);
  p.specify(1, 2, 1);
  show("partial matrix", p);
  show("entrywise square", dlp::psdcomp::apply_entrywise(p, dlp::DensePoly(dlp::RationalVector{0, 0, 1})));
}
