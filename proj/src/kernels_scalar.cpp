#include "purify/kernels.hpp"
#include "purify/kernels_ref.hpp"

namespace purify::kernels {

namespace {

void scalar_mul4(const C64* a, const C64* b, C64* c) { ref_mul<double>(a, b, c, 4); }
void scalar_mul16(const C64* a, const C64* b, C64* c) { ref_mul<double>(a, b, c, 16); }
void scalar_branch_blocks(const C64* e, const C64* rho, double* p, C64* bout) {
  ref_branch_blocks<double>(e, rho, p, bout);
}

const KernelTable kScalar{scalar_mul4, scalar_mul16, scalar_branch_blocks, "scalar"};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace purify::kernels
