#include "epkit/kernels.hpp"

#include <cstdlib>
#include <string>

namespace epkit::kernels {

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{Backend::Scalar, scalar::dotc, scalar::dotu, scalar::axpy,
                                 scalar::scal,    scalar::rot,  scalar::norm_sq};
  return table;
}

const KernelTable* avx2_table() noexcept {
  static const KernelTable table{Backend::Avx2, avx2::dotc, avx2::dotu, avx2::axpy,
                                 avx2::scal,    avx2::rot,  avx2::norm_sq};
  return avx2::available() ? &table : nullptr;
}

namespace {

const KernelTable& select() noexcept {
  if (const char* env = std::getenv("EPKIT_KERNELS"); env != nullptr && std::string(env) == "scalar") {
    return scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace epkit::kernels
