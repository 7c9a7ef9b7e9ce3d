#include "hnc/kernels.hpp"

namespace hnc::kernels {

const Kernels* avx2_table();  // defined in kernels_avx2.cpp

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && avx2_table() != nullptr;
#else
  return false;
#endif
}

const Kernels& avx2_or_scalar() {
  return avx2_available() ? *avx2_table() : scalar();
}

const Kernels& active() {
  static const Kernels& k = avx2_or_scalar();
  return k;
}

}  // namespace hnc::kernels
