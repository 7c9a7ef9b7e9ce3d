#pragma once

#include <cstddef>
#include <cstdint>

namespace hnc::kernels {

// Data-parallel inner loops behind the geometry predicates and the
// integrator. Each entry has a scalar reference implementation and an AVX2
// variant selected once at startup; variants are written so that every
// element sees the same sequence of floating-point operations (no FMA
// contraction), making scalar and SIMD results bitwise identical.
struct Kernels {
  const char* name;

  // min over k in idx[0..cnt) of dot(x_k - mid, ehat) - rad_coeff * r[k].
  // x is row-major n x d, idx holds label indices.
  double (*min_sep_slack)(const double* x, const double* r,
                          const std::uint16_t* idx, int cnt, const double* mid,
                          const double* ehat, int d, double rad_coeff);

  // min over (i in a, j in b) of dot(x_i - x_j, y_i - y_j) - (r_i + r_j)^2.
  double (*min_pair_align)(const double* x, const double* y, const double* r,
                           const std::uint16_t* a, int na,
                           const std::uint16_t* b, int nb, int d);

  // min over all pairs i < j of (||x_i - x_j|| - r_i - r_j); the attaining
  // pair is written to *out_i/*out_j when non-null.
  double (*min_clearance)(const double* x, const double* r, int n, int d,
                          int* out_i, int* out_j);

  // x[i] = x0[i] + (h/6) * (k1[i] + 2 k2[i] + 2 k3[i] + k4[i]).
  void (*rk4_combine)(double* x, const double* x0, const double* k1,
                      const double* k2, const double* k3, const double* k4,
                      double h, std::size_t m);
};

const Kernels& scalar();
bool avx2_available();
// AVX2 table when compiled in and supported by the CPU, otherwise scalar.
const Kernels& avx2_or_scalar();
// Runtime-selected table, resolved once.
const Kernels& active();

}  // namespace hnc::kernels
