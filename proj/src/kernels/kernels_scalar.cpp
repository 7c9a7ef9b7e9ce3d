#include <cmath>
#include <cstdint>

#include "hnc/kernels.hpp"

namespace hnc::kernels {
namespace {

double min_sep_slack_scalar(const double* x, const double* r,
                            const std::uint16_t* idx, int cnt,
                            const double* mid, const double* ehat, int d,
                            double rad_coeff) {
  double best = HUGE_VAL;
  for (int t = 0; t < cnt; ++t) {
    const double* p = x + std::size_t(idx[t]) * d;
    double acc = (p[0] - mid[0]) * ehat[0];
    for (int k = 1; k < d; ++k) acc += (p[k] - mid[k]) * ehat[k];
    acc -= rad_coeff * r[idx[t]];
    if (acc < best) best = acc;
  }
  return best;
}

double min_pair_align_scalar(const double* x, const double* y, const double* r,
                             const std::uint16_t* a, int na,
                             const std::uint16_t* b, int nb, int d) {
  double best = HUGE_VAL;
  for (int s = 0; s < na; ++s) {
    const double* xi = x + std::size_t(a[s]) * d;
    const double* yi = y + std::size_t(a[s]) * d;
    const double ri = r[a[s]];
    for (int t = 0; t < nb; ++t) {
      const double* xj = x + std::size_t(b[t]) * d;
      const double* yj = y + std::size_t(b[t]) * d;
      double acc = (xi[0] - xj[0]) * (yi[0] - yj[0]);
      for (int k = 1; k < d; ++k) acc += (xi[k] - xj[k]) * (yi[k] - yj[k]);
      const double rr = ri + r[b[t]];
      acc -= rr * rr;
      if (acc < best) best = acc;
    }
  }
  return best;
}

double min_clearance_scalar(const double* x, const double* r, int n, int d,
                            int* out_i, int* out_j) {
  double best = HUGE_VAL;
  int bi = -1, bj = -1;
  for (int i = 0; i < n; ++i) {
    const double* xi = x + std::size_t(i) * d;
    for (int j = i + 1; j < n; ++j) {
      const double* xj = x + std::size_t(j) * d;
      double acc = (xi[0] - xj[0]) * (xi[0] - xj[0]);
      for (int k = 1; k < d; ++k) acc += (xi[k] - xj[k]) * (xi[k] - xj[k]);
      double c = std::sqrt(acc) - r[i] - r[j];
      if (c < best) {
        best = c;
        bi = i;
        bj = j;
      }
    }
  }
  if (out_i) *out_i = bi;
  if (out_j) *out_j = bj;
  return best;
}

void rk4_combine_scalar(double* x, const double* x0, const double* k1,
                        const double* k2, const double* k3, const double* k4,
                        double h, std::size_t m) {
  const double c = h / 6.0;
  for (std::size_t i = 0; i < m; ++i) {
    double t = k1[i] + 2.0 * k2[i];
    t += 2.0 * k3[i];
    t += k4[i];
    x[i] = x0[i] + c * t;
  }
}

}  // namespace

const Kernels& scalar() {
  static const Kernels k{"scalar", &min_sep_slack_scalar,
                         &min_pair_align_scalar, &min_clearance_scalar,
                         &rk4_combine_scalar};
  return k;
}

}  // namespace hnc::kernels
