// AVX2 variants of the scalar kernels. This translation unit is compiled with
// -mavx2 (and fp-contract off); whether it is used is decided at runtime by
// the dispatcher. Lanes replay the scalar per-element operation sequence
// exactly (mul/add, no FMA), so results match the scalar kernels bitwise.

#include "hnc/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace hnc::kernels {
namespace {

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_min_pd(lo, hi);
  m = _mm_min_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

inline __m256d gather_strided(const double* base, const std::uint16_t* idx,
                              int t, int d, int off) {
  return _mm256_set_pd(base[std::size_t(idx[t + 3]) * d + off],
                       base[std::size_t(idx[t + 2]) * d + off],
                       base[std::size_t(idx[t + 1]) * d + off],
                       base[std::size_t(idx[t + 0]) * d + off]);
}

double min_sep_slack_avx2(const double* x, const double* r,
                          const std::uint16_t* idx, int cnt, const double* mid,
                          const double* ehat, int d, double rad_coeff) {
  if (d != 2 && d != 3) {
    return scalar().min_sep_slack(x, r, idx, cnt, mid, ehat, d, rad_coeff);
  }
  __m256d best = _mm256_set1_pd(HUGE_VAL);
  const __m256d radc = _mm256_set1_pd(rad_coeff);
  int t = 0;
  for (; t + 4 <= cnt; t += 4) {
    __m256d acc = _mm256_mul_pd(
        _mm256_sub_pd(gather_strided(x, idx, t, d, 0), _mm256_set1_pd(mid[0])),
        _mm256_set1_pd(ehat[0]));
    for (int k = 1; k < d; ++k) {
      acc = _mm256_add_pd(
          acc, _mm256_mul_pd(_mm256_sub_pd(gather_strided(x, idx, t, d, k),
                                           _mm256_set1_pd(mid[k])),
                             _mm256_set1_pd(ehat[k])));
    }
    __m256d rv = _mm256_set_pd(r[idx[t + 3]], r[idx[t + 2]], r[idx[t + 1]],
                               r[idx[t + 0]]);
    acc = _mm256_sub_pd(acc, _mm256_mul_pd(radc, rv));
    best = _mm256_min_pd(best, acc);
  }
  double out = hmin(best);
  for (; t < cnt; ++t) {
    const double* p = x + std::size_t(idx[t]) * d;
    double acc = (p[0] - mid[0]) * ehat[0];
    for (int k = 1; k < d; ++k) acc += (p[k] - mid[k]) * ehat[k];
    acc -= rad_coeff * r[idx[t]];
    if (acc < out) out = acc;
  }
  return out;
}

double min_pair_align_avx2(const double* x, const double* y, const double* r,
                           const std::uint16_t* a, int na,
                           const std::uint16_t* b, int nb, int d) {
  if (d != 2 && d != 3) {
    return scalar().min_pair_align(x, y, r, a, na, b, nb, d);
  }
  __m256d best = _mm256_set1_pd(HUGE_VAL);
  double out = HUGE_VAL;
  for (int s = 0; s < na; ++s) {
    const double* xi = x + std::size_t(a[s]) * d;
    const double* yi = y + std::size_t(a[s]) * d;
    const double ri = r[a[s]];
    const __m256d riv = _mm256_set1_pd(ri);
    int t = 0;
    for (; t + 4 <= nb; t += 4) {
      __m256d acc = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_set1_pd(xi[0]), gather_strided(x, b, t, d, 0)),
          _mm256_sub_pd(_mm256_set1_pd(yi[0]), gather_strided(y, b, t, d, 0)));
      for (int k = 1; k < d; ++k) {
        acc = _mm256_add_pd(
            acc, _mm256_mul_pd(_mm256_sub_pd(_mm256_set1_pd(xi[k]),
                                             gather_strided(x, b, t, d, k)),
                               _mm256_sub_pd(_mm256_set1_pd(yi[k]),
                                             gather_strided(y, b, t, d, k))));
      }
      __m256d rj = _mm256_set_pd(r[b[t + 3]], r[b[t + 2]], r[b[t + 1]],
                                 r[b[t + 0]]);
      __m256d rr = _mm256_add_pd(riv, rj);
      acc = _mm256_sub_pd(acc, _mm256_mul_pd(rr, rr));
      best = _mm256_min_pd(best, acc);
    }
    for (; t < nb; ++t) {
      const double* xj = x + std::size_t(b[t]) * d;
      const double* yj = y + std::size_t(b[t]) * d;
      double acc = (xi[0] - xj[0]) * (yi[0] - yj[0]);
      for (int k = 1; k < d; ++k) acc += (xi[k] - xj[k]) * (yi[k] - yj[k]);
      const double rr = ri + r[b[t]];
      acc -= rr * rr;
      if (acc < out) out = acc;
    }
  }
  double v = hmin(best);
  return v < out ? v : out;
}

double min_clearance_avx2(const double* x, const double* r, int n, int d,
                          int* out_i, int* out_j) {
  if (d != 2 && d != 3) {
    return scalar().min_clearance(x, r, n, d, out_i, out_j);
  }
  double best = HUGE_VAL;
  int bi = -1, bj = -1;
  alignas(32) double lane[4];
  for (int i = 0; i < n; ++i) {
    const double* xi = x + std::size_t(i) * d;
    int j = i + 1;
    for (; j + 4 <= n; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int k = 0; k < d; ++k) {
        __m256d xj = _mm256_set_pd(x[std::size_t(j + 3) * d + k],
                                   x[std::size_t(j + 2) * d + k],
                                   x[std::size_t(j + 1) * d + k],
                                   x[std::size_t(j + 0) * d + k]);
        __m256d dk = _mm256_sub_pd(_mm256_set1_pd(xi[k]), xj);
        __m256d sq = _mm256_mul_pd(dk, dk);
        acc = k == 0 ? sq : _mm256_add_pd(acc, sq);
      }
      __m256d rj = _mm256_set_pd(r[j + 3], r[j + 2], r[j + 1], r[j + 0]);
      __m256d c = _mm256_sub_pd(
          _mm256_sub_pd(_mm256_sqrt_pd(acc), _mm256_set1_pd(r[i])), rj);
      _mm256_store_pd(lane, c);
      for (int k = 0; k < 4; ++k) {
        if (lane[k] < best) {
          best = lane[k];
          bi = i;
          bj = j + k;
        }
      }
    }
    for (; j < n; ++j) {
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

void rk4_combine_avx2(double* x, const double* x0, const double* k1,
                      const double* k2, const double* k3, const double* k4,
                      double h, std::size_t m) {
  const double c = h / 6.0;
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    __m256d t = _mm256_add_pd(_mm256_loadu_pd(k1 + i),
                              _mm256_mul_pd(two, _mm256_loadu_pd(k2 + i)));
    t = _mm256_add_pd(t, _mm256_mul_pd(two, _mm256_loadu_pd(k3 + i)));
    t = _mm256_add_pd(t, _mm256_loadu_pd(k4 + i));
    _mm256_storeu_pd(x + i,
                     _mm256_add_pd(_mm256_loadu_pd(x0 + i),
                                   _mm256_mul_pd(cv, t)));
  }
  for (; i < m; ++i) {
    double t = k1[i] + 2.0 * k2[i];
    t += 2.0 * k3[i];
    t += k4[i];
    x[i] = x0[i] + c * t;
  }
}

}  // namespace

const Kernels* avx2_table() {
  static const Kernels k{"avx2", &min_sep_slack_avx2, &min_pair_align_avx2,
                         &min_clearance_avx2, &rk4_combine_avx2};
  return &k;
}

}  // namespace hnc::kernels

#else

namespace hnc::kernels {
const Kernels* avx2_table() { return nullptr; }
}  // namespace hnc::kernels

#endif  // __AVX2__
