#include "mcflab/kernels.hpp"

#if defined(MCFLAB_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace mcflab::kernels {
namespace {

inline double hsum(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return (t[0] + t[1]) + (t[2] + t[3]);
}

inline double hmax(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return std::fmax(std::fmax(t[0], t[1]), std::fmax(t[2], t[3]));
}

// exp for x <= 0, Cody-Waite reduction and a degree-13 Taylor polynomial.
inline __m256d exp_nonpos(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lo);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(6.93145751953125e-1)));
  r = _mm256_sub_pd(r, _mm256_mul_pd(n, _mm256_set1_pd(1.42860682030941723212e-6)));
  static constexpr double c[] = {1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0,
                                 1.0 / 3628800.0,    1.0 / 362880.0,    1.0 / 40320.0,
                                 1.0 / 5040.0,       1.0 / 720.0,       1.0 / 120.0,
                                 1.0 / 24.0,         1.0 / 6.0,         0.5,
                                 1.0,                1.0};
  __m256d p = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(c[i]));
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                _mm256_castpd_si256(magic));
  ni = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  const __m256d res = _mm256_mul_pd(p, _mm256_castsi256_pd(ni));
  return _mm256_blendv_pd(res, _mm256_setzero_pd(), under);
}

void menger(const double* ax, const double* ay, const double* bx, const double* by,
            const double* cx, const double* cy, std::size_t n, double* k) {
  const __m256d tol = _mm256_set1_pd(kCollinearTol);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d Ax = _mm256_loadu_pd(ax + i), Ay = _mm256_loadu_pd(ay + i);
    const __m256d Bx = _mm256_loadu_pd(bx + i), By = _mm256_loadu_pd(by + i);
    const __m256d Cx = _mm256_loadu_pd(cx + i), Cy = _mm256_loadu_pd(cy + i);
    const __m256d e1x = _mm256_sub_pd(Bx, Ax), e1y = _mm256_sub_pd(By, Ay);
    const __m256d e2x = _mm256_sub_pd(Cx, Bx), e2y = _mm256_sub_pd(Cy, By);
    const __m256d e3x = _mm256_sub_pd(Cx, Ax), e3y = _mm256_sub_pd(Cy, Ay);
    const __m256d cr = _mm256_sub_pd(_mm256_mul_pd(e1x, e2y), _mm256_mul_pd(e1y, e2x));
    const __m256d l1 = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(e1x, e1x), _mm256_mul_pd(e1y, e1y)));
    const __m256d l2 = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(e2x, e2x), _mm256_mul_pd(e2y, e2y)));
    const __m256d l3 = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(e3x, e3x), _mm256_mul_pd(e3y, e3y)));
    const __m256d l12 = _mm256_mul_pd(l1, l2);
    const __m256d den = _mm256_mul_pd(l12, l3);
    const __m256d flat = _mm256_or_pd(
        _mm256_cmp_pd(_mm256_and_pd(cr, absmask), _mm256_mul_pd(tol, l12), _CMP_LE_OQ),
        _mm256_cmp_pd(den, zero, _CMP_EQ_OQ));
    const __m256d q = _mm256_div_pd(_mm256_mul_pd(two, cr), den);
    _mm256_storeu_pd(k + i, _mm256_blendv_pd(q, zero, flat));
  }
  if (i < n) scalar_table().menger(ax + i, ay + i, bx + i, by + i, cx + i, cy + i, n - i, k + i);
}

GaussianSums gaussian(const Samples& s, double x0, double y0, double inv4tau,
                      double half_inv_tau) {
  const __m256d X0 = _mm256_set1_pd(x0), Y0 = _mm256_set1_pd(y0);
  const __m256d I4 = _mm256_set1_pd(inv4tau), HI = _mm256_set1_pd(half_inv_tau);
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d mass = _mm256_setzero_pd(), res = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= s.n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(s.px + i), X0);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(s.py + i), Y0);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d e = exp_nonpos(_mm256_xor_pd(_mm256_mul_pd(d2, I4), sign));
    const __m256d dn = _mm256_add_pd(_mm256_mul_pd(dx, _mm256_loadu_pd(s.nx + i)),
                                     _mm256_mul_pd(dy, _mm256_loadu_pd(s.ny + i)));
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(s.h + i), _mm256_mul_pd(dn, HI));
    const __m256d we = _mm256_mul_pd(_mm256_loadu_pd(s.w + i), e);
    mass = _mm256_add_pd(mass, we);
    res = _mm256_add_pd(res, _mm256_mul_pd(we, _mm256_mul_pd(r, r)));
  }
  GaussianSums out{hsum(mass), hsum(res)};
  if (i < s.n) {
    Samples tail{s.px + i, s.py + i, s.nx + i, s.ny + i, s.h + i, s.w + i, s.n - i};
    const GaussianSums t = scalar_table().gaussian(tail, x0, y0, inv4tau, half_inv_tau);
    out.mass += t.mass;
    out.residual += t.residual;
  }
  return out;
}

MomentSums moments(const Samples& s, double cx, double cy) {
  const __m256d CX = _mm256_set1_pd(cx), CY = _mm256_set1_pd(cy);
  __m256d hd = _mm256_setzero_pd(), dd = _mm256_setzero_pd(), hh = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= s.n; i += 4) {
    const __m256d d = _mm256_add_pd(
        _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(s.px + i), CX), _mm256_loadu_pd(s.nx + i)),
        _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(s.py + i), CY), _mm256_loadu_pd(s.ny + i)));
    const __m256d h = _mm256_loadu_pd(s.h + i), w = _mm256_loadu_pd(s.w + i);
    hd = _mm256_add_pd(hd, _mm256_mul_pd(w, _mm256_mul_pd(h, d)));
    dd = _mm256_add_pd(dd, _mm256_mul_pd(w, _mm256_mul_pd(d, d)));
    hh = _mm256_add_pd(hh, _mm256_mul_pd(w, _mm256_mul_pd(h, h)));
  }
  MomentSums out{hsum(hd), hsum(dd), hsum(hh)};
  if (i < s.n) {
    Samples tail{s.px + i, s.py + i, s.nx + i, s.ny + i, s.h + i, s.w + i, s.n - i};
    const MomentSums t = scalar_table().moments(tail, cx, cy);
    out.hd += t.hd;
    out.dd += t.dd;
    out.hh += t.hh;
  }
  return out;
}

double arc_chord(const double* xs, const double* ys, const double* arc, std::size_t n,
                 double total, bool closed, std::size_t i) {
  if (i + 1 >= n) return 0.0;
  const __m256d XI = _mm256_set1_pd(xs[i]), YI = _mm256_set1_pd(ys[i]);
  const __m256d AI = _mm256_set1_pd(arc[i]), TOT = _mm256_set1_pd(total);
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256d zero = _mm256_setzero_pd();
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d best = zero;
  std::size_t j = i + 1;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), XI);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), YI);
    const __m256d chord = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    __m256d a = _mm256_and_pd(_mm256_sub_pd(_mm256_loadu_pd(arc + j), AI), absmask);
    if (closed) a = _mm256_min_pd(a, _mm256_sub_pd(TOT, a));
    const __m256d q = _mm256_blendv_pd(_mm256_div_pd(a, chord), inf,
                                       _mm256_cmp_pd(chord, zero, _CMP_LE_OQ));
    best = _mm256_max_pd(best, q);
  }
  double b = hmax(best);
  if (j < n) {
    // tail: reuse the scalar loop starting from a shifted origin
    for (; j < n; ++j) {
      const double dx = xs[j] - xs[i], dy = ys[j] - ys[i];
      const double chord = std::sqrt(dx * dx + dy * dy);
      double a = std::fabs(arc[j] - arc[i]);
      if (closed) a = std::fmin(a, total - a);
      const double q = chord > 0.0 ? a / chord : std::numeric_limits<double>::infinity();
      b = std::fmax(b, q);
    }
  }
  return b;
}

const Table kAvx2{menger, gaussian, moments, arc_chord};

}  // namespace

const Table* avx2_table() {
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok ? &kAvx2 : nullptr;
}

}  // namespace mcflab::kernels

#else

namespace mcflab::kernels {
const Table* avx2_table() { return nullptr; }
}  // namespace mcflab::kernels

#endif
