#include "mcflab/kernels.hpp"

#include <cmath>
#include <limits>

namespace mcflab::kernels {
namespace {

void menger(const double* ax, const double* ay, const double* bx, const double* by,
            const double* cx, const double* cy, std::size_t n, double* k) {
  for (std::size_t i = 0; i < n; ++i) {
    const double e1x = bx[i] - ax[i], e1y = by[i] - ay[i];
    const double e2x = cx[i] - bx[i], e2y = cy[i] - by[i];
    const double e3x = cx[i] - ax[i], e3y = cy[i] - ay[i];
    const double cr = e1x * e2y - e1y * e2x;
    const double l1 = std::sqrt(e1x * e1x + e1y * e1y);
    const double l2 = std::sqrt(e2x * e2x + e2y * e2y);
    const double l3 = std::sqrt(e3x * e3x + e3y * e3y);
    const double den = (l1 * l2) * l3;
    if (std::fabs(cr) <= kCollinearTol * (l1 * l2) || den == 0.0)
      k[i] = 0.0;
    else
      k[i] = (2.0 * cr) / den;
  }
}

GaussianSums gaussian(const Samples& s, double x0, double y0, double inv4tau,
                      double half_inv_tau) {
  GaussianSums out;
  for (std::size_t i = 0; i < s.n; ++i) {
    const double dx = s.px[i] - x0, dy = s.py[i] - y0;
    const double d2 = dx * dx + dy * dy;
    const double e = std::exp(-(d2 * inv4tau));
    const double dn = dx * s.nx[i] + dy * s.ny[i];
    const double r = s.h[i] + dn * half_inv_tau;
    const double we = s.w[i] * e;
    out.mass += we;
    out.residual += we * (r * r);
  }
  return out;
}

MomentSums moments(const Samples& s, double cx, double cy) {
  MomentSums out;
  for (std::size_t i = 0; i < s.n; ++i) {
    const double d = (s.px[i] - cx) * s.nx[i] + (s.py[i] - cy) * s.ny[i];
    const double h = s.h[i], w = s.w[i];
    out.hd += w * (h * d);
    out.dd += w * (d * d);
    out.hh += w * (h * h);
  }
  return out;
}

double arc_chord(const double* xs, const double* ys, const double* arc, std::size_t n,
                 double total, bool closed, std::size_t i) {
  double best = 0.0;
  for (std::size_t j = i + 1; j < n; ++j) {
    const double dx = xs[j] - xs[i], dy = ys[j] - ys[i];
    const double chord = std::sqrt(dx * dx + dy * dy);
    double a = std::fabs(arc[j] - arc[i]);
    if (closed) a = std::fmin(a, total - a);
    const double q = chord > 0.0 ? a / chord : std::numeric_limits<double>::infinity();
    best = std::fmax(best, q);
  }
  return best;
}

const Table kScalar{menger, gaussian, moments, arc_chord};

}  // namespace

const Table& scalar_table() { return kScalar; }

}  // namespace mcflab::kernels
