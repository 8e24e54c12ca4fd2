#include "mcflab/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcflab::graphgeom {

Mat identity(int d) {
  Mat a{};
  for (int i = 0; i < d; ++i) a[i][i] = 1.0;
  return a;
}

namespace {

Vec jacobi(Mat a, int d) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (int i = 0; i < d; ++i) {
      diag += a[i][i] * a[i][i];
      for (int j = i + 1; j < d; ++j) off += a[i][j] * a[i][j];
    }
    if (off <= 1e-34 * diag || off == 0.0) break;
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < d; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < d; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  Vec ev{};
  for (int i = 0; i < d; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.begin() + d);
  return ev;
}

}  // namespace

Vec sym_eigenvalues(const Mat& a, int d) {
  Vec ev{};
  if (d == 1) {
    ev[0] = a[0][0];
  } else if (d == 2) {
    const double mean = 0.5 * (a[0][0] + a[1][1]);
    const double rad = std::hypot(0.5 * (a[0][0] - a[1][1]), a[0][1]);
    ev[0] = mean - rad;
    ev[1] = mean + rad;
  } else {
    ev = jacobi(a, d);
  }
  return ev;
}

Mat spd_inverse(const Mat& a, int d) {
  Mat l{};
  for (int j = 0; j < d; ++j) {
    double s = a[j][j];
    for (int k = 0; k < j; ++k) s -= l[j][k] * l[j][k];
    if (!(s > 0.0)) throw std::domain_error("matrix is not positive definite");
    l[j][j] = std::sqrt(s);
    for (int i = j + 1; i < d; ++i) {
      double t = a[i][j];
      for (int k = 0; k < j; ++k) t -= l[i][k] * l[j][k];
      l[i][j] = t / l[j][j];
    }
  }
  // invert L, then inv(A) = inv(L)^T inv(L)
  Mat li{};
  for (int i = 0; i < d; ++i) {
    li[i][i] = 1.0 / l[i][i];
    for (int j = 0; j < i; ++j) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s += l[i][k] * li[k][j];
      li[i][j] = -s / l[i][i];
    }
  }
  Mat inv{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = i; k < d; ++k) s += li[k][i] * li[k][j];
      inv[i][j] = inv[j][i] = s;
    }
  return inv;
}

}  // namespace mcflab::graphgeom
