#pragma once

#include <cstddef>
#include <vector>

namespace mcflab::flow::detail {

// a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i with a_0 = c_{n-1} = 0; d is overwritten
inline void thomas(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c, std::vector<double>& d) {
  const std::size_t n = b.size();
  std::vector<double> cp(n);
  double den = b[0];
  cp[0] = c[0] / den;
  d[0] /= den;
  for (std::size_t i = 1; i < n; ++i) {
    den = b[i] - a[i] * cp[i - 1];
    cp[i] = c[i] / den;
    d[i] = (d[i] - a[i] * d[i - 1]) / den;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];
}

// periodic variant: a_0 couples x_0 to x_{n-1}, c_{n-1} couples x_{n-1} to x_0
inline void cyclic_thomas(const std::vector<double>& a, const std::vector<double>& b,
                          const std::vector<double>& c, std::vector<double>& d) {
  const std::size_t n = b.size();
  const double alpha = c[n - 1], beta = a[0];
  const double gamma = -b[0];
  std::vector<double> aa(a), bb(b), cc(c);
  aa[0] = 0.0;
  cc[n - 1] = 0.0;
  bb[0] = b[0] - gamma;
  bb[n - 1] = b[n - 1] - alpha * beta / gamma;
  thomas(aa, bb, cc, d);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  thomas(aa, bb, cc, u);
  const double fact = (d[0] + beta * d[n - 1] / gamma) / (1.0 + u[0] + beta * u[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) d[i] -= fact * u[i];
}

}  // namespace mcflab::flow::detail
