#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference and an AVX2
// variant; the active one is picked once at runtime.
namespace mcflab::kernels {

enum class Backend { Scalar, Avx2 };

struct GaussianSums {
  double mass = 0.0;      // sum w * e
  double residual = 0.0;  // sum w * e * (h + (p - x0).n * half_inv_tau)^2
};

struct MomentSums {
  double hd = 0.0;
  double dd = 0.0;
  double hh = 0.0;
};

// Column view of weighted curve samples.
struct Samples {
  const double* px;
  const double* py;
  const double* nx;
  const double* ny;
  const double* h;
  const double* w;
  std::size_t n;
};

// Signed Menger curvature of triples (a_i, b_i, c_i).
using MengerFn = void (*)(const double* ax, const double* ay, const double* bx, const double* by,
                          const double* cx, const double* cy, std::size_t n, double* k);
// e = exp(-|p - x0|^2 * inv4tau)
using GaussianFn = GaussianSums (*)(const Samples& s, double x0, double y0, double inv4tau,
                                    double half_inv_tau);
// sums of w*h*d, w*d*d, w*h*h with d = (p - c).n
using MomentFn = MomentSums (*)(const Samples& s, double cx, double cy);
// max over j > i of arc(i,j) / chord(i,j)
using RatioFn = double (*)(const double* xs, const double* ys, const double* arc, std::size_t n,
                           double total, bool closed, std::size_t i);

struct Table {
  MengerFn menger;
  GaussianFn gaussian;
  MomentFn moments;
  RatioFn arc_chord;
};

const Table& scalar_table();
const Table* avx2_table();  // nullptr when not compiled in or not supported

bool backend_available(Backend b);
Backend active_backend();
void set_backend(Backend b);  // throws if unavailable
const Table& active();
std::string_view backend_name(Backend b);

inline constexpr double kCollinearTol = 1e-14;

}  // namespace mcflab::kernels
