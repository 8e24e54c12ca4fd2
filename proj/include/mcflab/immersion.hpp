#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "mcflab/curve.hpp"
#include "mcflab/profile.hpp"

namespace mcflab {

using Immersion = std::variant<DiscreteCurve, AxisymProfile>;

inline bool is_curve(const Immersion& f) { return std::holds_alternative<DiscreteCurve>(f); }
int dimension(const Immersion& f);
std::size_t vertex_count(const Immersion& f);
double ii_at(const Immersion& f, std::size_t i);
std::vector<double> ii_norms(const Immersion& f);
double sup_ii(const Immersion& f);
std::size_t argmax_ii(const Immersion& f);
Point position(const Immersion& f, std::size_t i);  // curve vertex or meridian point (z, r)
double measure(const Immersion& f);                 // length or represented area
DiscreteCurve meridian(const Immersion& f);

// q * (x - center); profiles rescale about the axis point (center.x, 0)
Immersion rescale(const Immersion& f, double q, Point center);
// vertexwise (1 - lambda) a + lambda b; both must share kind and size
Immersion lerp(const Immersion& a, const Immersion& b, double lambda);

// Pointwise data for surface integrals along the meridian polyline:
// H = h * n and dH^m = density * ds.
struct SurfaceSamples {
  int m = 1;
  bool closed = true;
  std::vector<double> px, py, nx, ny, h, density;
  std::size_t size() const { return px.size(); }
};

SurfaceSamples surface_samples(const Immersion& f);

}  // namespace mcflab
