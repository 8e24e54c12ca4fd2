#pragma once

#include <array>

namespace mcflab::graphgeom {

inline constexpr int kMaxDim = 4;

using Vec = std::array<double, kMaxDim>;
using Mat = std::array<Vec, kMaxDim>;

Mat identity(int d);

// Ascending eigenvalues of the leading d x d block. Closed form for d <= 2,
// cyclic Jacobi otherwise.
Vec sym_eigenvalues(const Mat& a, int d);

// Inverse of a symmetric positive definite block via Cholesky.
Mat spd_inverse(const Mat& a, int d);

}  // namespace mcflab::graphgeom
