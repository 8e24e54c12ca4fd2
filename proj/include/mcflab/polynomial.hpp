#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcflab/symmat.hpp"

namespace mcflab::graphgeom {

struct Monomial {
  int component = 0;
  double coef = 0.0;
  std::array<int, kMaxDim> exps{};
};

// Polynomial map R^m -> R^n as a list of monomials.
struct PolyMap {
  int m = 1;
  int n = 1;
  std::vector<Monomial> terms;

  Vec operator()(const Vec& x) const;
  int degree() const;
};

// One record of the patch corpus.
struct PatchSpec {
  std::string id;
  double radius = 1.0;
  int nodes = 9;
  PolyMap f;
};

std::vector<PatchSpec> read_corpus(const std::string& path);
void write_corpus(const std::string& path, const std::vector<PatchSpec>& specs);

// Random patches with dims in [1,3], degree in [2,max_degree], f(0)=0 and Df(0)=0.
std::vector<PatchSpec> random_corpus(std::uint64_t seed, int count, int max_degree = 4,
                                     int nodes = 9, double radius = 1.0);

}  // namespace mcflab::graphgeom
