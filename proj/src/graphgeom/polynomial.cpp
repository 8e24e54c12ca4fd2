#include "mcflab/polynomial.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mcflab::graphgeom {

Vec PolyMap::operator()(const Vec& x) const {
  Vec out{};
  for (const Monomial& t : terms) {
    double v = t.coef;
    for (int i = 0; i < m; ++i)
      for (int e = 0; e < t.exps[i]; ++e) v *= x[i];
    out[t.component] += v;
  }
  return out;
}

int PolyMap::degree() const {
  int d = 0;
  for (const Monomial& t : terms) {
    int s = 0;
    for (int i = 0; i < m; ++i) s += t.exps[i];
    d = std::max(d, s);
  }
  return d;
}

namespace {

[[noreturn]] void corpus_error(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

void exponents(int m, int max_deg, std::array<int, kMaxDim>& e, int axis,
               std::vector<std::array<int, kMaxDim>>& out) {
  if (axis == m) {
    int s = 0;
    for (int i = 0; i < m; ++i) s += e[i];
    if (s >= 2 && s <= max_deg) out.push_back(e);
    return;
  }
  for (int k = 0; k <= max_deg; ++k) {
    e[axis] = k;
    exponents(m, max_deg, e, axis + 1, out);
  }
  e[axis] = 0;
}

}  // namespace

std::vector<PatchSpec> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  std::vector<PatchSpec> out;
  PatchSpec cur;
  bool open = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "patch") {
      if (open) corpus_error(path, lineno, "nested patch record");
      cur = PatchSpec{};
      ss >> cur.id;
      open = true;
    } else if (!open) {
      corpus_error(path, lineno, "field outside a patch record");
    } else if (key == "dims") {
      ss >> cur.f.m >> cur.f.n;
      if (cur.f.m < 1 || cur.f.m > kMaxDim || cur.f.n < 1 || cur.f.n > kMaxDim)
        corpus_error(path, lineno, "dimensions out of range");
    } else if (key == "radius") {
      ss >> cur.radius;
    } else if (key == "nodes") {
      ss >> cur.nodes;
    } else if (key == "term") {
      Monomial t;
      ss >> t.component >> t.coef;
      for (int i = 0; i < cur.f.m; ++i) ss >> t.exps[i];
      if (!ss || t.component < 0 || t.component >= cur.f.n)
        corpus_error(path, lineno, "malformed term");
      cur.f.terms.push_back(t);
    } else if (key == "end") {
      if (!(cur.radius > 0.0) || cur.nodes < 5) corpus_error(path, lineno, "bad grid");
      out.push_back(cur);
      open = false;
    } else {
      corpus_error(path, lineno, "unknown key '" + key + "'");
    }
  }
  if (open) corpus_error(path, lineno, "unterminated patch record");
  return out;
}

void write_corpus(const std::string& path, const std::vector<PatchSpec>& specs) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write corpus file " + path);
  std::fprintf(f, "# polynomial graph patches\n");
  for (const PatchSpec& s : specs) {
    std::fprintf(f, "patch %s\ndims %d %d\nradius %.17g\nnodes %d\n", s.id.c_str(), s.f.m, s.f.n,
                 s.radius, s.nodes);
    for (const Monomial& t : s.f.terms) {
      std::fprintf(f, "term %d %.17g", t.component, t.coef);
      for (int i = 0; i < s.f.m; ++i) std::fprintf(f, " %d", t.exps[i]);
      std::fprintf(f, "\n");
    }
    std::fprintf(f, "end\n");
  }
  std::fclose(f);
}

std::vector<PatchSpec> random_corpus(std::uint64_t seed, int count, int max_degree, int nodes,
                                     double radius) {
  std::mt19937_64 gen(seed);
  auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1)); };
  std::vector<PatchSpec> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    PatchSpec s;
    s.id = "p" + std::to_string(c);
    s.radius = radius;
    s.nodes = nodes;
    s.f.m = pick(1, 3);
    s.f.n = pick(1, 3);
    const int deg = pick(2, max_degree);
    std::vector<std::array<int, kMaxDim>> exps;
    std::array<int, kMaxDim> e{};
    exponents(s.f.m, deg, e, 0, exps);
    for (int a = 0; a < s.f.n; ++a) {
      bool any = false;
      for (const auto& ex : exps) {
        if (unit() < 0.5) continue;
        s.f.terms.push_back({a, 2.0 * unit() - 1.0, ex});
        any = true;
      }
      if (!any) s.f.terms.push_back({a, 2.0 * unit() - 1.0, exps[gen() % exps.size()]});
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mcflab::graphgeom
