#include "mcflab/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mcflab::kernels {
namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("MCFLAB_KERNELS")) {
    if (std::string(env) == "scalar") return Backend::Scalar;
  }
  return avx2_table() ? Backend::Avx2 : Backend::Scalar;
}

Backend& current() {
  static Backend b = initial_backend();
  return b;
}

}  // namespace

bool backend_available(Backend b) { return b == Backend::Scalar || avx2_table() != nullptr; }

Backend active_backend() { return current(); }

void set_backend(Backend b) {
  if (!backend_available(b)) throw std::runtime_error("kernel backend not available on this CPU");
  current() = b;
}

const Table& active() {
  if (current() == Backend::Avx2) return *avx2_table();
  return scalar_table();
}

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

}  // namespace mcflab::kernels
