#include "fakewatch/simd/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

#include "fakewatch/common/error.hpp"

namespace fakewatch::simd {
namespace {

Isa detect_isa() {
  if (const char* env = std::getenv("FAKEWATCH_SIMD")) {
    if (std::string(env) == "scalar") return Isa::kScalar;
  }
  return isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{&kernels_for(detect_isa())};
  return table;
}

const KernelTable& table() { return *active_table().load(std::memory_order_relaxed); }

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::kAvx2) return detail::kAvx2Kernels;
#endif
  return detail::kScalarKernels;
}

Isa active_isa() { return &table() == &detail::kScalarKernels ? Isa::kScalar : Isa::kAvx2; }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("ISA not supported: ") +
                                                 std::string(isa_name(isa)));
  }
  active_table().store(&kernels_for(isa), std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return table().dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return table().squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  table().axpy(alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> x) { table().scale(alpha, x.data(), x.size()); }

double sum(std::span<const double> x) { return table().sum(x.data(), x.size()); }

}  // namespace fakewatch::simd
