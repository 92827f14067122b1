#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision inner loops shared by the numerical cores (SMO
// gradient updates, t-SNE distances and gradients, linear-model weight
// steps). Each kernel has a scalar reference and an AVX2/FMA variant; the
// variant is picked once at startup from CPUID, and FAKEWATCH_SIMD=scalar
// forces the reference path.
namespace fakewatch::simd {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
};

bool isa_supported(Isa isa);
const KernelTable& kernels_for(Isa isa);

Isa active_isa();
// Overrides dispatch for the whole process; throws if the ISA is unsupported.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);
double sum(std::span<const double> x);

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Kernels;
#endif
}  // namespace detail

}  // namespace fakewatch::simd
