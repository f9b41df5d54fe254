#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace obdiff::kernels {

/// Dispatch table for the data-parallel inner loops (vector combinations,
/// elementwise min/compare, reductions).  Every entry has a scalar reference
/// implementation; on x86-64 an AVX2/FMA variant is selected at runtime when
/// the CPU supports it.  Select explicitly with OBDIFF_KERNELS=scalar|avx2.
struct Ops {
    const char* name;

    // w[i] = a*x[i] + b*y[i]
    void (*lincomb2)(double* w, double a, const double* x, double b, const double* y,
                     std::size_t n);
    // w[i] = a*x[i] + b*y[i] + c*z[i]
    void (*lincomb3)(double* w, double a, const double* x, double b, const double* y,
                     double c, const double* z, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy)(double* y, double a, const double* x, std::size_t n);
    // y[i] += a[i]*x[i]   (banded mat-vec inner loop, one diagonal at a time)
    void (*fmadd)(double* y, const double* a, const double* x, std::size_t n);
    // w[i] = x[i] - y[i]
    void (*sub)(double* w, const double* x, const double* y, std::size_t n);
    // w[i] = min(x[i], y[i])
    void (*min2)(double* w, const double* x, const double* y, std::size_t n);
    // m[i] = x[i] < y[i] ? 1 : 0
    void (*less_mask)(std::uint8_t* m, const double* x, const double* y, std::size_t n);

    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*linf)(const double* x, std::size_t n);
    double (*linf_diff)(const double* x, const double* y, std::size_t n);
    double (*l1_diff)(const double* x, const double* y, std::size_t n);
    double (*sumsq_diff)(const double* x, const double* y, std::size_t n);
    // min over i of x[i] - y[i]; +inf for n == 0
    double (*min_diff)(const double* x, const double* y, std::size_t n);
};

/// Scalar reference kernels (always available).
const Ops& scalar_ops();

/// AVX2/FMA kernels, or nullptr if the CPU (or build target) lacks them.
const Ops* avx2_ops();

/// The implementation selected at process start.
const Ops& active();

std::string_view active_name();

}  // namespace obdiff::kernels
