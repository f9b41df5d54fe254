#include "obdiff/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>

#if defined(__x86_64__) || defined(__i386__)
#define OBDIFF_X86 1
#include <immintrin.h>
#else
#define OBDIFF_X86 0
#endif

namespace obdiff::kernels {

namespace {

// ---------------------------------------------------------------------------
// scalar reference kernels
// ---------------------------------------------------------------------------

void s_lincomb2(double* w, double a, const double* x, double b, const double* y,
                std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) w[i] = a * x[i] + b * y[i];
}

void s_lincomb3(double* w, double a, const double* x, double b, const double* y,
                double c, const double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) w[i] = a * x[i] + b * y[i] + c * z[i];
}

void s_axpy(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_fmadd(double* y, const double* a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a[i] * x[i];
}

void s_sub(double* w, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) w[i] = x[i] - y[i];
}

void s_min2(double* w, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) w[i] = x[i] < y[i] ? x[i] : y[i];
}

void s_less_mask(std::uint8_t* m, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) m[i] = x[i] < y[i] ? 1 : 0;
}

double s_dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double s_linf(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, std::fabs(x[i]));
    return acc;
}

double s_linf_diff(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, std::fabs(x[i] - y[i]));
    return acc;
}

double s_l1_diff(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i] - y[i]);
    return acc;
}

double s_sumsq_diff(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

double s_min_diff(const double* x, const double* y, std::size_t n) {
    double acc = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) acc = std::min(acc, x[i] - y[i]);
    return acc;
}

constexpr Ops scalar_table = {
        "scalar",   s_lincomb2, s_lincomb3, s_axpy,       s_fmadd,
        s_sub,      s_min2,     s_less_mask, s_dot,       s_linf,
        s_linf_diff, s_l1_diff, s_sumsq_diff, s_min_diff,
};

// ---------------------------------------------------------------------------
// AVX2 + FMA kernels
// ---------------------------------------------------------------------------

#if OBDIFF_X86

__attribute__((target("avx2,fma"))) void v_lincomb2(double* w, double a, const double* x,
                                                    double b, const double* y,
                                                    std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        r = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), r);
        _mm256_storeu_pd(w + i, r);
    }
    for (; i < n; ++i) w[i] = a * x[i] + b * y[i];
}

__attribute__((target("avx2,fma"))) void v_lincomb3(double* w, double a, const double* x,
                                                    double b, const double* y, double c,
                                                    const double* z, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        r = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), r);
        r = _mm256_fmadd_pd(vc, _mm256_loadu_pd(z + i), r);
        _mm256_storeu_pd(w + i, r);
    }
    for (; i < n; ++i) w[i] = a * x[i] + b * y[i] + c * z[i];
}

__attribute__((target("avx2,fma"))) void v_axpy(double* y, double a, const double* x,
                                                std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) void v_fmadd(double* y, const double* a,
                                                 const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i),
                                    _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += a[i] * x[i];
}

__attribute__((target("avx2"))) void v_sub(double* w, const double* x, const double* y,
                                           std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(w + i,
                         _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) w[i] = x[i] - y[i];
}

__attribute__((target("avx2"))) void v_min2(double* w, const double* x, const double* y,
                                            std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(w + i,
                         _mm256_min_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) w[i] = x[i] < y[i] ? x[i] : y[i];
}

__attribute__((target("avx2"))) void v_less_mask(std::uint8_t* m, const double* x,
                                                 const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d lt =
                _mm256_cmp_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), _CMP_LT_OQ);
        const int bits = _mm256_movemask_pd(lt);
        m[i + 0] = static_cast<std::uint8_t>(bits & 1);
        m[i + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
        m[i + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
        m[i + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
    }
    for (; i < n; ++i) m[i] = x[i] < y[i] ? 1 : 0;
}

__attribute__((target("avx2,fma"))) double reduce_add(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

__attribute__((target("avx2,fma"))) double reduce_max(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(s, _mm_unpackhi_pd(s, s)));
}

__attribute__((target("avx2,fma"))) double reduce_min(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(s, _mm_unpackhi_pd(s, s)));
}

__attribute__((target("avx2,fma"))) double v_dot(const double* x, const double* y,
                                                 std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double r = reduce_add(acc);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

__attribute__((target("avx2"))) double v_linf(const double* x, std::size_t n) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_and_pd(absmask, _mm256_loadu_pd(x + i)));
    double r = reduce_max(acc);
    for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
    return r;
}

__attribute__((target("avx2"))) double v_linf_diff(const double* x, const double* y,
                                                   std::size_t n) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_max_pd(acc, _mm256_and_pd(absmask, d));
    }
    double r = reduce_max(acc);
    for (; i < n; ++i) r = std::max(r, std::fabs(x[i] - y[i]));
    return r;
}

__attribute__((target("avx2"))) double v_l1_diff(const double* x, const double* y,
                                                 std::size_t n) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_add_pd(acc, _mm256_and_pd(absmask, d));
    }
    double r = reduce_add(acc);
    for (; i < n; ++i) r += std::fabs(x[i] - y[i]);
    return r;
}

__attribute__((target("avx2,fma"))) double v_sumsq_diff(const double* x, const double* y,
                                                        std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double r = reduce_add(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        r += d * d;
    }
    return r;
}

__attribute__((target("avx2"))) double v_min_diff(const double* x, const double* y,
                                                  std::size_t n) {
    __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_min_pd(acc,
                            _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    double r = reduce_min(acc);
    for (; i < n; ++i) r = std::min(r, x[i] - y[i]);
    return r;
}

constexpr Ops avx2_table = {
        "avx2",     v_lincomb2, v_lincomb3,  v_axpy,       v_fmadd,
        v_sub,      v_min2,     v_less_mask, v_dot,        v_linf,
        v_linf_diff, v_l1_diff, v_sumsq_diff, v_min_diff,
};

bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#endif  // OBDIFF_X86

const Ops* select() {
    const char* env = std::getenv("OBDIFF_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_table;
#if OBDIFF_X86
    if (env != nullptr && std::strcmp(env, "avx2") == 0) {
        if (cpu_has_avx2()) return &avx2_table;
        std::fprintf(stderr, "obdiff: OBDIFF_KERNELS=avx2 but CPU lacks AVX2/FMA; "
                             "using scalar kernels\n");
        return &scalar_table;
    }
    if (cpu_has_avx2()) return &avx2_table;
#endif
    return &scalar_table;
}

}  // namespace

const Ops& scalar_ops() { return scalar_table; }

const Ops* avx2_ops() {
#if OBDIFF_X86
    return cpu_has_avx2() ? &avx2_table : nullptr;
#else
    return nullptr;
#endif
}

const Ops& active() {
    static const Ops* chosen = select();
    return *chosen;
}

std::string_view active_name() { return active().name; }

}  // namespace obdiff::kernels
