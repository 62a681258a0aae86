#include "ptnash/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// Compiled with per-function target attributes rather than TU-wide -mavx2 so
// that no inline helper pulled in from headers is emitted with AVX2 encoding.
#define PTNASH_AVX2 __attribute__((target("avx2,fma")))

namespace ptnash::kernels {

namespace {

constexpr std::size_t kLanes = 4;

PTNASH_AVX2 double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

PTNASH_AVX2 void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) {
        y[i] += a * x[i];
    }
}

PTNASH_AVX2 void stage_avx2(const double* base, double h, const double* k, double* out,
                            std::size_t n) {
    const __m256d vh = _mm256_set1_pd(h);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        _mm256_storeu_pd(out + i,
                         _mm256_fmadd_pd(vh, _mm256_loadu_pd(k + i), _mm256_loadu_pd(base + i)));
    }
    for (; i < n; ++i) {
        out[i] = base[i] + h * k[i];
    }
}

PTNASH_AVX2 void rk4_combine_avx2(double h, const double* k1, const double* k2, const double* k3,
                                  const double* k4, double* y, std::size_t n) {
    const double w = h / 6.0;
    const __m256d vw = _mm256_set1_pd(w);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d mid = _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i));
        const __m256d ends = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_loadu_pd(k4 + i));
        const __m256d sum = _mm256_fmadd_pd(two, mid, ends);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vw, sum, _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) {
        y[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

PTNASH_AVX2 void accumulate_difference_avx2(double w, const double* a, const double* b,
                                            double* out, std::size_t n) {
    const __m256d vw = _mm256_set1_pd(w);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vw, d, _mm256_loadu_pd(out + i)));
    }
    for (; i < n; ++i) {
        out[i] += w * (a[i] - b[i]);
    }
}

PTNASH_AVX2 double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        tail += d * d;
    }
    return hsum(acc) + tail;
}

PTNASH_AVX2 double squared_norm_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d v = _mm256_loadu_pd(a + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        tail += a[i] * a[i];
    }
    return hsum(acc) + tail;
}

constexpr KernelTable kAvx2{
    Backend::Avx2,
    axpy_avx2,
    stage_avx2,
    rk4_combine_avx2,
    accumulate_difference_avx2,
    squared_distance_avx2,
    squared_norm_avx2,
};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace ptnash::kernels

#else

namespace ptnash::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace ptnash::kernels

#endif
