#include "ptnash/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace ptnash::kernels {

namespace {

constexpr std::size_t kLanes = 2;

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) {
        y[i] += a * x[i];
    }
}

void stage_neon(const double* base, double h, const double* k, double* out, std::size_t n) {
    const float64x2_t vh = vdupq_n_f64(h);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        vst1q_f64(out + i, vfmaq_f64(vld1q_f64(base + i), vh, vld1q_f64(k + i)));
    }
    for (; i < n; ++i) {
        out[i] = base[i] + h * k[i];
    }
}

void rk4_combine_neon(double h, const double* k1, const double* k2, const double* k3,
                      const double* k4, double* y, std::size_t n) {
    const double w = h / 6.0;
    const float64x2_t vw = vdupq_n_f64(w);
    const float64x2_t two = vdupq_n_f64(2.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t mid = vaddq_f64(vld1q_f64(k2 + i), vld1q_f64(k3 + i));
        const float64x2_t ends = vaddq_f64(vld1q_f64(k1 + i), vld1q_f64(k4 + i));
        const float64x2_t sum = vfmaq_f64(ends, two, mid);
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), vw, sum));
    }
    for (; i < n; ++i) {
        y[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

void accumulate_difference_neon(double w, const double* a, const double* b, double* out,
                                std::size_t n) {
    const float64x2_t vw = vdupq_n_f64(w);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        vst1q_f64(out + i, vfmaq_f64(vld1q_f64(out + i), vw, d));
    }
    for (; i < n; ++i) {
        out[i] += w * (a[i] - b[i]);
    }
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        tail += d * d;
    }
    return vaddvq_f64(acc) + tail;
}

double squared_norm_neon(const double* a, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const float64x2_t v = vld1q_f64(a + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        tail += a[i] * a[i];
    }
    return vaddvq_f64(acc) + tail;
}

constexpr KernelTable kNeon{
    Backend::Neon,
    axpy_neon,
    stage_neon,
    rk4_combine_neon,
    accumulate_difference_neon,
    squared_distance_neon,
    squared_norm_neon,
};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

}  // namespace ptnash::kernels

#else

namespace ptnash::kernels {
const KernelTable* neon_table() { return nullptr; }
}  // namespace ptnash::kernels

#endif
