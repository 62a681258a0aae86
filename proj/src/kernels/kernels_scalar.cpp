#include "ptnash/kernels.hpp"

namespace ptnash::kernels {

namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += a * x[i];
    }
}

void stage_scalar(const double* base, double h, const double* k, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = base[i] + h * k[i];
    }
}

void rk4_combine_scalar(double h, const double* k1, const double* k2, const double* k3,
                        const double* k4, double* y, std::size_t n) {
    const double w = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

void accumulate_difference_scalar(double w, const double* a, const double* b, double* out,
                                  std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] += w * (a[i] - b[i]);
    }
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double squared_norm_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * a[i];
    }
    return acc;
}

constexpr KernelTable kScalar{
    Backend::Scalar,
    axpy_scalar,
    stage_scalar,
    rk4_combine_scalar,
    accumulate_difference_scalar,
    squared_distance_scalar,
    squared_norm_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace ptnash::kernels
