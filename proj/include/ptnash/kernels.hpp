#pragma once

// Dense vector primitives used by the right-hand sides and the RK4 stepper.
//
// Every primitive has a scalar reference implementation and, where the CPU
// supports it, a SIMD variant (AVX2+FMA on x86-64, NEON on AArch64). The
// backend is picked once at first use; PTNASH_KERNELS=scalar|avx2|neon|auto
// overrides the choice, and set_backend() does the same programmatically.
// Variants are not bit-identical to the reference (FMA contraction and lane
// reassociation in reductions); the test suite bounds the difference.

#include <cstddef>
#include <span>
#include <string_view>

namespace ptnash::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
    Backend backend;
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // out = base + h * k
    void (*stage)(const double* base, double h, const double* k, double* out, std::size_t n);
    // y += h/6 * (k1 + 2 k2 + 2 k3 + k4)
    void (*rk4_combine)(double h, const double* k1, const double* k2, const double* k3,
                        const double* k4, double* y, std::size_t n);
    // out += w * (a - b)
    void (*accumulate_difference)(double w, const double* a, const double* b, double* out,
                                  std::size_t n);
    // sum (a - b)^2
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    // sum a^2
    double (*squared_norm)(const double* a, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

bool cpu_supports(Backend b);

// The table in use. Thread-safe; resolved on first call.
const KernelTable& active();

// Forces a backend. Throws std::invalid_argument if unsupported on this CPU.
void set_backend(Backend b);
// Re-runs automatic detection (honours PTNASH_KERNELS).
void reset_backend();

std::string_view backend_name(Backend b);

// Span front-ends over the active table.

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    active().axpy(a, x.data(), y.data(), y.size());
}

inline void stage(std::span<const double> base, double h, std::span<const double> k,
                  std::span<double> out) {
    active().stage(base.data(), h, k.data(), out.data(), out.size());
}

inline void rk4_combine(double h, std::span<const double> k1, std::span<const double> k2,
                        std::span<const double> k3, std::span<const double> k4,
                        std::span<double> y) {
    active().rk4_combine(h, k1.data(), k2.data(), k3.data(), k4.data(), y.data(), y.size());
}

inline void accumulate_difference(double w, std::span<const double> a, std::span<const double> b,
                                  std::span<double> out) {
    active().accumulate_difference(w, a.data(), b.data(), out.data(), out.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return active().squared_distance(a.data(), b.data(), a.size());
}

inline double squared_norm(std::span<const double> a) {
    return active().squared_norm(a.data(), a.size());
}

}  // namespace ptnash::kernels
