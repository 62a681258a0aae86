#include "ptnash/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ptnash::kernels {

namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* table_for(Backend b) {
    switch (b) {
        case Backend::Scalar: return &scalar_table();
        case Backend::Avx2: return avx2_table();
        case Backend::Neon: return neon_table();
    }
    return nullptr;
}

const KernelTable* detect() {
    if (const char* env = std::getenv("PTNASH_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_table();
        if (want == "avx2" && cpu_supports(Backend::Avx2)) return avx2_table();
        if (want == "neon" && cpu_supports(Backend::Neon)) return neon_table();
        // Unknown or unsupported request falls through to auto.
    }
    if (cpu_supports(Backend::Avx2)) return avx2_table();
    if (cpu_supports(Backend::Neon)) return neon_table();
    return &scalar_table();
}

}  // namespace

bool cpu_supports(Backend b) {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return avx2_table() != nullptr && __builtin_cpu_supports("avx2") &&
                   __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::Neon:
            // Advanced SIMD is mandatory on AArch64.
            return neon_table() != nullptr;
    }
    return false;
}

const KernelTable& active() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        const KernelTable* expected = nullptr;
        const KernelTable* detected = detect();
        g_active.compare_exchange_strong(expected, detected, std::memory_order_acq_rel);
        t = g_active.load(std::memory_order_acquire);
    }
    return *t;
}

void set_backend(Backend b) {
    if (!cpu_supports(b)) {
        throw std::invalid_argument("kernel backend '" + std::string(backend_name(b)) +
                                    "' is not supported on this CPU");
    }
    g_active.store(table_for(b), std::memory_order_release);
}

void reset_backend() { g_active.store(detect(), std::memory_order_release); }

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

}  // namespace ptnash::kernels
