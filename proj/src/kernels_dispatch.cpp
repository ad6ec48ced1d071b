#include "qsmooth/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qsmooth::kernels {

namespace {

Backend detect_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return Backend::avx2;
    }
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    return Backend::neon;
#endif
    return Backend::scalar;
}

Backend initial_backend() {
    if (const char *env = std::getenv("QSMOOTH_KERNELS")) {
        std::string want(env);
        Backend b = Backend::automatic;
        if (want == "scalar") b = Backend::scalar;
        if (want == "avx2") b = Backend::avx2;
        if (want == "neon") b = Backend::neon;
        if (b != Backend::automatic && backend_available(b)) return b;
    }
    return detect_backend();
}

Backend &current() {
    static Backend backend = initial_backend();
    return backend;
}

} // namespace

bool backend_available(Backend b) {
    switch (b) {
    case Backend::automatic:
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::neon:
#if defined(__aarch64__) || defined(__ARM_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

const KernelTable &table_for(Backend b) {
    switch (b) {
    case Backend::automatic:
        return table_for(detect_backend());
    case Backend::scalar:
        return scalar_table();
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        if (backend_available(Backend::avx2)) return avx2_table();
#endif
        break;
    case Backend::neon:
#if defined(__aarch64__) || defined(__ARM_NEON)
        return neon_table();
#else
        break;
#endif
    }
    throw std::invalid_argument("kernel backend not available on this host");
}

const KernelTable &active() {
    return table_for(current());
}

Backend active_backend() {
    Backend b = current();
    return b == Backend::automatic ? detect_backend() : b;
}

void set_backend(Backend b) {
    if (!backend_available(b)) {
        throw std::invalid_argument("kernel backend not available on this host");
    }
    current() = b;
}

} // namespace qsmooth::kernels
