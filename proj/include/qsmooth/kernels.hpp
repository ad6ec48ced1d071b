#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace qsmooth::kernels {

using cplx = std::complex<double>;

// Inner loops of the statevector simulator. Every backend implements the same
// table; backends are interchangeable bit-for-bit up to floating point
// rounding and are equivalence-tested against the scalar reference.
struct KernelTable {
    const char *name;

    // amps[i], amps[i + 2^qubit] <- m * (amps[i], amps[i + 2^qubit]) for every
    // pair; m is row-major 2x2.
    void (*apply_su2)(cplx *amps, size_t size, int qubit, const cplx *m);

    // Multiply amplitudes with bit `qubit` set by `phase`; if control >= 0,
    // only where the control bit is also set.
    void (*apply_phase)(cplx *amps, size_t size, int qubit, cplx phase, int control);

    // Negate amplitudes whose low `work_bits` index has a 1 in the packed
    // table; if control >= 0 (a qubit at or above work_bits), only inside
    // blocks with the control bit set.
    void (*apply_sign_table)(cplx *amps, size_t size, int work_bits,
                             const uint64_t *table, int control);

    // Negate amplitudes whose low `work_bits` are not all zero, with the same
    // control convention.
    void (*reflect_about_zero)(cplx *amps, size_t size, int work_bits, int control);

    double (*norm_sq)(const cplx *amps, size_t size);
};

enum class Backend { automatic, scalar, avx2, neon };

bool backend_available(Backend b);
const KernelTable &table_for(Backend b);

// Resolved once: QSMOOTH_KERNELS=scalar|avx2|neon overrides, otherwise the
// best available backend for the host.
const KernelTable &active();
Backend active_backend();
void set_backend(Backend b);

const KernelTable &scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable &avx2_table();
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
const KernelTable &neon_table();
#endif

} // namespace qsmooth::kernels
