#include "qsmooth/kernels.hpp"

namespace qsmooth::kernels {

namespace {

void scalar_apply_su2(cplx *amps, size_t size, int qubit, const cplx *m) {
    const size_t stride = size_t{1} << qubit;
    for (size_t base = 0; base < size; base += 2 * stride) {
        for (size_t i = base; i < base + stride; ++i) {
            cplx a0 = amps[i];
            cplx a1 = amps[i + stride];
            amps[i] = m[0] * a0 + m[1] * a1;
            amps[i + stride] = m[2] * a0 + m[3] * a1;
        }
    }
}

void scalar_apply_phase(cplx *amps, size_t size, int qubit, cplx phase, int control) {
    const size_t q = size_t{1} << qubit;
    if (control < 0) {
        for (size_t base = q; base < size; base += 2 * q) {
            for (size_t i = base; i < base + q; ++i) amps[i] *= phase;
        }
        return;
    }
    const size_t hi = size_t{1} << (qubit > control ? qubit : control);
    const size_t lo = size_t{1} << (qubit > control ? control : qubit);
    for (size_t base = hi; base < size; base += 2 * hi) {
        for (size_t sub = base + lo; sub < base + hi; sub += 2 * lo) {
            for (size_t i = sub; i < sub + lo; ++i) amps[i] *= phase;
        }
    }
}

void scalar_apply_sign_table(cplx *amps, size_t size, int work_bits,
                             const uint64_t *table, int control) {
    const size_t block = size_t{1} << work_bits;
    const size_t words = block >= 64 ? block / 64 : 1;
    for (size_t base = 0; base < size; base += block) {
        if (control >= 0 && ((base >> control) & 1u) == 0) continue;
        if (block < 64) {
            uint64_t w = table[0];
            for (size_t i = 0; i < block; ++i) {
                if ((w >> i) & 1u) amps[base + i] = -amps[base + i];
            }
            continue;
        }
        for (size_t wi = 0; wi < words; ++wi) {
            uint64_t w = table[wi];
            if (w == 0) continue;
            cplx *p = amps + base + wi * 64;
            for (int b = 0; b < 64; ++b) {
                if ((w >> b) & 1u) p[b] = -p[b];
            }
        }
    }
}

void scalar_reflect_about_zero(cplx *amps, size_t size, int work_bits, int control) {
    const size_t block = size_t{1} << work_bits;
    for (size_t base = 0; base < size; base += block) {
        if (control >= 0 && ((base >> control) & 1u) == 0) continue;
        for (size_t i = base + 1; i < base + block; ++i) amps[i] = -amps[i];
    }
}

double scalar_norm_sq(const cplx *amps, size_t size) {
    // Chunked accumulation keeps rounding well under the 1e-10 norm budget
    // even at 2^26 amplitudes.
    const size_t chunk = 4096;
    double total = 0.0;
    for (size_t base = 0; base < size; base += chunk) {
        size_t end = base + chunk < size ? base + chunk : size;
        double local = 0.0;
        for (size_t i = base; i < end; ++i) {
            local += amps[i].real() * amps[i].real() + amps[i].imag() * amps[i].imag();
        }
        total += local;
    }
    return total;
}

} // namespace

const KernelTable &scalar_table() {
    static const KernelTable table = {
        "scalar",          scalar_apply_su2,           scalar_apply_phase,
        scalar_apply_sign_table, scalar_reflect_about_zero, scalar_norm_sq,
    };
    return table;
}

} // namespace qsmooth::kernels
