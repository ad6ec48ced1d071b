#include "qsmooth/kernels.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

namespace qsmooth::kernels {

namespace {

// One complex per 128-bit vector: m*a = re*a + alt*swap(a), alt = [-im, +im].
struct SplitConstN {
    float64x2_t re;
    float64x2_t alt;
};

inline SplitConstN splitn(cplx m) {
    double alt[2] = {-m.imag(), m.imag()};
    return {vdupq_n_f64(m.real()), vld1q_f64(alt)};
}

inline float64x2_t swap_c(float64x2_t v) {
    return vextq_f64(v, v, 1);
}

inline float64x2_t cmul_acc(SplitConstN m, float64x2_t a, float64x2_t sa,
                            float64x2_t acc) {
    acc = vfmaq_f64(acc, m.alt, sa);
    return vfmaq_f64(acc, m.re, a);
}

void neon_apply_su2(cplx *amps, size_t size, int qubit, const cplx *m) {
    double *d = reinterpret_cast<double *>(amps);
    SplitConstN m00 = splitn(m[0]), m01 = splitn(m[1]);
    SplitConstN m10 = splitn(m[2]), m11 = splitn(m[3]);
    const size_t stride = size_t{1} << qubit;
    for (size_t base = 0; base < size; base += 2 * stride) {
        for (size_t i = base; i < base + stride; ++i) {
            float64x2_t a0 = vld1q_f64(d + 2 * i);
            float64x2_t a1 = vld1q_f64(d + 2 * (i + stride));
            float64x2_t sa0 = swap_c(a0);
            float64x2_t sa1 = swap_c(a1);
            float64x2_t zero = vdupq_n_f64(0.0);
            vst1q_f64(d + 2 * i, cmul_acc(m00, a0, sa0, cmul_acc(m01, a1, sa1, zero)));
            vst1q_f64(d + 2 * (i + stride),
                      cmul_acc(m10, a0, sa0, cmul_acc(m11, a1, sa1, zero)));
        }
    }
}

void neon_apply_phase(cplx *amps, size_t size, int qubit, cplx phase, int control) {
    double *d = reinterpret_cast<double *>(amps);
    SplitConstN p = splitn(phase);
    auto run = [&](size_t begin, size_t count) {
        for (size_t i = begin; i < begin + count; ++i) {
            float64x2_t a = vld1q_f64(d + 2 * i);
            vst1q_f64(d + 2 * i, cmul_acc(p, a, swap_c(a), vdupq_n_f64(0.0)));
        }
    };
    const size_t q = size_t{1} << qubit;
    if (control < 0) {
        for (size_t base = q; base < size; base += 2 * q) run(base, q);
        return;
    }
    const size_t hi = size_t{1} << (qubit > control ? qubit : control);
    const size_t lo = size_t{1} << (qubit > control ? control : qubit);
    for (size_t base = hi; base < size; base += 2 * hi) {
        for (size_t sub = base + lo; sub < base + hi; sub += 2 * lo) run(sub, lo);
    }
}

void neon_apply_sign_table(cplx *amps, size_t size, int work_bits,
                           const uint64_t *table, int control) {
    const size_t block = size_t{1} << work_bits;
    for (size_t base = 0; base < size; base += block) {
        if (control >= 0 && ((base >> control) & 1u) == 0) continue;
        if (block < 64) {
            uint64_t w = table[0];
            for (size_t i = 0; i < block; ++i) {
                if ((w >> i) & 1u) amps[base + i] = -amps[base + i];
            }
            continue;
        }
        for (size_t wi = 0; wi < block / 64; ++wi) {
            uint64_t w = table[wi];
            if (w == 0) continue;
            cplx *p = amps + base + wi * 64;
            for (int b = 0; b < 64; ++b) {
                if ((w >> b) & 1u) {
                    double *pd = reinterpret_cast<double *>(p + b);
                    vst1q_f64(pd, vnegq_f64(vld1q_f64(pd)));
                }
            }
        }
    }
}

void neon_reflect_about_zero(cplx *amps, size_t size, int work_bits, int control) {
    const size_t block = size_t{1} << work_bits;
    for (size_t base = 0; base < size; base += block) {
        if (control >= 0 && ((base >> control) & 1u) == 0) continue;
        double *d = reinterpret_cast<double *>(amps + base);
        for (size_t i = 0; i < block; ++i) {
            vst1q_f64(d + 2 * i, vnegq_f64(vld1q_f64(d + 2 * i)));
        }
        amps[base] = -amps[base];
    }
}

double neon_norm_sq(const cplx *amps, size_t size) {
    const double *d = reinterpret_cast<const double *>(amps);
    const size_t n = 2 * size;
    const size_t chunk = 8192;
    double total = 0.0;
    size_t base = 0;
    for (; base + chunk <= n; base += chunk) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (size_t i = base; i < base + chunk; i += 2) {
            float64x2_t v = vld1q_f64(d + i);
            acc = vfmaq_f64(acc, v, v);
        }
        total += vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    }
    double tail = 0.0;
    for (size_t i = base; i < n; ++i) tail += d[i] * d[i];
    return total + tail;
}

} // namespace

const KernelTable &neon_table() {
    static const KernelTable table = {
        "neon",          neon_apply_su2,           neon_apply_phase,
        neon_apply_sign_table, neon_reflect_about_zero, neon_norm_sq,
    };
    return table;
}

} // namespace qsmooth::kernels

#endif
