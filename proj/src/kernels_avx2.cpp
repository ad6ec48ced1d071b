#include "qsmooth/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace qsmooth::kernels {

namespace {

// Complex constants are split into a broadcast real part and an alternating
// [-im, +im] part so that m*a = re*a + alt*swap(a) with one fma per term.
struct SplitConst256 {
    __m256d re;
    __m256d alt;
};

inline SplitConst256 split256(cplx m) {
    return {_mm256_set1_pd(m.real()),
            _mm256_setr_pd(-m.imag(), m.imag(), -m.imag(), m.imag())};
}

inline __m256d swap_halves(__m256d v) {
    return _mm256_permute_pd(v, 0x5);
}

inline __m256d cmul_acc(SplitConst256 m, __m256d a, __m256d sa, __m256d acc) {
    acc = _mm256_fmadd_pd(m.alt, sa, acc);
    return _mm256_fmadd_pd(m.re, a, acc);
}

struct SplitConst128 {
    __m128d re;
    __m128d alt;
};

inline SplitConst128 split128(cplx m) {
    return {_mm_set1_pd(m.real()), _mm_setr_pd(-m.imag(), m.imag())};
}

inline __m128d cmul_acc(SplitConst128 m, __m128d a, __m128d sa, __m128d acc) {
    acc = _mm_fmadd_pd(m.alt, sa, acc);
    return _mm_fmadd_pd(m.re, a, acc);
}

void avx2_apply_su2(cplx *amps, size_t size, int qubit, const cplx *m) {
    double *d = reinterpret_cast<double *>(amps);
    if (qubit == 0) {
        // Pairs are adjacent; work on single complexes in 128-bit lanes.
        SplitConst128 m00 = split128(m[0]), m01 = split128(m[1]);
        SplitConst128 m10 = split128(m[2]), m11 = split128(m[3]);
        for (size_t i = 0; i < size; i += 2) {
            __m128d a0 = _mm_loadu_pd(d + 2 * i);
            __m128d a1 = _mm_loadu_pd(d + 2 * i + 2);
            __m128d sa0 = _mm_shuffle_pd(a0, a0, 0x1);
            __m128d sa1 = _mm_shuffle_pd(a1, a1, 0x1);
            __m128d r0 = cmul_acc(m00, a0, sa0, cmul_acc(m01, a1, sa1, _mm_setzero_pd()));
            __m128d r1 = cmul_acc(m10, a0, sa0, cmul_acc(m11, a1, sa1, _mm_setzero_pd()));
            _mm_storeu_pd(d + 2 * i, r0);
            _mm_storeu_pd(d + 2 * i + 2, r1);
        }
        return;
    }
    SplitConst256 m00 = split256(m[0]), m01 = split256(m[1]);
    SplitConst256 m10 = split256(m[2]), m11 = split256(m[3]);
    const size_t stride = size_t{1} << qubit;
    for (size_t base = 0; base < size; base += 2 * stride) {
        for (size_t i = base; i < base + stride; i += 2) {
            __m256d a0 = _mm256_loadu_pd(d + 2 * i);
            __m256d a1 = _mm256_loadu_pd(d + 2 * (i + stride));
            __m256d sa0 = swap_halves(a0);
            __m256d sa1 = swap_halves(a1);
            __m256d r0 =
                cmul_acc(m00, a0, sa0, cmul_acc(m01, a1, sa1, _mm256_setzero_pd()));
            __m256d r1 =
                cmul_acc(m10, a0, sa0, cmul_acc(m11, a1, sa1, _mm256_setzero_pd()));
            _mm256_storeu_pd(d + 2 * i, r0);
            _mm256_storeu_pd(d + 2 * (i + stride), r1);
        }
    }
}

inline void phase_run(double *d, size_t begin, size_t count, SplitConst256 p256,
                      SplitConst128 p128) {
    size_t i = begin;
    for (; i + 2 <= begin + count; i += 2) {
        __m256d a = _mm256_loadu_pd(d + 2 * i);
        __m256d r = cmul_acc(p256, a, swap_halves(a), _mm256_setzero_pd());
        _mm256_storeu_pd(d + 2 * i, r);
    }
    for (; i < begin + count; ++i) {
        __m128d a = _mm_loadu_pd(d + 2 * i);
        __m128d sa = _mm_shuffle_pd(a, a, 0x1);
        _mm_storeu_pd(d + 2 * i, cmul_acc(p128, a, sa, _mm_setzero_pd()));
    }
}

void avx2_apply_phase(cplx *amps, size_t size, int qubit, cplx phase, int control) {
    double *d = reinterpret_cast<double *>(amps);
    SplitConst256 p256 = split256(phase);
    SplitConst128 p128 = split128(phase);
    const size_t q = size_t{1} << qubit;
    if (control < 0) {
        for (size_t base = q; base < size; base += 2 * q) {
            phase_run(d, base, q, p256, p128);
        }
        return;
    }
    const size_t hi = size_t{1} << (qubit > control ? qubit : control);
    const size_t lo = size_t{1} << (qubit > control ? control : qubit);
    for (size_t base = hi; base < size; base += 2 * hi) {
        for (size_t sub = base + lo; sub < base + hi; sub += 2 * lo) {
            phase_run(d, sub, lo, p256, p128);
        }
    }
}

void avx2_apply_sign_table(cplx *amps, size_t size, int work_bits,
                           const uint64_t *table, int control) {
    const size_t block = size_t{1} << work_bits;
    const __m256d sign_both = _mm256_set1_pd(-0.0);
    // Masks for negating complex 0 / complex 1 of a 256-bit lane, selected by
    // two consecutive table bits.
    const __m256d masks[4] = {
        _mm256_setzero_pd(),
        _mm256_setr_pd(-0.0, -0.0, 0.0, 0.0),
        _mm256_setr_pd(0.0, 0.0, -0.0, -0.0),
        sign_both,
    };
    for (size_t base = 0; base < size; base += block) {
        if (control >= 0 && ((base >> control) & 1u) == 0) continue;
        double *d = reinterpret_cast<double *>(amps + base);
        if (block < 64) {
            uint64_t w = table[0];
            for (size_t i = 0; i < block; ++i) {
                if ((w >> i) & 1u) {
                    amps[base + i] = -amps[base + i];
                }
            }
            continue;
        }
        const size_t words = block / 64;
        for (size_t wi = 0; wi < words; ++wi) {
            uint64_t w = table[wi];
            double *p = d + wi * 128;
            if (w == 0) continue;
            if (w == ~uint64_t{0}) {
                for (int v = 0; v < 32; ++v) {
                    __m256d a = _mm256_loadu_pd(p + 4 * v);
                    _mm256_storeu_pd(p + 4 * v, _mm256_xor_pd(a, sign_both));
                }
                continue;
            }
            for (int v = 0; v < 32; ++v) {
                unsigned pattern = (w >> (2 * v)) & 3u;
                if (!pattern) continue;
                __m256d a = _mm256_loadu_pd(p + 4 * v);
                _mm256_storeu_pd(p + 4 * v, _mm256_xor_pd(a, masks[pattern]));
            }
        }
    }
}

void avx2_reflect_about_zero(cplx *amps, size_t size, int work_bits, int control) {
    const size_t block = size_t{1} << work_bits;
    const __m256d sign_both = _mm256_set1_pd(-0.0);
    for (size_t base = 0; base < size; base += block) {
        if (control >= 0 && ((base >> control) & 1u) == 0) continue;
        double *d = reinterpret_cast<double *>(amps + base);
        size_t i = 0;
        for (; i + 2 <= block; i += 2) {
            __m256d a = _mm256_loadu_pd(d + 2 * i);
            _mm256_storeu_pd(d + 2 * i, _mm256_xor_pd(a, sign_both));
        }
        for (; i < block; ++i) amps[base + i] = -amps[base + i];
        amps[base] = -amps[base];
    }
}

double avx2_norm_sq(const cplx *amps, size_t size) {
    const double *d = reinterpret_cast<const double *>(amps);
    const size_t n = 2 * size;
    const size_t chunk = 8192;
    double total = 0.0;
    size_t base = 0;
    for (; base + chunk <= n; base += chunk) {
        __m256d acc = _mm256_setzero_pd();
        for (size_t i = base; i < base + chunk; i += 4) {
            __m256d v = _mm256_loadu_pd(d + i);
            acc = _mm256_fmadd_pd(v, v, acc);
        }
        double lanes[4];
        _mm256_storeu_pd(lanes, acc);
        total += (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    }
    double tail = 0.0;
    for (size_t i = base; i < n; ++i) tail += d[i] * d[i];
    return total + tail;
}

} // namespace

const KernelTable &avx2_table() {
    static const KernelTable table = {
        "avx2",          avx2_apply_su2,           avx2_apply_phase,
        avx2_apply_sign_table, avx2_reflect_about_zero, avx2_norm_sq,
    };
    return table;
}

} // namespace qsmooth::kernels

#endif
