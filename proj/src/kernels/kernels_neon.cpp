// NEON backend (aarch64, where f64 NEON arithmetic is baseline). Evaluation
// orders match kernels_scalar.cpp exactly; see kernels.hpp.

#if defined(__aarch64__) && defined(__ARM_NEON)

#include "tvmerge/kernels.hpp"

#include <arm_neon.h>

namespace tvmerge::kernels {

namespace {

void axpy_f32_neon(const float * a, const float * b, double s, float * out, std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t n2 = n - n % 2;
    for (std::size_t i = 0; i < n2; i += 2) {
        float64x2_t ad = vcvt_f64_f32(vld1_f32(a + i));
        float64x2_t bd = vcvt_f64_f32(vld1_f32(b + i));
        float64x2_t r = vaddq_f64(ad, vmulq_f64(vs, bd));
        vst1_f32(out + i, vcvt_f32_f64(r));
    }
    for (std::size_t i = n2; i < n; ++i) {
        out[i] = static_cast<float>(static_cast<double>(a[i]) + s * static_cast<double>(b[i]));
    }
}

void accum_f32_neon(double * acc, const float * x, double s, std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t n2 = n - n % 2;
    for (std::size_t i = 0; i < n2; i += 2) {
        float64x2_t xd = vcvt_f64_f32(vld1_f32(x + i));
        float64x2_t ad = vld1q_f64(acc + i);
        vst1q_f64(acc + i, vaddq_f64(ad, vmulq_f64(vs, xd)));
    }
    for (std::size_t i = n2; i < n; ++i) {
        acc[i] += s * static_cast<double>(x[i]);
    }
}

void widen_f32_neon(const float * x, double * acc, std::size_t n) {
    std::size_t n2 = n - n % 2;
    for (std::size_t i = 0; i < n2; i += 2) {
        vst1q_f64(acc + i, vcvt_f64_f32(vld1_f32(x + i)));
    }
    for (std::size_t i = n2; i < n; ++i) {
        acc[i] = static_cast<double>(x[i]);
    }
}

void narrow_f64_neon(const double * acc, float * out, std::size_t n) {
    std::size_t n2 = n - n % 2;
    for (std::size_t i = 0; i < n2; i += 2) {
        vst1_f32(out + i, vcvt_f32_f64(vld1q_f64(acc + i)));
    }
    for (std::size_t i = n2; i < n; ++i) {
        out[i] = static_cast<float>(acc[i]);
    }
}

double dot_f64_neon(const double * a, const double * b, std::size_t n) {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    float64x2_t acc45 = vdupq_n_f64(0.0);
    float64x2_t acc67 = vdupq_n_f64(0.0);
    std::size_t n8 = n - n % 8;
    for (std::size_t i = 0; i < n8; i += 8) {
        acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i + 0), vld1q_f64(b + i + 0)));
        acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
        acc45 = vaddq_f64(acc45, vmulq_f64(vld1q_f64(a + i + 4), vld1q_f64(b + i + 4)));
        acc67 = vaddq_f64(acc67, vmulq_f64(vld1q_f64(a + i + 6), vld1q_f64(b + i + 6)));
    }
    double lane[8];
    vst1q_f64(lane + 0, acc01);
    vst1q_f64(lane + 2, acc23);
    vst1q_f64(lane + 4, acc45);
    vst1q_f64(lane + 6, acc67);
    for (std::size_t m = 0; n8 + m < n; ++m) {
        lane[m] += a[n8 + m] * b[n8 + m];
    }
    return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + ((lane[4] + lane[5]) + (lane[6] + lane[7]));
}

void matmul_f64_neon(const double * a, const double * w, std::size_t rows, std::size_t inner,
                     std::size_t cols, double * acc) {
    std::size_t c2 = cols - cols % 2;
    for (std::size_t r = 0; r < rows; ++r) {
        const double * arow = a + r * inner;
        double * crow = acc + r * cols;
        for (std::size_t i = 0; i < inner; ++i) {
            const float64x2_t v = vdupq_n_f64(arow[i]);
            const double * wrow = w + i * cols;
            for (std::size_t c = 0; c < c2; c += 2) {
                float64x2_t cur = vld1q_f64(crow + c);
                vst1q_f64(crow + c, vaddq_f64(cur, vmulq_f64(v, vld1q_f64(wrow + c))));
            }
            for (std::size_t c = c2; c < cols; ++c) {
                crow[c] += arow[i] * wrow[c];
            }
        }
    }
}

void matmul_tn_f64_neon(const double * a, const double * g, std::size_t rows, std::size_t inner,
                        std::size_t cols, double * acc) {
    std::size_t c2 = cols - cols % 2;
    for (std::size_t r = 0; r < rows; ++r) {
        const double * arow = a + r * inner;
        const double * grow = g + r * cols;
        for (std::size_t i = 0; i < inner; ++i) {
            const float64x2_t v = vdupq_n_f64(arow[i]);
            double * crow = acc + i * cols;
            for (std::size_t c = 0; c < c2; c += 2) {
                float64x2_t cur = vld1q_f64(crow + c);
                vst1q_f64(crow + c, vaddq_f64(cur, vmulq_f64(v, vld1q_f64(grow + c))));
            }
            for (std::size_t c = c2; c < cols; ++c) {
                crow[c] += arow[i] * grow[c];
            }
        }
    }
}

} // namespace

const ops * neon_ops_impl() {
    static const ops table = {
        "neon",
        axpy_f32_neon,
        accum_f32_neon,
        widen_f32_neon,
        narrow_f64_neon,
        dot_f64_neon,
        matmul_f64_neon,
        matmul_tn_f64_neon,
    };
    return &table;
}

} // namespace tvmerge::kernels

#endif
