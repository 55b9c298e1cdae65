// AVX2 backend. Compiled with -mavx2 and only dispatched after a runtime CPU
// check. Evaluation orders match kernels_scalar.cpp exactly; see kernels.hpp.

#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)

#include "tvmerge/kernels.hpp"

#include <immintrin.h>

namespace tvmerge::kernels {

namespace {

void axpy_f32_avx2(const float * a, const float * b, double s, float * out, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d ad = _mm256_cvtps_pd(_mm_loadu_ps(a + i));
        __m256d bd = _mm256_cvtps_pd(_mm_loadu_ps(b + i));
        __m256d r = _mm256_add_pd(ad, _mm256_mul_pd(vs, bd));
        _mm_storeu_ps(out + i, _mm256_cvtpd_ps(r));
    }
    for (std::size_t i = n4; i < n; ++i) {
        out[i] = static_cast<float>(static_cast<double>(a[i]) + s * static_cast<double>(b[i]));
    }
}

void accum_f32_avx2(double * acc, const float * x, double s, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d xd = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        __m256d ad = _mm256_loadu_pd(acc + i);
        _mm256_storeu_pd(acc + i, _mm256_add_pd(ad, _mm256_mul_pd(vs, xd)));
    }
    for (std::size_t i = n4; i < n; ++i) {
        acc[i] += s * static_cast<double>(x[i]);
    }
}

void widen_f32_avx2(const float * x, double * acc, std::size_t n) {
    std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        _mm256_storeu_pd(acc + i, _mm256_cvtps_pd(_mm_loadu_ps(x + i)));
    }
    for (std::size_t i = n4; i < n; ++i) {
        acc[i] = static_cast<double>(x[i]);
    }
}

void narrow_f64_avx2(const double * acc, float * out, std::size_t n) {
    std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        _mm_storeu_ps(out + i, _mm256_cvtpd_ps(_mm256_loadu_pd(acc + i)));
    }
    for (std::size_t i = n4; i < n; ++i) {
        out[i] = static_cast<float>(acc[i]);
    }
}

double dot_f64_avx2(const double * a, const double * b, std::size_t n) {
    __m256d lo = _mm256_setzero_pd(); // lanes 0..3
    __m256d hi = _mm256_setzero_pd(); // lanes 4..7
    std::size_t n8 = n - n % 8;
    for (std::size_t i = 0; i < n8; i += 8) {
        lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        hi = _mm256_add_pd(hi, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    double lane[8];
    _mm256_storeu_pd(lane + 0, lo);
    _mm256_storeu_pd(lane + 4, hi);
    for (std::size_t m = 0; n8 + m < n; ++m) {
        lane[m] += a[n8 + m] * b[n8 + m];
    }
    return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + ((lane[4] + lane[5]) + (lane[6] + lane[7]));
}

void matmul_f64_avx2(const double * a, const double * w, std::size_t rows, std::size_t inner,
                     std::size_t cols, double * acc) {
    std::size_t c4 = cols - cols % 4;
    for (std::size_t r = 0; r < rows; ++r) {
        const double * arow = a + r * inner;
        double * crow = acc + r * cols;
        for (std::size_t i = 0; i < inner; ++i) {
            const __m256d v = _mm256_set1_pd(arow[i]);
            const double * wrow = w + i * cols;
            for (std::size_t c = 0; c < c4; c += 4) {
                __m256d cur = _mm256_loadu_pd(crow + c);
                _mm256_storeu_pd(crow + c, _mm256_add_pd(cur, _mm256_mul_pd(v, _mm256_loadu_pd(wrow + c))));
            }
            for (std::size_t c = c4; c < cols; ++c) {
                crow[c] += arow[i] * wrow[c];
            }
        }
    }
}

void matmul_tn_f64_avx2(const double * a, const double * g, std::size_t rows, std::size_t inner,
                        std::size_t cols, double * acc) {
    std::size_t c4 = cols - cols % 4;
    for (std::size_t r = 0; r < rows; ++r) {
        const double * arow = a + r * inner;
        const double * grow = g + r * cols;
        for (std::size_t i = 0; i < inner; ++i) {
            const __m256d v = _mm256_set1_pd(arow[i]);
            double * crow = acc + i * cols;
            for (std::size_t c = 0; c < c4; c += 4) {
                __m256d cur = _mm256_loadu_pd(crow + c);
                _mm256_storeu_pd(crow + c, _mm256_add_pd(cur, _mm256_mul_pd(v, _mm256_loadu_pd(grow + c))));
            }
            for (std::size_t c = c4; c < cols; ++c) {
                crow[c] += arow[i] * grow[c];
            }
        }
    }
}

} // namespace

const ops * avx2_ops_impl() {
    static const ops table = {
        "avx2",
        axpy_f32_avx2,
        accum_f32_avx2,
        widen_f32_avx2,
        narrow_f64_avx2,
        dot_f64_avx2,
        matmul_f64_avx2,
        matmul_tn_f64_avx2,
    };
    return &table;
}

} // namespace tvmerge::kernels

#endif
