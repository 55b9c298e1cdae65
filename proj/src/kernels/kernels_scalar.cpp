#include "tvmerge/kernels.hpp"

namespace tvmerge::kernels {

namespace {

void axpy_f32_scalar(const float * a, const float * b, double s, float * out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<float>(static_cast<double>(a[i]) + s * static_cast<double>(b[i]));
    }
}

void accum_f32_scalar(double * acc, const float * x, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] += s * static_cast<double>(x[i]);
    }
}

void widen_f32_scalar(const float * x, double * acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] = static_cast<double>(x[i]);
    }
}

void narrow_f64_scalar(const double * acc, float * out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<float>(acc[i]);
    }
}

double dot_f64_scalar(const double * a, const double * b, std::size_t n) {
    double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t n8 = n - n % 8;
    for (std::size_t i = 0; i < n8; i += 8) {
        for (std::size_t j = 0; j < 8; ++j) {
            lane[j] += a[i + j] * b[i + j];
        }
    }
    for (std::size_t m = 0; n8 + m < n; ++m) {
        lane[m] += a[n8 + m] * b[n8 + m];
    }
    return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + ((lane[4] + lane[5]) + (lane[6] + lane[7]));
}

void matmul_f64_scalar(const double * a, const double * w, std::size_t rows, std::size_t inner,
                       std::size_t cols, double * acc) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double * arow = a + r * inner;
        double * crow = acc + r * cols;
        for (std::size_t i = 0; i < inner; ++i) {
            const double v = arow[i];
            const double * wrow = w + i * cols;
            for (std::size_t c = 0; c < cols; ++c) {
                crow[c] += v * wrow[c];
            }
        }
    }
}

void matmul_tn_f64_scalar(const double * a, const double * g, std::size_t rows, std::size_t inner,
                          std::size_t cols, double * acc) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double * arow = a + r * inner;
        const double * grow = g + r * cols;
        for (std::size_t i = 0; i < inner; ++i) {
            const double v = arow[i];
            double * crow = acc + i * cols;
            for (std::size_t c = 0; c < cols; ++c) {
                crow[c] += v * grow[c];
            }
        }
    }
}

} // namespace

const ops & scalar_ops() {
    static const ops table = {
        "scalar",
        axpy_f32_scalar,
        accum_f32_scalar,
        widen_f32_scalar,
        narrow_f64_scalar,
        dot_f64_scalar,
        matmul_f64_scalar,
        matmul_tn_f64_scalar,
    };
    return table;
}

} // namespace tvmerge::kernels
