#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace tvmerge::kernels {

// Dense float kernels behind every merge formula and the MLP forward/backward
// passes. Scalar, AVX2 and NEON backends implement the same fixed evaluation
// order, so every backend produces bitwise-identical results:
//
//   - elementwise kernels compute each coordinate in double and round to f32
//     exactly once; no FMA contraction anywhere (enforced by -ffp-contract=off);
//   - dot_f64 accumulates into eight lanes, lane j taking elements 8t+j (tail
//     element m of the last partial block goes to lane m), combined as
//     ((l0+l1)+(l2+l3)) + ((l4+l5)+(l6+l7));
//   - matmul kernels accumulate each output element over the reduction index
//     in ascending order.
//
// The equivalence test suite asserts exact equality across backends; do not
// change an evaluation order in one backend only.
struct ops {
    const char * name;

    // out[i] = f32(double(a[i]) + s * double(b[i]))
    void (*axpy_f32)(const float * a, const float * b, double s, float * out, std::size_t n);
    // acc[i] += s * double(x[i])
    void (*accum_f32)(double * acc, const float * x, double s, std::size_t n);
    // acc[i] = double(x[i])
    void (*widen_f32)(const float * x, double * acc, std::size_t n);
    // out[i] = f32(acc[i])
    void (*narrow_f64)(const double * acc, float * out, std::size_t n);
    // eight-lane blocked dot product (order documented above)
    double (*dot_f64)(const double * a, const double * b, std::size_t n);
    // acc[r*cols + c] += sum_i a[r*inner + i] * w[i*cols + c]
    void (*matmul_f64)(const double * a, const double * w, std::size_t rows, std::size_t inner,
                       std::size_t cols, double * acc);
    // acc[i*cols + c] += sum_r a[r*inner + i] * g[r*cols + c]   (a transposed)
    void (*matmul_tn_f64)(const double * a, const double * g, std::size_t rows, std::size_t inner,
                          std::size_t cols, double * acc);
};

const ops & scalar_ops();
const ops * avx2_ops(); // nullptr when unsupported by the build or the CPU
const ops * neon_ops();

// Backend used by all callers. Defaults to the best available; the
// TVMERGE_KERNELS environment variable ("scalar", "avx2", "neon") overrides.
const ops & active();

// Select a backend by name; returns false (and leaves the selection
// unchanged) when it is not available. Not thread-safe; call at startup.
bool set_backend(std::string_view name);

// All backends usable on this machine, scalar first.
std::vector<const ops *> available();

} // namespace tvmerge::kernels
