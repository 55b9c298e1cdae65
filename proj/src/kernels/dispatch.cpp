#include "tvmerge/kernels.hpp"

#include <cstdlib>

namespace tvmerge::kernels {

#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
const ops * avx2_ops_impl();
#endif
#if defined(__aarch64__) && defined(__ARM_NEON)
const ops * neon_ops_impl();
#endif

const ops * avx2_ops() {
#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) {
        return avx2_ops_impl();
    }
#endif
    return nullptr;
}

const ops * neon_ops() {
#if defined(__aarch64__) && defined(__ARM_NEON)
    return neon_ops_impl();
#else
    return nullptr;
#endif
}

namespace {

const ops * pick_default() {
    if (const char * env = std::getenv("TVMERGE_KERNELS")) {
        std::string_view want(env);
        if (want == "scalar") return &scalar_ops();
        if (want == "avx2" && avx2_ops()) return avx2_ops();
        if (want == "neon" && neon_ops()) return neon_ops();
        // unknown or unavailable request falls through to auto-selection
    }
    if (const ops * simd = avx2_ops()) return simd;
    if (const ops * simd = neon_ops()) return simd;
    return &scalar_ops();
}

const ops *& selected() {
    static const ops * current = pick_default();
    return current;
}

} // namespace

const ops & active() { return *selected(); }

bool set_backend(std::string_view name) {
    if (name == "scalar") {
        selected() = &scalar_ops();
        return true;
    }
    if (name == "avx2") {
        if (const ops * simd = avx2_ops()) {
            selected() = simd;
            return true;
        }
        return false;
    }
    if (name == "neon") {
        if (const ops * simd = neon_ops()) {
            selected() = simd;
            return true;
        }
        return false;
    }
    return false;
}

std::vector<const ops *> available() {
    std::vector<const ops *> out{&scalar_ops()};
    if (const ops * simd = avx2_ops()) out.push_back(simd);
    if (const ops * simd = neon_ops()) out.push_back(simd);
    return out;
}

} // namespace tvmerge::kernels
