#include "bsp/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace bsp::kernels {

const Ops& active() {
    static const Ops* picked = [] {
        const char* env = std::getenv("BSP_SIMD");
        if (env != nullptr) {
            if (std::strcmp(env, "scalar") == 0) return &scalar();
            if (std::strcmp(env, "avx2") == 0 && have_avx2()) return &avx2();
        }
        return have_avx2() ? &avx2() : &scalar();
    }();
    return *picked;
}

}  // namespace bsp::kernels
