#include <cstdlib>
#include <string_view>

#include "lrnewton/simd/kernels.hpp"

namespace lrn::simd {

#if defined(LRN_HAVE_AVX2_KERNELS)
namespace detail {
extern const KernelTable kAvx2Table;
}
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(LRN_HAVE_AVX2_KERNELS)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::kAvx2Table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
    static const KernelTable& table = [] () -> const KernelTable& {
        const char* env = std::getenv("LRN_SIMD");
        if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
        if (const KernelTable* t = avx2_kernels()) return *t;
        return scalar_kernels();
    }();
    return table;
}

}  // namespace lrn::simd
