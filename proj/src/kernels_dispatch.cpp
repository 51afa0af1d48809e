#include "hedgemap/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace hedgemap::kernels {

bool avx2_available() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

const Ops* resolve_default() {
    if (const char* env = std::getenv("HEDGEMAP_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return &avx2_ops();
    }
    return avx2_available() ? &avx2_ops() : &scalar_ops();
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& active_ops() {
    const Ops* ops = g_active.load(std::memory_order_acquire);
    if (!ops) {
        ops = resolve_default();
        g_active.store(ops, std::memory_order_release);
    }
    return *ops;
}

bool set_active_ops(const char* name) {
    if (std::strcmp(name, "scalar") == 0) {
        g_active.store(&scalar_ops(), std::memory_order_release);
        return true;
    }
    if (std::strcmp(name, "avx2") == 0) {
        if (!avx2_available()) return false;
        g_active.store(&avx2_ops(), std::memory_order_release);
        return true;
    }
    return false;
}

}  // namespace hedgemap::kernels
