#include "gabor/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "gabor/errors.hpp"

namespace gabor::kernels {

namespace {

bool avx2_usable() {
#if defined(__x86_64__)
    return avx2_table.name != nullptr && __builtin_cpu_supports("avx2") &&
           __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table* pick_auto() {
#if defined(__x86_64__)
    if (avx2_usable()) return &avx2_table;
#endif
    return &scalar_table;
}

const Table* initial_table() {
    if (const char* env = std::getenv("GABOR_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_table;
#if defined(__x86_64__)
        if (want == "avx2" && avx2_usable()) return &avx2_table;
#endif
        // unknown or unavailable: fall through to auto silently
    }
    return pick_auto();
}

std::atomic<const Table*>& slot() {
    static std::atomic<const Table*> t{initial_table()};
    return t;
}

} // namespace

const Table& active() { return *slot().load(std::memory_order_acquire); }

void set_backend(std::string_view name) {
    if (name == "auto") {
        slot().store(pick_auto(), std::memory_order_release);
        return;
    }
    if (name == "scalar") {
        slot().store(&scalar_table, std::memory_order_release);
        return;
    }
#if defined(__x86_64__)
    if (name == "avx2") {
        if (!avx2_usable()) throw usage_error("avx2 kernels unavailable on this cpu");
        slot().store(&avx2_table, std::memory_order_release);
        return;
    }
#endif
    throw usage_error("unknown kernel backend: " + std::string(name));
}

} // namespace gabor::kernels
