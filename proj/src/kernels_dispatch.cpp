#include <cstdlib>
#include <string>

#include "nhols/error.hpp"
#include "nhols/kernels.hpp"

namespace nhols::kernels {
namespace {

const Table* g_active = nullptr;

const Table* choose_initial() {
    if (const char* env = std::getenv("NHOLS_KERNEL")) {
        const std::string v = env;
        if (v == "scalar") return &scalar_table();
        if (v == "avx2") {
            if (const Table* t = avx2_table()) return t;
            throw InvalidParam("NHOLS_KERNEL=avx2 but AVX2/FMA is unavailable");
        }
        if (!v.empty() && v != "auto")
            throw InvalidParam("NHOLS_KERNEL must be scalar|avx2|auto");
    }
    if (const Table* t = avx2_table()) return t;
    return &scalar_table();
}

}  // namespace

const Table& active() {
    if (!g_active) g_active = choose_initial();
    return *g_active;
}

Backend active_backend() {
    return &active() == &scalar_table() ? Backend::scalar : Backend::avx2;
}

void set_backend(Backend b) {
    if (b == Backend::scalar) {
        g_active = &scalar_table();
        return;
    }
    const Table* t = avx2_table();
    if (!t) throw InvalidParam("AVX2/FMA kernels unavailable on this CPU/build");
    g_active = t;
}

std::string backend_name(Backend b) {
    return b == Backend::scalar ? "scalar" : "avx2";
}

}  // namespace nhols::kernels
