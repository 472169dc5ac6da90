#include "rfl/kernels/dense.hpp"

#include <stdexcept>

namespace rfl::kernels {

#if RFL_KERNELS_AVX2
const DenseOps& avx2_ops_impl();

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const DenseOps& avx2_ops() {
    if (!avx2_available()) throw std::runtime_error("kernels: avx2 not supported on this CPU");
    return avx2_ops_impl();
}
#else
bool avx2_available() { return false; }

const DenseOps& avx2_ops() {
    throw std::runtime_error("kernels: avx2 backend not compiled in");
}
#endif

namespace {

const DenseOps* pick(Backend backend) {
    switch (backend) {
        case Backend::scalar: return &scalar_ops();
        case Backend::avx2: return &avx2_ops();
        case Backend::automatic: return avx2_available() ? &avx2_ops() : &scalar_ops();
    }
    return &scalar_ops();
}

const DenseOps*& active_slot() {
    static const DenseOps* active = pick(Backend::automatic);
    return active;
}

} // namespace

void select_backend(Backend backend) { active_slot() = pick(backend); }

const DenseOps& active_ops() { return *active_slot(); }

std::string active_backend_name() { return active_ops().name; }

} // namespace rfl::kernels
