#include "concentra/kernels.hpp"

#include <atomic>

namespace concentra::kernels {

namespace {

std::atomic<bool> g_force_scalar{false};

bool detect_avx2() {
#ifdef CONCENTRA_HAVE_AVX2_BACKEND
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

inline bool use_avx2() {
    static const bool supported = detect_avx2();
    return supported && !g_force_scalar.load(std::memory_order_relaxed);
}

} // namespace

bool avx2_supported() { return detect_avx2(); }

void set_force_scalar(bool force) {
    g_force_scalar.store(force, std::memory_order_relaxed);
}

const char* active_backend() { return use_avx2() ? "avx2" : "scalar"; }

#ifdef CONCENTRA_HAVE_AVX2_BACKEND
#define CONCENTRA_DISPATCH(fn, ...) \
    return use_avx2() ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define CONCENTRA_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double sum(std::span<const double> v) { CONCENTRA_DISPATCH(sum, v); }

double sum_squares(std::span<const double> v) {
    CONCENTRA_DISPATCH(sum_squares, v);
}

double sum_cubes(std::span<const double> v) {
    CONCENTRA_DISPATCH(sum_cubes, v);
}

double sum_quads(std::span<const double> v) {
    CONCENTRA_DISPATCH(sum_quads, v);
}

double dot(std::span<const double> a, std::span<const double> b) {
    CONCENTRA_DISPATCH(dot, a, b);
}

double rank_weighted_sum(std::span<const double> v) {
    CONCENTRA_DISPATCH(rank_weighted_sum, v);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    CONCENTRA_DISPATCH(squared_distance, a, b);
}

#undef CONCENTRA_DISPATCH

} // namespace concentra::kernels
