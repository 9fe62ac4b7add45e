// AVX2 variants of the reduction kernels. This translation unit is compiled
// with -mavx2; it must only be entered after a runtime CPUID check.
//
// No FMA contraction here: mul followed by add, so the only difference from
// the scalar reference is the association order of the final sums.

#include "concentra/kernels.hpp"

#ifdef CONCENTRA_HAVE_AVX2_BACKEND

#include <immintrin.h>

namespace concentra::kernels::avx2 {

namespace {

// Lane 0 + lane 1 + lane 2 + lane 3, in order.
inline double hsum(__m256d acc) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

} // namespace

double sum(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(&v[i]));
    double total = hsum(acc);
    for (; i < n; ++i) total += v[i];
    return total;
}

double sum_squares(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(&v[i]);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(x, x));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += v[i] * v[i];
    return total;
}

double sum_cubes(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(&v[i]);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(x, x), x));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += (v[i] * v[i]) * v[i];
    return total;
}

double sum_quads(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(&v[i]);
        const __m256d sq = _mm256_mul_pd(x, x);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(sq, sq));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double sq = v[i] * v[i];
        total += sq * sq;
    }
    return total;
}

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(
            acc, _mm256_mul_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i])));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

double rank_weighted_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    __m256d rank = _mm256_set_pd(4.0, 3.0, 2.0, 1.0);
    const __m256d step = _mm256_set1_pd(4.0);
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(rank, _mm256_loadu_pd(&v[i])));
        rank = _mm256_add_pd(rank, step);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += static_cast<double>(i + 1) * v[i];
    return total;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

} // namespace concentra::kernels::avx2

#endif // CONCENTRA_HAVE_AVX2_BACKEND
