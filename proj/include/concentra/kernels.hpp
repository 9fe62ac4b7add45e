#pragma once

#include <cstddef>
#include <span>

// Reduction kernels shared by the index, stats and clustering code.
//
// Every kernel exists twice: a scalar reference implementation (the
// semantics) and, on x86-64, an AVX2 variant compiled in its own
// translation unit with -mavx2. The public functions dispatch at runtime
// based on CPUID; set_force_scalar() pins the scalar path, which the
// equivalence tests use to compare both backends on the same machine.
//
// The vectorized variants reassociate the additions, so results may differ
// from the scalar reference in the last few ulps. Callers treat kernel
// output as accurate to ~1e-13 relative, which every tolerance in this
// project comfortably absorbs.

namespace concentra::kernels {

namespace scalar {

double sum(std::span<const double> v);
double sum_squares(std::span<const double> v);
double sum_cubes(std::span<const double> v);
double sum_quads(std::span<const double> v);
// dot(a, b) with a.size() == b.size(); unchecked.
double dot(std::span<const double> a, std::span<const double> b);
// sum of (i + 1) * v[i] over 0-based i, i.e. rank-weighted with ranks 1..n.
double rank_weighted_sum(std::span<const double> v);
double squared_distance(std::span<const double> a, std::span<const double> b);

} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CONCENTRA_HAVE_AVX2_BACKEND 1
namespace avx2 {

double sum(std::span<const double> v);
double sum_squares(std::span<const double> v);
double sum_cubes(std::span<const double> v);
double sum_quads(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double rank_weighted_sum(std::span<const double> v);
double squared_distance(std::span<const double> a, std::span<const double> b);

} // namespace avx2
#endif

// Dispatched entry points.
double sum(std::span<const double> v);
double sum_squares(std::span<const double> v);
double sum_cubes(std::span<const double> v);
double sum_quads(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
double rank_weighted_sum(std::span<const double> v);
double squared_distance(std::span<const double> a, std::span<const double> b);

// "avx2" or "scalar", after force-scalar is applied.
const char* active_backend();
// True if the CPU supports the AVX2 backend (regardless of forcing).
bool avx2_supported();
// Pin the dispatched entry points to the scalar reference implementation.
void set_force_scalar(bool force);

} // namespace concentra::kernels
