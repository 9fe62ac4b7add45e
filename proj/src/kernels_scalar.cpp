#include "concentra/kernels.hpp"

namespace concentra::kernels::scalar {

double sum(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
}

double sum_squares(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

double sum_cubes(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += (x * x) * x;
    return acc;
}

double sum_quads(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        const double sq = x * x;
        acc += sq * sq;
    }
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double rank_weighted_sum(std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        acc += static_cast<double>(i + 1) * v[i];
    return acc;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

} // namespace concentra::kernels::scalar
