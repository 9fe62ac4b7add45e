#include "concentra/stats.hpp"

#include <algorithm>
#include <cmath>

#include "concentra/kernels.hpp"

namespace concentra {

namespace {

// Median of a sorted range.
double sorted_median(std::span<const double> sorted) {
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

double centered_sum_of_products(std::span<const double> x,
                                std::span<const double> y, double mx, double my) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += (x[i] - mx) * (y[i] - my);
    return acc;
}

} // namespace

double mean(std::span<const double> series) {
    if (series.empty())
        throw EmptySeries("mean of an empty series");
    return kernels::sum(series) / static_cast<double>(series.size());
}

double sample_std(std::span<const double> series) {
    if (series.size() < 2)
        throw TooFewPoints("sample_std requires at least 2 points");
    const double m = mean(series);
    double ss = 0.0;
    for (double x : series) {
        const double d = x - m;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(series.size() - 1));
}

double coefficient_of_variation(std::span<const double> series) {
    const double sd = sample_std(series);
    const double m = mean(series);
    if (!(m > 0.0))
        throw NonPositiveMeanForCV("cv undefined for mean <= 0");
    return sd / m;
}

DescriptiveSummary describe(std::span<const double> series) {
    DescriptiveSummary summary;
    summary.n = series.size();
    summary.mean = mean(series);
    if (series.size() >= 2) {
        summary.sample_std = sample_std(series);
        if (summary.mean > 0.0) summary.cv = *summary.sample_std / summary.mean;
    }
    return summary;
}

FiveNumberSummary five_number(std::span<const LabeledValue> series) {
    if (series.size() < 3)
        throw TooFewPoints("five_number requires at least 3 points");

    std::vector<double> sorted;
    sorted.reserve(series.size());
    for (const auto& lv : series) sorted.push_back(lv.value);
    std::sort(sorted.begin(), sorted.end());

    const std::size_t n = sorted.size();
    const std::size_t half = n / 2;
    // Median-inclusive halves for odd n.
    const std::size_t lower_len = n % 2 == 1 ? half + 1 : half;
    const std::span<const double> view(sorted);

    FiveNumberSummary summary;
    summary.min = sorted.front();
    summary.max = sorted.back();
    summary.median = sorted_median(view);
    summary.lower_hinge = sorted_median(view.first(lower_len));
    summary.upper_hinge = sorted_median(view.last(lower_len));
    summary.iqr = summary.upper_hinge - summary.lower_hinge;
    summary.lower_fence = summary.lower_hinge - 1.5 * summary.iqr;
    summary.upper_fence = summary.upper_hinge + 1.5 * summary.iqr;

    for (const auto& lv : series)
        if (lv.value < summary.lower_fence || lv.value > summary.upper_fence)
            summary.outliers.push_back(lv);
    std::sort(summary.outliers.begin(), summary.outliers.end(),
              [](const LabeledValue& a, const LabeledValue& b) {
                  if (a.value != b.value) return a.value < b.value;
                  return a.label < b.label;
              });
    return summary;
}

double pearson_r2(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw LengthMismatch("series lengths differ");
    if (x.size() < 3)
        throw TooFewPoints("pearson_r2 requires at least 3 pairs");

    const double mx = mean(x);
    const double my = mean(y);
    const double sxx = centered_sum_of_products(x, x, mx, mx);
    const double syy = centered_sum_of_products(y, y, my, my);
    if (sxx == 0.0 || syy == 0.0)
        throw ZeroVariance("pearson_r2 requires nonzero variance in both series");
    const double sxy = centered_sum_of_products(x, y, mx, my);
    const double r2 = (sxy * sxy) / (sxx * syy);
    return std::min(r2, 1.0);
}

RegressionFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw LengthMismatch("series lengths differ");
    // Two points define an exact fit; pearson_r2 proper keeps its n >= 3
    // requirement.
    if (x.size() < 2)
        throw TooFewPoints("ols_fit requires at least 2 pairs");

    const double mx = mean(x);
    const double my = mean(y);
    const double sxx = centered_sum_of_products(x, x, mx, mx);
    const double syy = centered_sum_of_products(y, y, my, my);
    if (sxx == 0.0 || syy == 0.0)
        throw ZeroVariance("ols_fit requires nonzero variance in both series");
    const double sxy = centered_sum_of_products(x, y, mx, my);

    RegressionFit fit;
    fit.n = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = std::min((sxy * sxy) / (sxx * syy), 1.0);
    return fit;
}

double column_median(std::span<const double> values) {
    if (values.empty())
        throw EmptySeries("median of an empty series");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted_median(sorted);
}

} // namespace concentra
