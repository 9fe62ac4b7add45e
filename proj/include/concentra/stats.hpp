#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "concentra/errors.hpp"

namespace concentra {

struct DescriptiveSummary {
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> sample_std; // n-1 divisor; needs n >= 2
    std::optional<double> cv;         // sample_std / mean; needs mean > 0
};

double mean(std::span<const double> series);              // EmptySeries
double sample_std(std::span<const double> series);        // TooFewPoints if n < 2
// sample_std / mean; TooFewPoints, NonPositiveMeanForCV.
double coefficient_of_variation(std::span<const double> series);

// Non-throwing composition of the three: absent fields stay unset.
DescriptiveSummary describe(std::span<const double> series);

struct LabeledValue {
    std::string label;
    double value = 0.0;
};

// Tukey five-number summary. Hinges are medians of the lower/upper halves
// with the median included in each half for odd n; this convention is
// load-bearing for the cross-country outlier analysis. Fences sit at
// hinge -/+ 1.5*IQR; outliers are strictly outside the fences, sorted by
// (value, label).
struct FiveNumberSummary {
    double min = 0.0;
    double lower_hinge = 0.0;
    double median = 0.0;
    double upper_hinge = 0.0;
    double max = 0.0;
    double iqr = 0.0;
    double lower_fence = 0.0;
    double upper_fence = 0.0;
    std::vector<LabeledValue> outliers;
};

FiveNumberSummary five_number(std::span<const LabeledValue> series); // n >= 3

// Squared Pearson correlation, in [0,1]. Requires n >= 3, equal lengths,
// nonzero variance on both sides.
double pearson_r2(std::span<const double> x, std::span<const double> y);

struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

// Simple least squares of y on x; r2 equals pearson_r2(x, y).
RegressionFit ols_fit(std::span<const double> x, std::span<const double> y);

// Midpoint of the two central order statistics for even n.
double column_median(std::span<const double> values); // EmptySeries

} // namespace concentra
