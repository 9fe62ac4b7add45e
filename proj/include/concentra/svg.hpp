#pragma once

#include <string>
#include <vector>

#include "concentra/cluster.hpp"
#include "concentra/stats.hpp"

namespace concentra {

// Self-contained static SVG markup: labeled scatter points plus centroid
// crosses. Intended for 2-D feature points; higher dimensions use the
// first two coordinates.
std::string scatter_svg(const std::vector<FeaturePoint>& points,
                        const std::vector<std::vector<double>>& centroids,
                        const std::string& title, const std::string& x_label,
                        const std::string& y_label);

// Tukey boxplot with whiskers drawn at the outlier fences and labeled
// outlier markers.
std::string boxplot_svg(const FiveNumberSummary& summary,
                        const std::string& title);

} // namespace concentra
