#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "concentra/errors.hpp"

namespace concentra {

// A labeled point in index space (here usually 2-D: CR3, HHI).
struct FeaturePoint {
    std::string label;
    std::vector<double> coords;
};

enum class FeatureScaling {
    None,   // cluster on raw coordinates (the published baricenters are
            // raw coordinate means, so this is the default)
    ZScore, // per-dimension standardization before clustering
};

struct KMeansConfig {
    int k = 2;
    int max_iterations = 100;
    // Centroid movement below which a run counts as converged once the
    // assignment has stopped changing.
    double convergence_tol = 1e-9;
    int restarts = 100;
    std::uint64_t seed = 0;
    FeatureScaling scaling = FeatureScaling::None;
};

struct ClusteringResult {
    // Reindexed by ascending first coordinate; each centroid is the
    // coordinate-wise mean of its members (in original coordinates).
    std::vector<std::vector<double>> centroids;
    std::map<std::string, int> assignment;
    double within_sse = 0.0;
    int iterations = 0;
};

// Lloyd iteration with deterministic seeding: restart 0 uses farthest-first
// from the point of largest norm, later restarts sample k distinct points
// with a splitmix64 stream derived from (seed, restart). The minimum-SSE
// run wins, ties to the lowest restart index. Fully deterministic for a
// fixed config, independent of input order.
//
// With ZScore scaling the nearest-centroid relation is evaluated in scaled
// space while reported centroids remain raw member means.
ClusteringResult kmeans(const std::vector<FeaturePoint>& points,
                        const KMeansConfig& config);

// Member lists per cluster, sorted by label; cluster order follows the
// canonical centroid order.
struct ClusterSummary {
    struct Group {
        int index = 0;
        std::vector<std::string> members;
        std::vector<double> centroid;
    };
    std::vector<Group> groups;
    double within_sse = 0.0;
    int iterations = 0;
};

// Throws MismatchedInputs when result was not produced from points.
ClusterSummary summarize_clusters(const ClusteringResult& result,
                                  const std::vector<FeaturePoint>& points);

} // namespace concentra
