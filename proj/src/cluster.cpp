#include "concentra/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "concentra/kernels.hpp"

namespace concentra {

namespace {

// Deterministic cross-platform PRNG for restart seeding.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

struct Workspace {
    std::vector<std::string> labels;          // canonical order
    std::vector<std::vector<double>> raw;     // aligned with labels
    std::vector<std::vector<double>> scaled;  // clustering space
    std::size_t n = 0;
    std::size_t dim = 0;
};

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
    return kernels::squared_distance(a, b);
}

// Canonical SSE: cluster means first, then one point-major accumulation
// pass in canonical point order. The total is invariant under cluster
// relabeling, so the brute-force oracle reproduces it bit for bit no
// matter how it numbers the groups.
double partition_sse(const std::vector<std::vector<double>>& pts,
                     const std::vector<int>& assign, int k) {
    const std::size_t dim = pts.empty() ? 0 : pts[0].size();
    std::vector<std::vector<double>> mean(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> count(k, 0);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        ++count[assign[p]];
        for (std::size_t d = 0; d < dim; ++d) mean[assign[p]][d] += pts[p][d];
    }
    for (int c = 0; c < k; ++c)
        if (count[c] > 0)
            for (std::size_t d = 0; d < dim; ++d)
                mean[c][d] /= static_cast<double>(count[c]);

    double total = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = pts[p][d] - mean[assign[p]][d];
            total += diff * diff;
        }
    }
    return total;
}

std::vector<std::vector<double>> cluster_means(
    const std::vector<std::vector<double>>& pts, const std::vector<int>& assign,
    int k) {
    const std::size_t dim = pts[0].size();
    std::vector<std::vector<double>> means(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        ++counts[assign[p]];
        for (std::size_t d = 0; d < dim; ++d) means[assign[p]][d] += pts[p][d];
    }
    for (int c = 0; c < k; ++c)
        if (counts[c] > 0)
            for (std::size_t d = 0; d < dim; ++d)
                means[c][d] /= static_cast<double>(counts[c]);
    return means;
}

std::vector<int> nearest_assignment(const std::vector<std::vector<double>>& pts,
                                    const std::vector<std::vector<double>>& centroids) {
    std::vector<int> assign(pts.size(), 0);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        int best = 0;
        double best_d = sqdist(pts[p], centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = sqdist(pts[p], centroids[c]);
            if (d < best_d) { // strict: ties stay with the lowest index
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        assign[p] = best;
    }
    return assign;
}

// Reseed each empty cluster with the point farthest from its current
// centroid, never stealing from a singleton cluster.
void repair_empty_clusters(const std::vector<std::vector<double>>& pts,
                           const std::vector<std::vector<double>>& centroids,
                           std::vector<int>& assign, int k) {
    std::vector<std::size_t> sizes(k, 0);
    for (int a : assign) ++sizes[a];
    for (int c = 0; c < k; ++c) {
        if (sizes[c] > 0) continue;
        std::size_t donor = pts.size();
        double donor_d = -1.0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            if (sizes[assign[p]] < 2) continue;
            const double d = sqdist(pts[p], centroids[assign[p]]);
            if (d > donor_d) {
                donor_d = d;
                donor = p;
            }
        }
        if (donor == pts.size()) continue; // k == n, all singletons
        --sizes[assign[donor]];
        assign[donor] = c;
        ++sizes[c];
    }
}

std::vector<std::vector<double>> farthest_first_init(
    const std::vector<std::vector<double>>& pts, int k) {
    const std::vector<double> origin(pts[0].size(), 0.0);
    std::size_t first = 0;
    double best = -1.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        const double d = sqdist(pts[p], origin);
        if (d > best) {
            best = d;
            first = p;
        }
    }

    std::vector<std::size_t> chosen = {first};
    while (chosen.size() < static_cast<std::size_t>(k)) {
        std::size_t pick = 0;
        double pick_d = -1.0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t c : chosen)
                nearest = std::min(nearest, sqdist(pts[p], pts[c]));
            if (nearest > pick_d) {
                pick_d = nearest;
                pick = p;
            }
        }
        chosen.push_back(pick);
    }

    std::vector<std::vector<double>> centroids;
    centroids.reserve(chosen.size());
    for (std::size_t c : chosen) centroids.push_back(pts[c]);
    return centroids;
}

std::vector<std::vector<double>> sampled_init(
    const std::vector<std::vector<double>>& pts, int k, SplitMix64& rng) {
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < k; ++j) {
        const std::size_t swap_with =
            static_cast<std::size_t>(j) + rng.below(idx.size() - j);
        std::swap(idx[j], idx[swap_with]);
    }
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    for (int j = 0; j < k; ++j) centroids.push_back(pts[idx[j]]);
    return centroids;
}

struct LloydRun {
    std::vector<int> assign;
    double sse = 0.0;
    int iterations = 0;
};

LloydRun lloyd(const std::vector<std::vector<double>>& pts,
               std::vector<std::vector<double>> centroids,
               const KMeansConfig& config) {
    const int k = config.k;
    std::vector<int> assign = nearest_assignment(pts, centroids);
    repair_empty_clusters(pts, centroids, assign, k);

    int iterations = 0;
    while (iterations < config.max_iterations) {
        ++iterations;
        const auto updated = cluster_means(pts, assign, k);
        double movement = 0.0;
        for (int c = 0; c < k; ++c)
            movement = std::max(movement, std::sqrt(sqdist(centroids[c], updated[c])));
        centroids = updated;

        auto next = nearest_assignment(pts, centroids);
        repair_empty_clusters(pts, centroids, next, k);
        if (next == assign && movement <= config.convergence_tol) break;
        assign = std::move(next);
    }

    LloydRun run;
    run.sse = partition_sse(pts, assign, k);
    run.assign = std::move(assign);
    run.iterations = iterations;
    return run;
}

Workspace make_workspace(const std::vector<FeaturePoint>& points,
                         const KMeansConfig& config) {
    if (points.empty())
        throw EmptyInput("kmeans requires at least one point");

    const std::size_t dim = points[0].coords.size();
    if (dim == 0)
        throw DimensionMismatch("points must have at least one coordinate");

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].label != points[b].label)
            return points[a].label < points[b].label;
        return points[a].coords < points[b].coords;
    });

    Workspace ws;
    ws.n = points.size();
    ws.dim = dim;
    std::set<std::string> seen;
    for (std::size_t i : order) {
        const auto& pt = points[i];
        if (pt.coords.size() != dim) {
            std::ostringstream msg;
            msg << "point " << pt.label << " has dimension " << pt.coords.size()
                << ", expected " << dim;
            throw DimensionMismatch(msg.str());
        }
        for (double c : pt.coords)
            if (!std::isfinite(c))
                throw DomainError("non-finite coordinate for point " + pt.label);
        if (!seen.insert(pt.label).second)
            throw DomainError("duplicate point label: " + pt.label);
        ws.labels.push_back(pt.label);
        ws.raw.push_back(pt.coords);
    }

    ws.scaled = ws.raw;
    if (config.scaling == FeatureScaling::ZScore) {
        for (std::size_t d = 0; d < dim; ++d) {
            double mean = 0.0;
            for (const auto& p : ws.raw) mean += p[d];
            mean /= static_cast<double>(ws.n);
            double var = 0.0;
            for (const auto& p : ws.raw) {
                const double diff = p[d] - mean;
                var += diff * diff;
            }
            var /= static_cast<double>(ws.n);
            const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
            for (std::size_t p = 0; p < ws.n; ++p)
                ws.scaled[p][d] = (ws.raw[p][d] - mean) / sd;
        }
    }
    return ws;
}

} // namespace

ClusteringResult kmeans(const std::vector<FeaturePoint>& points,
                        const KMeansConfig& config) {
    if (points.empty())
        throw EmptyInput("kmeans requires at least one point");
    if (config.k < 1)
        throw DomainError("kmeans requires k >= 1");
    if (config.max_iterations < 1 || config.restarts < 1)
        throw DomainError("max_iterations and restarts must be positive");
    if (static_cast<std::size_t>(config.k) > points.size()) {
        std::ostringstream msg;
        msg << "k=" << config.k << " exceeds number of points " << points.size();
        throw TooManyClusters(msg.str());
    }

    const Workspace ws = make_workspace(points, config);
    const int k = config.k;

    LloydRun best;
    bool have_best = false;
    for (int restart = 0; restart < config.restarts; ++restart) {
        std::vector<std::vector<double>> init;
        if (restart == 0) {
            init = farthest_first_init(ws.scaled, k);
        } else {
            SplitMix64 rng(config.seed ^
                           (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart)));
            init = sampled_init(ws.scaled, k, rng);
        }
        LloydRun run = lloyd(ws.scaled, std::move(init), config);
        if (!have_best || run.sse < best.sse) { // strict: ties keep earlier restart
            best = std::move(run);
            have_best = true;
        }
    }

    // Canonical cluster order: ascending raw centroid, then original index.
    const auto raw_means = cluster_means(ws.raw, best.assign, k);
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (raw_means[a] != raw_means[b]) return raw_means[a] < raw_means[b];
        return a < b;
    });
    std::vector<int> remap(k);
    for (int pos = 0; pos < k; ++pos) remap[order[pos]] = pos;

    std::vector<int> assign(ws.n);
    for (std::size_t p = 0; p < ws.n; ++p) assign[p] = remap[best.assign[p]];

    ClusteringResult result;
    result.centroids = cluster_means(ws.raw, assign, k);
    for (std::size_t p = 0; p < ws.n; ++p) result.assignment[ws.labels[p]] = assign[p];
    result.within_sse = partition_sse(ws.scaled, assign, k);
    result.iterations = best.iterations;
    return result;
}

ClusterSummary summarize_clusters(const ClusteringResult& result,
                                  const std::vector<FeaturePoint>& points) {
    if (result.assignment.size() != points.size())
        throw MismatchedInputs("result does not cover the given points");
    for (const auto& pt : points) {
        const auto it = result.assignment.find(pt.label);
        if (it == result.assignment.end())
            throw MismatchedInputs("no assignment for point " + pt.label);
        if (it->second < 0 ||
            static_cast<std::size_t>(it->second) >= result.centroids.size())
            throw MismatchedInputs("assignment index out of range for " + pt.label);
    }

    ClusterSummary summary;
    summary.within_sse = result.within_sse;
    summary.iterations = result.iterations;
    summary.groups.resize(result.centroids.size());
    for (std::size_t c = 0; c < result.centroids.size(); ++c) {
        summary.groups[c].index = static_cast<int>(c);
        summary.groups[c].centroid = result.centroids[c];
    }
    // std::map iteration gives members in ascending label order.
    for (const auto& [label, cluster] : result.assignment)
        summary.groups[cluster].members.push_back(label);
    return summary;
}

} // namespace concentra
