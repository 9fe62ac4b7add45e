#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "concentra/cluster.hpp"
#include "concentra/market.hpp"
#include "test_util.hpp"

using namespace concentra;

namespace {

std::vector<FeaturePoint> fixture_points() {
    std::vector<FeaturePoint> points;
    for (const auto& rec :
         load_country_indices(testutil::data_path("table2_countries.csv")))
        if (rec.complete())
            points.push_back({rec.country, {*rec.cr3, *rec.hhi}});
    return points;
}

// --- exhaustive-enumeration oracle ---------------------------------------
// Canonical-order SSE, written independently of the library: clusters in
// index order, members in the given point order, two-pass mean.
double oracle_partition_sse(const std::vector<std::vector<double>>& pts,
                            const std::vector<int>& assign, int k) {
    const std::size_t dim = pts.empty() ? 0 : pts[0].size();
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

    // point-major accumulation: the value does not depend on how the
    // partition numbers its groups
    double total = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = pts[p][d] - means[assign[p]][d];
            total += diff * diff;
        }
    }
    return total;
}

void enumerate_partitions(std::size_t next, int used, int k,
                          std::vector<int>& assign,
                          const std::vector<std::vector<double>>& pts,
                          double& best) {
    if (next == assign.size()) {
        best = std::min(best, oracle_partition_sse(pts, assign, k));
        return;
    }
    for (int c = 0; c < std::min(used + 1, k); ++c) {
        assign[next] = c;
        enumerate_partitions(next + 1, std::max(used, c + 1), k, assign, pts, best);
    }
}

// Minimum SSE over all partitions into at most k non-empty groups.
double oracle_optimal_sse(const std::vector<std::vector<double>>& pts, int k) {
    std::vector<int> assign(pts.size(), 0);
    double best = std::numeric_limits<double>::infinity();
    enumerate_partitions(0, 0, k, assign, pts, best);
    return best;
}

// Points sorted the way the library canonicalizes them, so the oracle
// accumulates member terms in the same order.
std::vector<std::vector<double>> canonical_coords(std::vector<FeaturePoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const FeaturePoint& a, const FeaturePoint& b) {
        if (a.label != b.label) return a.label < b.label;
        return a.coords < b.coords;
    });
    std::vector<std::vector<double>> coords;
    coords.reserve(pts.size());
    for (auto& p : pts) coords.push_back(p.coords);
    return coords;
}

std::set<std::string> members_of(const ClusteringResult& result, int cluster) {
    std::set<std::string> out;
    for (const auto& [label, c] : result.assignment)
        if (c == cluster) out.insert(label);
    return out;
}

} // namespace

TEST_CASE("k=2 reproduces the cross-country grouping") {
    const auto points = fixture_points();
    REQUIRE(points.size() == 9);
    KMeansConfig config;
    config.k = 2;
    const auto result = kmeans(points, config);

    CHECK(members_of(result, 0) ==
          std::set<std::string>{"Germany", "Canada", "Spain", "Japan"});
    CHECK(members_of(result, 1) ==
          std::set<std::string>{"Brazil", "South Korea", "USA", "France", "Italy"});

    REQUIRE(result.centroids.size() == 2);
    CHECK(std::abs(result.centroids[0][0] - 0.695) <= 1e-3);
    CHECK(std::abs(result.centroids[0][1] - 0.235) <= 1e-3);
    CHECK(std::abs(result.centroids[1][0] - 0.946) <= 1e-3);
    CHECK(std::abs(result.centroids[1][1] - 0.430) <= 1e-3);
}

TEST_CASE("k=3 splits the concentrated group") {
    const auto points = fixture_points();
    KMeansConfig config;
    config.k = 3;
    const auto result = kmeans(points, config);

    REQUIRE(result.centroids.size() == 3);
    CHECK(std::abs(result.centroids[0][0] - 0.695) <= 1e-3);
    CHECK(std::abs(result.centroids[0][1] - 0.235) <= 1e-3);
    CHECK(std::abs(result.centroids[1][0] - 0.937) <= 1e-3);
    CHECK(std::abs(result.centroids[1][1] - 0.357) <= 1e-3);
    CHECK(std::abs(result.centroids[2][0] - 0.960) <= 1e-3);
    CHECK(std::abs(result.centroids[2][1] - 0.540) <= 1e-3);

    CHECK(members_of(result, 1) == std::set<std::string>{"South Korea", "USA", "Brazil"});
    CHECK(members_of(result, 2) == std::set<std::string>{"France", "Italy"});
}

TEST_CASE("k equal to n gives singleton clusters with zero SSE") {
    const auto points = fixture_points();
    KMeansConfig config;
    config.k = static_cast<int>(points.size());
    const auto result = kmeans(points, config);
    CHECK(result.within_sse == 0.0);
    std::set<int> used;
    for (const auto& [label, c] : result.assignment) {
        (void)label;
        used.insert(c);
    }
    CHECK(used.size() == points.size());
}

TEST_CASE("kmeans input validation") {
    KMeansConfig config;
    config.k = 2;
    CHECK_THROWS_AS(kmeans({}, config), EmptyInput);

    std::vector<FeaturePoint> one = {{"a", {1.0, 2.0}}};
    config.k = 2;
    CHECK_THROWS_AS(kmeans(one, config), TooManyClusters);

    std::vector<FeaturePoint> ragged = {{"a", {1.0, 2.0}}, {"b", {1.0}}};
    config.k = 1;
    CHECK_THROWS_AS(kmeans(ragged, config), DimensionMismatch);
}

TEST_CASE("returned assignment is a Lloyd fixed point") {
    std::mt19937_64 rng(60);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 4 + trial % 14;
        const int k = 1 + trial % 4;
        if (k > n) continue;
        std::vector<FeaturePoint> points;
        for (int i = 0; i < n; ++i)
            points.push_back({"p" + std::to_string(i), {unit(rng), unit(rng)}});

        KMeansConfig config;
        config.k = k;
        config.restarts = 10;
        const auto result = kmeans(points, config);

        // each centroid is the mean of its members
        std::vector<std::vector<double>> sums(k, std::vector<double>(2, 0.0));
        std::vector<int> counts(k, 0);
        for (const auto& p : points) {
            const int c = result.assignment.at(p.label);
            sums[c][0] += p.coords[0];
            sums[c][1] += p.coords[1];
            ++counts[c];
        }
        for (int c = 0; c < k; ++c) {
            REQUIRE(counts[c] > 0); // no empty cluster
            CHECK(std::abs(sums[c][0] / counts[c] - result.centroids[c][0]) <= 1e-9);
            CHECK(std::abs(sums[c][1] / counts[c] - result.centroids[c][1]) <= 1e-9);
        }

        // one more assignment step changes nothing
        for (const auto& p : points) {
            int nearest = 0;
            double nearest_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double dx = p.coords[0] - result.centroids[c][0];
                const double dy = p.coords[1] - result.centroids[c][1];
                const double d = dx * dx + dy * dy;
                if (d < nearest_d) {
                    nearest_d = d;
                    nearest = c;
                }
            }
            CHECK(nearest == result.assignment.at(p.label));
        }
    }
}

TEST_CASE("input order changes nothing") {
    auto points = fixture_points();
    KMeansConfig config;
    config.k = 2;
    const auto base = kmeans(points, config);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(points.begin(), points.end(), rng);
        const auto shuffled = kmeans(points, config);
        CHECK(shuffled.centroids == base.centroids); // bitwise
        CHECK(shuffled.assignment == base.assignment);
        CHECK(shuffled.within_sse == base.within_sse);
    }
}

TEST_CASE("small instances match the exhaustive optimum") {
    // fixture: exact equality
    const auto points = fixture_points();
    const auto coords = canonical_coords(points);
    for (int k = 1; k <= 3; ++k) {
        KMeansConfig config;
        config.k = k;
        const auto result = kmeans(points, config);
        CHECK(result.within_sse == oracle_optimal_sse(coords, k));
    }

    // random small instances: tolerance covers SSE ties between distinct
    // optimal partitions
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 3 + trial % 6;
        const int k = 1 + trial % 3;
        if (k > n) continue;
        std::vector<FeaturePoint> pts;
        for (int i = 0; i < n; ++i)
            pts.push_back({"p" + std::to_string(i), {unit(rng), unit(rng)}});
        KMeansConfig config;
        config.k = k;
        const auto result = kmeans(pts, config);
        const double optimum = oracle_optimal_sse(canonical_coords(pts), k);
        CHECK(std::abs(result.within_sse - optimum) <= 1e-12);
    }
}

TEST_CASE("duplicate points stay deterministic") {
    const std::vector<FeaturePoint> points = {
        {"a", {1.0, 1.0}}, {"b", {1.0, 1.0}}, {"c", {2.0, 2.0}}};
    KMeansConfig config;
    config.k = 2;
    const auto r1 = kmeans(points, config);
    const auto r2 = kmeans(points, config);
    CHECK(r1.assignment == r2.assignment);
    CHECK(r1.centroids == r2.centroids);
    CHECK(r1.within_sse == doctest::Approx(0.0));
}

TEST_CASE("zscore scaling still reports raw centroids as member means") {
    const auto points = fixture_points();
    KMeansConfig config;
    config.k = 2;
    config.scaling = FeatureScaling::ZScore;
    const auto result = kmeans(points, config);
    std::vector<std::vector<double>> sums(2, std::vector<double>(2, 0.0));
    std::vector<int> counts(2, 0);
    for (const auto& p : points) {
        const int c = result.assignment.at(p.label);
        sums[c][0] += p.coords[0];
        sums[c][1] += p.coords[1];
        ++counts[c];
    }
    for (int c = 0; c < 2; ++c) {
        REQUIRE(counts[c] > 0);
        CHECK(std::abs(sums[c][0] / counts[c] - result.centroids[c][0]) <= 1e-9);
        CHECK(std::abs(sums[c][1] / counts[c] - result.centroids[c][1]) <= 1e-9);
    }
}

TEST_CASE("cluster summaries") {
    const auto points = fixture_points();
    KMeansConfig config;
    config.k = 2;
    const auto result = kmeans(points, config);
    const auto summary = summarize_clusters(result, points);
    REQUIRE(summary.groups.size() == 2);
    CHECK(summary.groups[0].members ==
          std::vector<std::string>{"Canada", "Germany", "Japan", "Spain"});
    CHECK(summary.groups[1].members ==
          std::vector<std::string>{"Brazil", "France", "Italy", "South Korea", "USA"});

    const std::vector<FeaturePoint> single = {{"only", {0.3, 0.7}}};
    KMeansConfig k1;
    k1.k = 1;
    const auto rs = kmeans(single, k1);
    const auto ss = summarize_clusters(rs, single);
    REQUIRE(ss.groups.size() == 1);
    CHECK(ss.groups[0].members == std::vector<std::string>{"only"});
    CHECK(ss.groups[0].centroid == std::vector<double>{0.3, 0.7});

    const std::vector<FeaturePoint> other = {{"x", {0.0, 0.0}}};
    CHECK_THROWS_AS(summarize_clusters(rs, other), MismatchedInputs);
}
