// Acceptance suite: end-to-end reproduction checks against the bundled
// fixtures, plus the randomized property battery. Prints one line per
// criterion; exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "concentra/cluster.hpp"
#include "concentra/indices.hpp"
#include "concentra/market.hpp"
#include "concentra/report.hpp"
#include "concentra/stats.hpp"

using namespace concentra;

namespace {

std::string data_path(const std::string& name) {
    return std::string(CONCENTRA_DATA_DIR) + "/" + name;
}

struct Checker {
    bool ok = true;
    std::set<std::string> seen; // dedup repeated failures from loops
    std::ostringstream why;

    void require(bool condition, const std::string& message) {
        if (condition) return;
        ok = false;
        if (seen.insert(message).second) {
            if (seen.size() > 1) why << "; ";
            why << message;
        }
    }
};

std::vector<CountryIndexRecord> g_countries;
std::vector<PublishedIndexRow> g_published;

std::vector<FeaturePoint> complete_points() {
    std::vector<FeaturePoint> points;
    for (const auto& rec : g_countries)
        if (rec.complete()) points.push_back({rec.country, {*rec.cr3, *rec.hhi}});
    return points;
}

std::set<std::string> members_of(const ClusteringResult& result, int cluster) {
    std::set<std::string> out;
    for (const auto& [label, c] : result.assignment)
        if (c == cluster) out.insert(label);
    return out;
}

bool centroid_close(const std::vector<double>& got, double x, double y) {
    return std::abs(got[0] - x) <= 1e-3 && std::abs(got[1] - y) <= 1e-3;
}

// --- brute-force clustering oracle (canonical-order SSE) ------------------

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

void enumerate_partitions(std::size_t next, int used, int k, std::vector<int>& assign,
                          const std::vector<std::vector<double>>& pts, double& best) {
    if (next == assign.size()) {
        best = std::min(best, oracle_partition_sse(pts, assign, k));
        return;
    }
    for (int c = 0; c < std::min(used + 1, k); ++c) {
        assign[next] = c;
        enumerate_partitions(next + 1, std::max(used, c + 1), k, assign, pts, best);
    }
}

double oracle_optimal_sse(const std::vector<std::vector<double>>& pts, int k) {
    std::vector<int> assign(pts.size(), 0);
    double best = std::numeric_limits<double>::infinity();
    enumerate_partitions(0, 0, k, assign, pts, best);
    return best;
}

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

// --- criteria --------------------------------------------------------------

void criterion_1_clustering(Checker& chk) {
    const auto start = std::chrono::steady_clock::now();
    const auto points = complete_points();
    chk.require(points.size() == 9, "expected 9 complete records");

    KMeansConfig config;
    config.k = 2;
    const auto two = kmeans(points, config);
    chk.require(members_of(two, 0) ==
                    std::set<std::string>{"Germany", "Canada", "Spain", "Japan"},
                "k=2 group 1 membership");
    chk.require(members_of(two, 1) == std::set<std::string>{"Brazil", "South Korea",
                                                            "USA", "France", "Italy"},
                "k=2 group 2 membership");
    chk.require(centroid_close(two.centroids[0], 0.695, 0.235),
                "k=2 centroid (0.695, 0.235)");
    chk.require(centroid_close(two.centroids[1], 0.946, 0.430),
                "k=2 centroid (0.946, 0.430)");

    config.k = 3;
    const auto three = kmeans(points, config);
    chk.require(centroid_close(three.centroids[0], 0.695, 0.235),
                "k=3 centroid (0.695, 0.235)");
    chk.require(centroid_close(three.centroids[1], 0.937, 0.357),
                "k=3 centroid (0.937, 0.357)");
    chk.require(centroid_close(three.centroids[2], 0.960, 0.540),
                "k=3 centroid (0.960, 0.540)");
    chk.require(members_of(three, 2) == std::set<std::string>{"Italy", "France"},
                "k=3 {Italy, France} split");
    chk.require(members_of(three, 1) ==
                    std::set<std::string>{"South Korea", "USA", "Brazil"},
                "k=3 {South Korea, USA, Brazil} split");

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    chk.require(seconds < 1.0, "runtime " + std::to_string(seconds) + "s >= 1s");
}

void criterion_2_regression(Checker& chk) {
    std::vector<double> x, y;
    for (const auto& rec : g_countries) {
        if (rec.complete()) {
            x.push_back(*rec.cr3);
            y.push_back(*rec.hhi);
        }
    }
    const auto fit = ols_fit(x, y);
    chk.require(std::abs(fit.slope - 0.7434) <= 1e-3,
                "slope " + std::to_string(fit.slope));
    chk.require(std::abs(fit.intercept + 0.277) <= 1e-3,
                "intercept " + std::to_string(fit.intercept));
    chk.require(std::abs(fit.r2 - 0.6489) <= 2e-3, "r2 " + std::to_string(fit.r2));
}

void criterion_3_outlier(Checker& chk) {
    std::vector<LabeledValue> column;
    for (const auto& rec : g_countries)
        if (rec.hhi) column.push_back({rec.country, *rec.hhi});
    const auto f = five_number(column);
    chk.require(f.outliers.size() == 1,
                "expected exactly 1 outlier, got " +
                    std::to_string(f.outliers.size()));
    if (f.outliers.size() == 1) {
        chk.require(f.outliers[0].label == "Italy", "outlier is " + f.outliers[0].label);
        chk.require(std::abs(f.outliers[0].value - 0.58) <= 1e-12, "outlier value");
    }
    chk.require(std::abs(f.upper_hinge - 0.37) <= 1e-12,
                "upper hinge " + std::to_string(f.upper_hinge));
    chk.require(std::abs(f.upper_fence - 0.52) <= 1e-9,
                "upper fence " + std::to_string(f.upper_fence));
}

void criterion_4_medians(Checker& chk) {
    const auto medians = published_medians(g_published);
    chk.require(std::abs(medians.cr4 - 0.6016) <= 5e-4,
                "cr4 median " + std::to_string(medians.cr4));
    chk.require(std::abs(medians.hhi - 0.1156) <= 5e-4,
                "hhi median " + std::to_string(medians.hhi));
    chk.require(std::abs(medians.cci - 0.338) <= 5e-4,
                "cci median " + std::to_string(medians.cci));
}

void criterion_5_bands(Checker& chk) {
    for (const auto& row : g_published) {
        chk.require(classify_hhi(row.hhi * 10000.0) ==
                        ConcentrationBand::Unconcentrated,
                    "hhi band for " + row.year);
        const auto cr4_band = classify_cr4(row.cr4 * 100.0);
        if (row.year == "2012" || row.year == "2013" || row.year == "2014")
            chk.require(cr4_band == ConcentrationBand::HighlyConcentrated,
                        "cr4 band for " + row.year);
        else
            chk.require(cr4_band == ConcentrationBand::ModeratelyConcentrated,
                        "cr4 band for " + row.year);
    }
}

void criterion_6_ordering(Checker& chk) {
    for (const auto& row : g_published)
        chk.require(row.hhi <= row.cci && row.cci <= row.cr4,
                    "ordering violated for " + row.year);
}

void criterion_7_properties(Checker& chk) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(123456789);
    std::uniform_int_distribution<int> size_dist(1, 50);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    int di_violations = 0;
    std::string di_example;

    for (int trial = 0; trial < 10000; ++trial) {
        const int n = size_dist(rng);
        std::vector<std::pair<std::string, double>> counts;
        bool any = false;
        for (int i = 0; i < n; ++i) {
            double c = unit(rng);
            if (n > 1 && unit(rng) < 0.05) c = 0.0;
            any = any || c > 0.0;
            counts.emplace_back("f" + std::to_string(i), c);
        }
        if (!any) counts[0].second = 1.0;
        const auto snap = MarketSnapshot::from_counts(std::move(counts), "p", "");

        const double h = hhi(snap);
        const double c = cci(snap);
        chk.require(h >= 1.0 / n - 1e-12 && h <= 1.0 + 1e-12, "hhi bounds");
        chk.require(h <= c + 1e-12 && c <= 1.0 + 1e-12, "hhi <= cci <= 1");

        double prev = 0.0;
        bool monotone = true;
        for (int k = 1; k <= n; ++k) {
            const double cr = concentration_ratio(snap, k);
            monotone = monotone && cr >= prev - 1e-12;
            prev = cr;
        }
        chk.require(monotone, "cr monotone in k");
        chk.require(concentration_ratio(snap, n) == 1.0, "cr_n = 1");

        chk.require(std::abs(dominance_general(snap, 1.0) - h) <= 1e-12,
                    "F(Q,1) = hhi");

        const double b = rosenbluth(snap);
        chk.require(b >= 1.0 / n - 1e-12 && b <= 1.0 + 1e-12, "rosenbluth bounds");

        if (n >= 2) {
            std::uniform_int_distribution<std::size_t> pick(0, snap.size() - 1);
            std::size_t a_idx = pick(rng), b_idx = pick(rng);
            if (a_idx == b_idx) b_idx = (b_idx + 1) % snap.size();
            const double pa = snap.firms()[a_idx].share;
            const double pb = snap.firms()[b_idx].share;
            const double di_before = dominance_index(snap);
            const auto [post, verdict] = merge_firms(
                snap, snap.firms()[a_idx].firm_id, snap.firms()[b_idx].firm_id);
            chk.require(std::abs(verdict.delta - 2.0 * pa * pb) <= 1e-12,
                        "delta = 2*Pi*Pj");
            chk.require(hhi(post) >= h - 1e-12, "hhi nondecreasing under merger");
            chk.require(cci(post) >= c - 1e-12, "cci nondecreasing under merger");
            const double di_after = dominance_index(post);
            if (di_after < di_before - 1e-12) {
                ++di_violations;
                if (di_example.empty()) {
                    std::ostringstream ex;
                    ex << "e.g. merging shares " << pa << " and " << pb << " (n=" << n
                       << ") moves DI " << di_before << " -> " << di_after;
                    di_example = ex.str();
                }
            }
        }
    }

    if (di_violations > 0) {
        std::ostringstream msg;
        msg << "di nondecreasing under merger: " << di_violations
            << "/10000 violations, " << di_example;
        chk.require(false, msg.str());
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    chk.require(seconds < 10.0, "runtime " + std::to_string(seconds) + "s >= 10s");
}

void criterion_8_optimality(Checker& chk) {
    // fixture 1: the nine complete country records
    std::vector<FeaturePoint> country_points = complete_points();
    // fixture 2: the six published (cr4, hhi) year rows
    std::vector<FeaturePoint> year_points;
    for (const auto& row : g_published)
        year_points.push_back({row.year, {row.cr4, row.hhi}});

    for (const auto* fixture : {&country_points, &year_points}) {
        const auto coords = canonical_coords(*fixture);
        for (int k = 1; k <= 3; ++k) {
            KMeansConfig config;
            config.k = k;
            const auto result = kmeans(*fixture, config);
            const double optimum = oracle_optimal_sse(coords, k);
            if (result.within_sse != optimum) {
                std::ostringstream msg;
                msg << "n=" << fixture->size() << " k=" << k << ": sse "
                    << result.within_sse << " != optimum " << optimum;
                chk.require(false, msg.str());
            }
        }
    }
}

void criterion_9_rosenbluth_nonreproducibility(Checker& chk) {
    // The published B column cannot come from the standard variant, whose
    // upper bound is 1.
    for (const auto& row : g_published)
        chk.require(row.b > 1.0, "published b for " + row.year + " within bound");

    // The formula as typeset degenerates to exactly 1 at full coverage.
    const auto dyadic = MarketSnapshot::from_shares(
        std::map<std::string, double>{{"A", 0.5}, {"B", 0.25}, {"C", 0.25}}, "m", "");
    chk.require(rosenbluth(dyadic, RosenbluthVariant::PaperLiteral) == 1.0,
                "paper-literal variant != 1.0 at full coverage");

    const auto demo = MarketSnapshot::from_counts(
        std::map<std::string, double>{{"A", 40}, {"B", 30}, {"C", 20}, {"D", 10}},
        "m", "");
    const double b = rosenbluth(demo);
    chk.require(b >= 0.25 - 1e-12 && b <= 1.0 + 1e-12, "standard bounds on demo");
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Checker&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "clustering reproduction (k=2, k=3)", criterion_1_clustering},
        {2, "regression reproduction", criterion_2_regression},
        {3, "outlier reproduction (Italy)", criterion_3_outlier},
        {4, "median reproduction", criterion_4_medians},
        {5, "classification bands per year", criterion_5_bands},
        {6, "index ordering on fixture rows", criterion_6_ordering},
        {7, "randomized property suite (10000 vectors)", criterion_7_properties},
        {8, "small-instance clustering optimality", criterion_8_optimality},
        {9, "rosenbluth non-reproducibility substitute checks",
         criterion_9_rosenbluth_nonreproducibility},
    };

    g_countries = load_country_indices(data_path("table2_countries.csv"));
    g_published = load_published_indices(data_path("table4_indices.csv"));

    int failed = 0;
    for (const auto& criterion : criteria) {
        Checker chk;
        try {
            criterion.run(chk);
        } catch (const std::exception& e) {
            chk.require(false, std::string("exception: ") + e.what());
        }
        if (chk.ok) {
            std::printf("[PASS] criterion %d: %s\n", criterion.id, criterion.name);
        } else {
            ++failed;
            std::printf("[FAIL] criterion %d: %s -- %s\n", criterion.id,
                        criterion.name, chk.why.str().c_str());
        }
    }

    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
