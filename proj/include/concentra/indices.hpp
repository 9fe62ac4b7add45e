#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "concentra/market.hpp"

namespace concentra {

enum class ConcentrationBand {
    Unconcentrated,
    ModeratelyConcentrated,
    HighlyConcentrated,
};

enum class RosenbluthVariant {
    // 1 / (2 * sum_i i*P_i - 1) with ranks i = 1..n over the descending
    // share vector. Bounded by [1/n, 1].
    Standard,
    // 1 / (2 * sum_i P_i - 1): the rank weights dropped. For any
    // full-coverage share vector the denominator is 1, so the value
    // degenerates to 1. Kept for transparency, not as a default.
    PaperLiteral,
};

enum class MergerRule {
    Devolved,         // post-merger concentration still low
    SmallIncrease,    // mid band, small delta
    NoCausalNexus,    // market was already concentrated, negligible delta
    FlaggedForReview, // outside all three screening rules
};

const char* to_string(ConcentrationBand band);
const char* to_string(MergerRule rule);

// Sum of the k largest shares. k >= n returns 1.0 (clamped; see
// index_report notes for the advisory flag).
double concentration_ratio(const MarketSnapshot& snapshot, int k);

// Sum of squared shares; in [1/n, 1].
double hhi(const MarketSnapshot& snapshot);

// hhi scaled to the 10000-point form used by the DOJ bands.
double hhi_points(const MarketSnapshot& snapshot);

// Concentration functional sum_i P_i^(2a) / (sum_j P_j^a)^2 for a > 0.
// a = 1 coincides with hhi; a = 2 is the dominance index.
double dominance_general(const MarketSnapshot& snapshot, double alpha);

// sum P_i^4 / (sum P_j^2)^2.
double dominance_index(const MarketSnapshot& snapshot);

double rosenbluth(const MarketSnapshot& snapshot,
                  RosenbluthVariant variant = RosenbluthVariant::Standard);

// Horvath comprehensive index: P1 + sum_{i>=2} P_i^2 * (1 + (1 - P_i)).
// Always >= hhi and <= 1.
double cci(const MarketSnapshot& snapshot);

// Cumulative share of the top ceil(fraction_of_firms * n) firms.
// fraction_of_firms in (0, 1].
double pareto_top_share(const MarketSnapshot& snapshot, double fraction_of_firms);

// DOJ bands on the points form: below 1500 unconcentrated, 1500..2500
// moderately concentrated (both ends inclusive), above 2500 highly.
ConcentrationBand classify_hhi(double points);

// CR4 percent bands: 45 and below unconcentrated, (45, 60] moderately
// concentrated, above 60 highly.
ConcentrationBand classify_cr4(double cr4_percent);

struct MergerVerdict {
    double h0 = 0.0;    // pre-merger HHI
    double h1 = 0.0;    // post-merger HHI
    double delta = 0.0; // h1 - h0
    MergerRule rule = MergerRule::FlaggedForReview;
};

// Screening rules on (H0, H1):
//   (a) H1 < 0.1                          -> Devolved
//   (b) 0.1 <= H1 < 0.18, delta < rule_b  -> SmallIncrease
//   (c) H1 >= 0.18, delta < 0.005         -> NoCausalNexus
//   otherwise                             -> FlaggedForReview
// rule_b defaults to the published 0.1 threshold; regulatory practice uses
// 0.01, hence the override.
MergerVerdict merger_screen(double h0, double h1, double rule_b_delta = 0.1);

// Replaces firm_a and firm_b by one firm holding their combined share and
// screens the move. The merged firm id is "a+b" with ids in ascending
// order. Shares of unrelated firms are untouched, so delta equals
// 2*Pa*Pb up to rounding.
std::pair<MarketSnapshot, MergerVerdict> merge_firms(const MarketSnapshot& snapshot,
                                                     const std::string& firm_a,
                                                     const std::string& firm_b,
                                                     double rule_b_delta = 0.1);

struct IndexReport {
    std::string market_id;
    std::string period;
    // Keyed by effective k = min(requested, n); always contains
    // {1,3,4,8} clamped to n, plus n itself.
    std::map<int, double> cr;
    double hhi = 0.0;
    double hhi_points = 0.0;
    double di = 0.0;
    double rosenbluth_standard = 0.0;
    double rosenbluth_paper_literal = 0.0;
    double cci = 0.0;
    double pareto_top20 = 0.0;
    ConcentrationBand hhi_band = ConcentrationBand::Unconcentrated;
    ConcentrationBand cr4_band = ConcentrationBand::Unconcentrated;
    std::vector<std::string> notes;
};

IndexReport index_report(const MarketSnapshot& snapshot,
                         std::span<const int> extra_k = {});

} // namespace concentra
