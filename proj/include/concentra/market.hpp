#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "concentra/errors.hpp"

namespace concentra {

// One firm's slice of a market. share is a dimensionless fraction in [0,1].
struct FirmShare {
    std::string firm_id;
    double share = 0.0;

    friend bool operator==(const FirmShare&, const FirmShare&) = default;
};

enum class RenormalizePolicy {
    // Accept only if the raw sum is within 5e-3 of 1, then renormalize to
    // exactly 1 (published tables are rounded; small drift is expected).
    Strict,
    // Renormalize any positive sum. Used when shares come from upstream
    // arithmetic rather than a published table.
    Always,
};

// An immutable ranked share vector for one market and period.
//
// Invariants established at construction:
//   - every share in [0,1], firm ids unique and non-empty
//   - shares sum to 1 within 1e-9
//   - firms sorted by descending share, ties by ascending firm_id
class MarketSnapshot {
public:
    // Shares from raw counts (production, sales, licenses...). Requires at
    // least one positive count and no negative ones.
    static MarketSnapshot from_counts(
        std::vector<std::pair<std::string, double>> counts,
        std::string market_id, std::string period);

    static MarketSnapshot from_counts(const std::map<std::string, double>& counts,
                                      std::string market_id, std::string period);

    // Directly from fractions; see RenormalizePolicy for the sum rule.
    static MarketSnapshot from_shares(
        std::vector<std::pair<std::string, double>> shares,
        std::string market_id, std::string period,
        RenormalizePolicy policy = RenormalizePolicy::Strict);

    static MarketSnapshot from_shares(const std::map<std::string, double>& shares,
                                      std::string market_id, std::string period,
                                      RenormalizePolicy policy = RenormalizePolicy::Strict);

    const std::string& market_id() const { return market_id_; }
    const std::string& period() const { return period_; }
    const std::vector<FirmShare>& firms() const { return firms_; }
    std::size_t size() const { return firms_.size(); }

    // Contiguous descending share vector, aligned with firms().
    std::span<const double> shares() const { return shares_; }

    // Position of a firm in the ranked order, if present.
    std::optional<std::size_t> rank_of(const std::string& firm_id) const;

    // Advisory notes accumulated during construction (e.g. renormalization).
    const std::vector<std::string>& notes() const { return notes_; }

    friend bool operator==(const MarketSnapshot&, const MarketSnapshot&) = default;

private:
    MarketSnapshot() = default;

    // Ranks, validates and caches. `entries` are (firm_id, share) pairs in
    // any order; shares are taken as-is (no renormalization).
    static MarketSnapshot build(std::vector<std::pair<std::string, double>> entries,
                                std::string market_id, std::string period,
                                std::vector<std::string> notes);

    friend std::pair<MarketSnapshot, struct MergerVerdict> merge_firms(
        const MarketSnapshot&, const std::string&, const std::string&, double);

    std::string market_id_;
    std::string period_;
    std::vector<FirmShare> firms_;
    std::vector<double> shares_;
    std::vector<std::string> notes_;
};

// One row of a cross-country concentration table. cr3/hhi may be absent
// (published as "n.d."); absences are never encoded as 0.
struct CountryIndexRecord {
    std::string country;
    int num_firms = 0;
    std::int64_t total_production = 0;
    std::optional<double> cr3;
    std::optional<double> hhi;

    bool complete() const { return cr3.has_value() && hhi.has_value(); }
};

// Long-format licensing counts: automaker -> period -> count. The period
// set must be identical across automakers.
struct LicensingPanel {
    std::map<std::string, std::map<std::string, std::int64_t>> rows;

    std::vector<std::string> automakers() const;
    std::vector<std::string> periods() const;
    // Counts for one automaker ordered by ascending period label.
    std::vector<double> series(const std::string& automaker) const;
};

// CSV: header `country,num_firms,total_production,cr3,hhi`, missing value
// literal `n.d.`.
std::vector<CountryIndexRecord> load_country_indices(const std::string& path);

// CSV: header `automaker,period,count`, one row per cell.
LicensingPanel load_licensing_panel(const std::string& path);

// CSV: header `firm,share` preceded by optional `# key: value` comment
// lines. Recognized keys: market, period.
struct ShareFile {
    std::string market_id;
    std::string period;
    std::vector<std::pair<std::string, double>> entries;
};

ShareFile load_share_csv(const std::string& path);

// Counts for one period of a panel, as a snapshot input.
MarketSnapshot snapshot_from_panel(const LicensingPanel& panel,
                                   const std::string& period,
                                   const std::string& market_id);

} // namespace concentra
