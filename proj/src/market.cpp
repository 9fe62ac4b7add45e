#include "concentra/market.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "concentra/kernels.hpp"
#include "csv.hpp"

namespace concentra {

namespace {

constexpr double kSumTolerance = 1e-9;       // snapshot invariant
constexpr double kRenormTolerance = 5e-3;    // strict-policy acceptance window

// Canonical pre-pass: ascending firm_id, so every downstream float
// computation sees the same operand order no matter how the caller's
// container iterates.
void sort_by_id(std::vector<std::pair<std::string, double>>& entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

void check_ids(const std::vector<std::pair<std::string, double>>& entries) {
    std::set<std::string> seen;
    for (const auto& [id, value] : entries) {
        (void)value;
        if (id.empty())
            throw DomainError("firm_id must be non-empty");
        if (!seen.insert(id).second)
            throw DuplicateFirm("duplicate firm_id: " + id);
    }
}

std::string stem_of(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name.erase(dot);
    return name;
}

} // namespace

MarketSnapshot MarketSnapshot::build(
    std::vector<std::pair<std::string, double>> entries, std::string market_id,
    std::string period, std::vector<std::string> notes) {
    check_ids(entries);
    if (entries.empty())
        throw DomainError("snapshot requires at least one firm");

    // Descending share, ties by ascending firm_id.
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    MarketSnapshot snap;
    snap.market_id_ = std::move(market_id);
    snap.period_ = std::move(period);
    snap.notes_ = std::move(notes);
    snap.firms_.reserve(entries.size());
    snap.shares_.reserve(entries.size());
    for (auto& [id, share] : entries) {
        if (share < 0.0)
            throw NegativeShare("negative share for firm " + id);
        if (share > 1.0 + 1e-12)
            throw DomainError("share exceeds 1 for firm " + id);
        snap.firms_.push_back(FirmShare{std::move(id), share});
        snap.shares_.push_back(share);
    }

    const double total = kernels::sum(snap.shares_);
    if (std::abs(total - 1.0) > kSumTolerance) {
        std::ostringstream msg;
        msg << "shares sum to " << total << ", expected 1 within " << kSumTolerance;
        throw SharesDoNotSum(msg.str());
    }
    return snap;
}

MarketSnapshot MarketSnapshot::from_counts(
    std::vector<std::pair<std::string, double>> counts, std::string market_id,
    std::string period) {
    check_ids(counts);
    sort_by_id(counts);

    std::vector<double> values;
    values.reserve(counts.size());
    for (const auto& [id, count] : counts) {
        if (count < 0.0)
            throw NegativeCount("negative count for firm " + id);
        values.push_back(count);
    }
    const double total = kernels::sum(values);
    if (total <= 0.0)
        throw AllZeroTotal("all counts are zero");

    for (auto& [id, count] : counts) count /= total;
    return build(std::move(counts), std::move(market_id), std::move(period), {});
}

MarketSnapshot MarketSnapshot::from_counts(
    const std::map<std::string, double>& counts, std::string market_id,
    std::string period) {
    return from_counts(
        std::vector<std::pair<std::string, double>>(counts.begin(), counts.end()),
        std::move(market_id), std::move(period));
}

MarketSnapshot MarketSnapshot::from_shares(
    std::vector<std::pair<std::string, double>> shares, std::string market_id,
    std::string period, RenormalizePolicy policy) {
    check_ids(shares);
    sort_by_id(shares);

    std::vector<double> values;
    values.reserve(shares.size());
    for (const auto& [id, share] : shares) {
        if (share < 0.0)
            throw NegativeShare("negative share for firm " + id);
        values.push_back(share);
    }
    const double total = kernels::sum(values);
    if (total <= 0.0)
        throw SharesDoNotSum("shares sum to 0");

    const double drift = std::abs(total - 1.0);
    if (policy == RenormalizePolicy::Strict && drift > kRenormTolerance) {
        std::ostringstream msg;
        msg << "shares sum to " << total << "; |sum-1| exceeds "
            << kRenormTolerance;
        throw SharesDoNotSum(msg.str());
    }

    std::vector<std::string> notes;
    if (drift > 1e-12) {
        std::ostringstream note;
        note << "shares renormalized from sum " << total;
        notes.push_back(note.str());
    }
    for (auto& [id, share] : shares) share /= total;
    return build(std::move(shares), std::move(market_id), std::move(period),
                 std::move(notes));
}

MarketSnapshot MarketSnapshot::from_shares(
    const std::map<std::string, double>& shares, std::string market_id,
    std::string period, RenormalizePolicy policy) {
    return from_shares(
        std::vector<std::pair<std::string, double>>(shares.begin(), shares.end()),
        std::move(market_id), std::move(period), policy);
}

std::optional<std::size_t> MarketSnapshot::rank_of(
    const std::string& firm_id) const {
    for (std::size_t i = 0; i < firms_.size(); ++i)
        if (firms_[i].firm_id == firm_id) return i;
    return std::nullopt;
}

std::vector<std::string> LicensingPanel::automakers() const {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& [automaker, cells] : rows) {
        (void)cells;
        out.push_back(automaker);
    }
    return out;
}

std::vector<std::string> LicensingPanel::periods() const {
    std::set<std::string> all;
    for (const auto& [automaker, cells] : rows) {
        (void)automaker;
        for (const auto& [period, count] : cells) {
            (void)count;
            all.insert(period);
        }
    }
    return std::vector<std::string>(all.begin(), all.end());
}

std::vector<double> LicensingPanel::series(const std::string& automaker) const {
    const auto it = rows.find(automaker);
    if (it == rows.end())
        throw DomainError("unknown automaker: " + automaker);
    std::vector<double> out;
    out.reserve(it->second.size());
    for (const auto& [period, count] : it->second) {
        (void)period;
        out.push_back(static_cast<double>(count));
    }
    return out;
}

std::vector<CountryIndexRecord> load_country_indices(const std::string& path) {
    const auto doc = csvio::read_csv(path);
    const std::vector<std::string> expected = {"country", "num_firms",
                                               "total_production", "cr3", "hhi"};
    if (doc.header != expected)
        throw SchemaError(path +
                          ": expected header country,num_firms,total_production,cr3,hhi");

    std::vector<CountryIndexRecord> records;
    records.reserve(doc.rows.size());
    for (const auto& row : doc.rows) {
        if (row.fields.size() != expected.size()) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ": expected "
                << expected.size() << " fields, got " << row.fields.size();
            throw ParseError(msg.str());
        }

        CountryIndexRecord rec;
        rec.country = row.fields[0];
        if (rec.country.empty()) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ": empty country name";
            throw SchemaError(msg.str());
        }

        const long long firms =
            csvio::parse_int(row.fields[1], row.line_no, "num_firms");
        if (firms <= 0) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no
                << ", column num_firms: must be positive, got " << firms;
            throw SchemaError(msg.str());
        }
        rec.num_firms = static_cast<int>(firms);

        const long long production =
            csvio::parse_int(row.fields[2], row.line_no, "total_production");
        if (production < 0) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no
                << ", column total_production: must be non-negative";
            throw SchemaError(msg.str());
        }
        rec.total_production = production;

        // "n.d." cells stay absent; they are never coerced to 0.
        if (row.fields[3] != "n.d.") {
            const double cr3 = csvio::parse_double(row.fields[3], row.line_no, "cr3");
            if (cr3 < 0.0 || cr3 > 1.0) {
                std::ostringstream msg;
                msg << path << ": line " << row.line_no
                    << ", column cr3: value " << cr3 << " outside [0,1]";
                throw SchemaError(msg.str());
            }
            rec.cr3 = cr3;
        }
        if (row.fields[4] != "n.d.") {
            const double hhi = csvio::parse_double(row.fields[4], row.line_no, "hhi");
            const double lower = 1.0 / rec.num_firms - 1e-9;
            if (hhi < lower || hhi > 1.0) {
                std::ostringstream msg;
                msg << path << ": line " << row.line_no << ", column hhi: value "
                    << hhi << " outside [1/" << rec.num_firms << ", 1]";
                throw SchemaError(msg.str());
            }
            rec.hhi = hhi;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

LicensingPanel load_licensing_panel(const std::string& path) {
    const auto doc = csvio::read_csv(path);
    const std::vector<std::string> expected = {"automaker", "period", "count"};
    if (doc.header != expected)
        throw SchemaError(path + ": expected header automaker,period,count");

    LicensingPanel panel;
    for (const auto& row : doc.rows) {
        if (row.fields.size() != expected.size()) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ": expected 3 fields, got "
                << row.fields.size();
            throw ParseError(msg.str());
        }
        const std::string& automaker = row.fields[0];
        const std::string& period = row.fields[1];
        if (automaker.empty() || period.empty()) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no
                << ": automaker and period must be non-empty";
            throw SchemaError(msg.str());
        }
        const long long count = csvio::parse_int(row.fields[2], row.line_no, "count");
        if (count < 0) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ", column count: value "
                << count << " is negative";
            throw SchemaError(msg.str());
        }
        if (!panel.rows[automaker].emplace(period, count).second) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ": duplicate cell "
                << automaker << "/" << period;
            throw ParseError(msg.str());
        }
    }

    // Every automaker must cover the same period set.
    const auto all_periods = panel.periods();
    for (const auto& [automaker, cells] : panel.rows) {
        for (const auto& period : all_periods) {
            if (!cells.contains(period)) {
                std::ostringstream msg;
                msg << path << ": missing cell for automaker " << automaker
                    << ", period " << period;
                throw ParseError(msg.str());
            }
        }
    }
    return panel;
}

ShareFile load_share_csv(const std::string& path) {
    const auto doc = csvio::read_csv(path);
    const std::vector<std::string> expected = {"firm", "share"};
    if (doc.header != expected)
        throw SchemaError(path + ": expected header firm,share");

    ShareFile file;
    file.market_id = stem_of(path);
    for (const auto& [key, value] : doc.metadata) {
        if (key == "market") file.market_id = value;
        if (key == "period") file.period = value;
    }

    std::set<std::string> seen;
    for (const auto& row : doc.rows) {
        if (row.fields.size() != 2) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ": expected 2 fields, got "
                << row.fields.size();
            throw ParseError(msg.str());
        }
        const std::string& firm = row.fields[0];
        if (firm.empty()) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ": empty firm id";
            throw SchemaError(msg.str());
        }
        if (!seen.insert(firm).second) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ": duplicate firm " << firm;
            throw ParseError(msg.str());
        }
        const double value = csvio::parse_double(row.fields[1], row.line_no, "share");
        if (!std::isfinite(value) || value < 0.0) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no
                << ", column share: value must be finite and non-negative";
            throw SchemaError(msg.str());
        }
        file.entries.emplace_back(firm, value);
    }
    return file;
}

MarketSnapshot snapshot_from_panel(const LicensingPanel& panel,
                                   const std::string& period,
                                   const std::string& market_id) {
    std::vector<std::pair<std::string, double>> counts;
    counts.reserve(panel.rows.size());
    for (const auto& [automaker, cells] : panel.rows) {
        const auto it = cells.find(period);
        if (it == cells.end())
            throw DomainError("panel has no period " + period);
        counts.emplace_back(automaker, static_cast<double>(it->second));
    }
    return MarketSnapshot::from_counts(std::move(counts), market_id, period);
}

} // namespace concentra
