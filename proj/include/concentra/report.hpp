#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "concentra/cluster.hpp"
#include "concentra/indices.hpp"
#include "concentra/market.hpp"
#include "concentra/stats.hpp"

namespace concentra {

inline constexpr int kSchemaVersion = 1;

// One year-row of published index values. These are report-level fixtures
// (the underlying shares are not public), consumed by median, band and
// ordering checks rather than recomputation. The b column is shown as
// printed; the published values exceed the standard Rosenbluth bound.
struct PublishedIndexRow {
    std::string year;
    double cr4 = 0.0;
    double cr8 = 0.0;
    double hhi = 0.0;
    double b = 0.0;
    double cci = 0.0;
};

// CSV: header `year,cr4,cr8,hhi,b,cci`.
std::vector<PublishedIndexRow> load_published_indices(const std::string& path);

// Row-wise HHI <= CCI <= CR4; throws DomainError naming the first
// offending year.
void validate_published_ordering(const std::vector<PublishedIndexRow>& rows);

struct PublishedMedians {
    double cr4 = 0.0;
    double hhi = 0.0;
    double cci = 0.0;
};

PublishedMedians published_medians(const std::vector<PublishedIndexRow>& rows);

namespace report {

// Round half away from zero to `places` decimals. All fraction-valued
// fields serialize at 5 decimals, regression coefficients at 4.
double round_to(double value, int places);

// Fixed-point formatting used by the markdown tables.
std::string fmt(double value, int places);

nlohmann::json to_json(const IndexReport& rep);
std::string to_markdown(const IndexReport& rep);

nlohmann::json to_json(const MergerVerdict& verdict, const std::string& market_id,
                       const std::string& firm_a, const std::string& firm_b);
std::string to_markdown(const MergerVerdict& verdict, const std::string& market_id,
                        const std::string& firm_a, const std::string& firm_b);

nlohmann::json to_json(const ClusterSummary& summary,
                       const std::vector<std::string>& dropped);
std::string to_markdown(const ClusterSummary& summary,
                        const std::vector<std::string>& dropped);

nlohmann::json stats_json(const std::string& column, const DescriptiveSummary& d,
                          const FiveNumberSummary& f);
std::string stats_markdown(const std::string& column, const DescriptiveSummary& d,
                           const FiveNumberSummary& f);

nlohmann::json regression_json(const std::string& x_column,
                               const std::string& y_column,
                               const RegressionFit& fit);
std::string regression_markdown(const std::string& x_column,
                                const std::string& y_column,
                                const RegressionFit& fit);

// Inputs for the full markdown dossier. Sections are emitted for
// whichever parts are present.
struct Dossier {
    std::optional<std::vector<CountryIndexRecord>> countries;
    std::optional<std::vector<PublishedIndexRow>> published;
    std::optional<LicensingPanel> panel;
    std::vector<IndexReport> snapshots;
    KMeansConfig cluster_config;
};

std::string dossier_markdown(const Dossier& input);

} // namespace report

} // namespace concentra
