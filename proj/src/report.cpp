#include "concentra/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "csv.hpp"

namespace concentra {

std::vector<PublishedIndexRow> load_published_indices(const std::string& path) {
    const auto doc = csvio::read_csv(path);
    const std::vector<std::string> expected = {"year", "cr4", "cr8",
                                               "hhi", "b",   "cci"};
    if (doc.header != expected)
        throw SchemaError(path + ": expected header year,cr4,cr8,hhi,b,cci");

    std::vector<PublishedIndexRow> rows;
    rows.reserve(doc.rows.size());
    for (const auto& row : doc.rows) {
        if (row.fields.size() != expected.size()) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ": expected 6 fields, got "
                << row.fields.size();
            throw ParseError(msg.str());
        }
        PublishedIndexRow rec;
        rec.year = row.fields[0];
        if (rec.year.empty()) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ": empty year";
            throw SchemaError(msg.str());
        }
        rec.cr4 = csvio::parse_double(row.fields[1], row.line_no, "cr4");
        rec.cr8 = csvio::parse_double(row.fields[2], row.line_no, "cr8");
        rec.hhi = csvio::parse_double(row.fields[3], row.line_no, "hhi");
        rec.b = csvio::parse_double(row.fields[4], row.line_no, "b");
        rec.cci = csvio::parse_double(row.fields[5], row.line_no, "cci");

        const struct {
            const char* name;
            double value;
        } fractions[] = {{"cr4", rec.cr4}, {"cr8", rec.cr8},
                         {"hhi", rec.hhi}, {"cci", rec.cci}};
        for (const auto& f : fractions) {
            if (f.value < 0.0 || f.value > 1.0) {
                std::ostringstream msg;
                msg << path << ": line " << row.line_no << ", column " << f.name
                    << ": value " << f.value << " outside [0,1]";
                throw SchemaError(msg.str());
            }
        }
        if (rec.b <= 0.0) {
            std::ostringstream msg;
            msg << path << ": line " << row.line_no << ", column b: must be positive";
            throw SchemaError(msg.str());
        }
        rows.push_back(std::move(rec));
    }
    return rows;
}

void validate_published_ordering(const std::vector<PublishedIndexRow>& rows) {
    for (const auto& row : rows) {
        if (!(row.hhi <= row.cci && row.cci <= row.cr4)) {
            std::ostringstream msg;
            msg << "index ordering HHI <= CCI <= CR4 violated for year " << row.year
                << " (hhi=" << row.hhi << ", cci=" << row.cci << ", cr4=" << row.cr4
                << ")";
            throw DomainError(msg.str());
        }
    }
}

PublishedMedians published_medians(const std::vector<PublishedIndexRow>& rows) {
    if (rows.empty())
        throw EmptySeries("no published index rows");
    std::vector<double> cr4, hhi, cci;
    for (const auto& row : rows) {
        cr4.push_back(row.cr4);
        hhi.push_back(row.hhi);
        cci.push_back(row.cci);
    }
    return PublishedMedians{column_median(cr4), column_median(hhi),
                            column_median(cci)};
}

namespace report {

double round_to(double value, int places) {
    double scale = 1.0;
    for (int i = 0; i < places; ++i) scale *= 10.0;
    return std::round(value * scale) / scale;
}

std::string fmt(double value, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, value);
    return buf;
}

nlohmann::json to_json(const IndexReport& rep) {
    nlohmann::json cr = nlohmann::json::object();
    for (const auto& [k, value] : rep.cr)
        cr[std::to_string(k)] = round_to(value, 5);

    return nlohmann::json{
        {"schema_version", kSchemaVersion},
        {"market", rep.market_id},
        {"period", rep.period},
        {"cr", std::move(cr)},
        {"hhi", round_to(rep.hhi, 5)},
        {"hhi_points", round_to(rep.hhi_points, 2)},
        {"di", round_to(rep.di, 5)},
        {"rosenbluth_standard", round_to(rep.rosenbluth_standard, 5)},
        {"rosenbluth_paper_literal", round_to(rep.rosenbluth_paper_literal, 5)},
        {"cci", round_to(rep.cci, 5)},
        {"pareto_top20", round_to(rep.pareto_top20, 5)},
        {"hhi_band", to_string(rep.hhi_band)},
        {"cr4_band", to_string(rep.cr4_band)},
        {"notes", rep.notes},
    };
}

std::string to_markdown(const IndexReport& rep) {
    std::ostringstream out;
    out << "### Indices for " << rep.market_id;
    if (!rep.period.empty()) out << " (" << rep.period << ")";
    out << "\n\n";
    out << "| index | value |\n|---|---|\n";
    for (const auto& [k, value] : rep.cr)
        out << "| CR" << k << " | " << fmt(value, 5) << " |\n";
    out << "| HHI | " << fmt(rep.hhi, 5) << " |\n";
    out << "| HHI (points) | " << fmt(rep.hhi_points, 0) << " |\n";
    out << "| Dominance index | " << fmt(rep.di, 5) << " |\n";
    out << "| Rosenbluth (standard) | " << fmt(rep.rosenbluth_standard, 5) << " |\n";
    out << "| Rosenbluth (paper literal) | " << fmt(rep.rosenbluth_paper_literal, 5)
        << " |\n";
    out << "| CCI | " << fmt(rep.cci, 5) << " |\n";
    out << "| Top-20% share | " << fmt(rep.pareto_top20, 5) << " |\n";
    out << "| HHI band | " << to_string(rep.hhi_band) << " |\n";
    out << "| CR4 band | " << to_string(rep.cr4_band) << " |\n";
    for (const auto& note : rep.notes) out << "\nNote: " << note << "\n";
    return out.str();
}

nlohmann::json to_json(const MergerVerdict& verdict, const std::string& market_id,
                       const std::string& firm_a, const std::string& firm_b) {
    return nlohmann::json{
        {"schema_version", kSchemaVersion},
        {"market", market_id},
        {"merged", {firm_a, firm_b}},
        {"h0", round_to(verdict.h0, 5)},
        {"h1", round_to(verdict.h1, 5)},
        {"delta", round_to(verdict.delta, 5)},
        {"rule", to_string(verdict.rule)},
    };
}

std::string to_markdown(const MergerVerdict& verdict, const std::string& market_id,
                        const std::string& firm_a, const std::string& firm_b) {
    std::ostringstream out;
    out << "### Merger screen: " << firm_a << " + " << firm_b << " in "
        << market_id << "\n\n";
    out << "| quantity | value |\n|---|---|\n";
    out << "| H0 (pre) | " << fmt(verdict.h0, 5) << " |\n";
    out << "| H1 (post) | " << fmt(verdict.h1, 5) << " |\n";
    out << "| delta | " << fmt(verdict.delta, 5) << " |\n";
    out << "| rule | " << to_string(verdict.rule) << " |\n";
    return out.str();
}

nlohmann::json to_json(const ClusterSummary& summary,
                       const std::vector<std::string>& dropped) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& group : summary.groups) {
        nlohmann::json centroid = nlohmann::json::array();
        for (double c : group.centroid) centroid.push_back(round_to(c, 5));
        clusters.push_back(nlohmann::json{{"index", group.index},
                                          {"centroid", std::move(centroid)},
                                          {"members", group.members}});
    }
    return nlohmann::json{
        {"schema_version", kSchemaVersion},
        {"k", summary.groups.size()},
        {"clusters", std::move(clusters)},
        {"within_sse", round_to(summary.within_sse, 6)},
        {"iterations", summary.iterations},
        {"dropped", dropped},
    };
}

std::string to_markdown(const ClusterSummary& summary,
                        const std::vector<std::string>& dropped) {
    std::ostringstream out;
    out << "### Clusters (k=" << summary.groups.size() << ")\n\n";
    for (const auto& group : summary.groups) {
        out << "- GR" << group.index + 1 << " (centroid";
        for (double c : group.centroid) out << " " << fmt(c, 3);
        out << "): ";
        for (std::size_t i = 0; i < group.members.size(); ++i) {
            if (i > 0) out << ", ";
            out << group.members[i];
        }
        out << "\n";
    }
    out << "\nWithin-cluster SSE: " << fmt(summary.within_sse, 6)
        << " (iterations: " << summary.iterations << ")\n";
    if (!dropped.empty()) {
        out << "Dropped for missing values: ";
        for (std::size_t i = 0; i < dropped.size(); ++i) {
            if (i > 0) out << ", ";
            out << dropped[i];
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json stats_json(const std::string& column, const DescriptiveSummary& d,
                          const FiveNumberSummary& f) {
    nlohmann::json outliers = nlohmann::json::array();
    for (const auto& o : f.outliers)
        outliers.push_back(
            nlohmann::json{{"label", o.label}, {"value", round_to(o.value, 5)}});

    nlohmann::json j{
        {"schema_version", kSchemaVersion},
        {"column", column},
        {"n", d.n},
        {"mean", round_to(d.mean, 5)},
        {"five_number",
         {{"min", round_to(f.min, 5)},
          {"lower_hinge", round_to(f.lower_hinge, 5)},
          {"median", round_to(f.median, 5)},
          {"upper_hinge", round_to(f.upper_hinge, 5)},
          {"max", round_to(f.max, 5)},
          {"iqr", round_to(f.iqr, 5)},
          {"lower_fence", round_to(f.lower_fence, 5)},
          {"upper_fence", round_to(f.upper_fence, 5)}}},
        {"outliers", std::move(outliers)},
    };
    if (d.sample_std) j["sample_std"] = round_to(*d.sample_std, 5);
    // CV is reported as an integer percentage, Table-3 style.
    if (d.cv) j["cv_percent"] = static_cast<long long>(std::llround(*d.cv * 100.0));
    return j;
}

std::string stats_markdown(const std::string& column, const DescriptiveSummary& d,
                           const FiveNumberSummary& f) {
    std::ostringstream out;
    out << "### Column " << column << "\n\n";
    out << "| statistic | value |\n|---|---|\n";
    out << "| n | " << d.n << " |\n";
    out << "| mean | " << fmt(d.mean, 5) << " |\n";
    if (d.sample_std) out << "| sample std | " << fmt(*d.sample_std, 5) << " |\n";
    if (d.cv) out << "| CV | " << std::llround(*d.cv * 100.0) << "% |\n";
    out << "| min | " << fmt(f.min, 5) << " |\n";
    out << "| lower hinge | " << fmt(f.lower_hinge, 5) << " |\n";
    out << "| median | " << fmt(f.median, 5) << " |\n";
    out << "| upper hinge | " << fmt(f.upper_hinge, 5) << " |\n";
    out << "| max | " << fmt(f.max, 5) << " |\n";
    out << "| IQR | " << fmt(f.iqr, 5) << " |\n";
    out << "| fences | " << fmt(f.lower_fence, 5) << " / " << fmt(f.upper_fence, 5)
        << " |\n";
    if (f.outliers.empty()) {
        out << "\nNo outliers.\n";
    } else {
        out << "\nOutliers: ";
        for (std::size_t i = 0; i < f.outliers.size(); ++i) {
            if (i > 0) out << ", ";
            out << f.outliers[i].label << " (" << fmt(f.outliers[i].value, 5) << ")";
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json regression_json(const std::string& x_column,
                               const std::string& y_column,
                               const RegressionFit& fit) {
    return nlohmann::json{
        {"schema_version", kSchemaVersion},
        {"x", x_column},
        {"y", y_column},
        {"n", fit.n},
        {"slope", round_to(fit.slope, 4)},
        {"intercept", round_to(fit.intercept, 4)},
        {"r2", round_to(fit.r2, 4)},
    };
}

std::string regression_markdown(const std::string& x_column,
                                const std::string& y_column,
                                const RegressionFit& fit) {
    std::ostringstream out;
    out << "### Regression " << y_column << " on " << x_column << "\n\n";
    out << y_column << " = " << fmt(fit.slope, 4) << " * " << x_column;
    if (fit.intercept >= 0)
        out << " + " << fmt(fit.intercept, 4);
    else
        out << " - " << fmt(-fit.intercept, 4);
    out << "   (r2 = " << fmt(fit.r2, 4) << ", n = " << fit.n << ")\n";
    return out.str();
}

namespace {

void published_section(std::ostringstream& out,
                       const std::vector<PublishedIndexRow>& rows) {
    validate_published_ordering(rows);
    out << "## Published indices\n\n";
    out << "| year | CR4 | CR8 | HHI | B (as printed) | CCI | HHI band | CR4 band "
           "|\n|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : rows) {
        out << "| " << row.year << " | " << fmt(row.cr4, 5) << " | "
            << fmt(row.cr8, 5) << " | " << fmt(row.hhi, 5) << " | " << fmt(row.b, 5)
            << " | " << fmt(row.cci, 5) << " | "
            << to_string(classify_hhi(row.hhi * 10000.0)) << " | "
            << to_string(classify_cr4(row.cr4 * 100.0)) << " |\n";
    }
    const auto medians = published_medians(rows);
    out << "\nMedians: CR4 " << fmt(medians.cr4, 4) << ", HHI "
        << fmt(medians.hhi, 4) << ", CCI " << fmt(medians.cci, 4) << "\n";
    out << "\nNote: the published B column exceeds the standard Rosenbluth bound "
           "(B <= 1) and is shown as printed, not recomputed.\n\n";
}

void countries_section(std::ostringstream& out,
                       const std::vector<CountryIndexRecord>& records,
                       const KMeansConfig& cluster_config) {
    out << "## Cross-country concentration\n\n";

    std::vector<LabeledValue> cr3_col, hhi_col;
    std::vector<double> cr3_vals, hhi_vals;
    std::vector<FeaturePoint> points;
    std::vector<std::string> dropped;
    for (const auto& rec : records) {
        if (rec.cr3) cr3_col.push_back({rec.country, *rec.cr3});
        if (rec.hhi) hhi_col.push_back({rec.country, *rec.hhi});
        if (rec.complete()) {
            cr3_vals.push_back(*rec.cr3);
            hhi_vals.push_back(*rec.hhi);
            points.push_back({rec.country, {*rec.cr3, *rec.hhi}});
        } else {
            dropped.push_back(rec.country);
        }
    }
    out << records.size() << " records, " << points.size() << " complete.\n\n";

    for (const auto* col : {&cr3_col, &hhi_col}) {
        const std::string name = col == &cr3_col ? "cr3" : "hhi";
        if (col->size() < 3) continue;
        std::vector<double> values;
        for (const auto& lv : *col) values.push_back(lv.value);
        out << stats_markdown(name, describe(values), five_number(*col)) << "\n";
    }

    if (cr3_vals.size() >= 3) {
        out << regression_markdown("cr3", "hhi", ols_fit(cr3_vals, hhi_vals))
            << "\n";
    }

    for (int k : {2, 3}) {
        if (points.size() < static_cast<std::size_t>(k)) continue;
        KMeansConfig config = cluster_config;
        config.k = k;
        const auto result = kmeans(points, config);
        out << to_markdown(summarize_clusters(result, points), dropped) << "\n";
    }
}

void panel_section(std::ostringstream& out, const LicensingPanel& panel) {
    out << "## Licensing panel\n\n";
    out << "| automaker | mean | sample std | CV |\n|---|---|---|---|\n";
    for (const auto& automaker : panel.automakers()) {
        const auto series = panel.series(automaker);
        const auto d = describe(series);
        out << "| " << automaker << " | " << fmt(d.mean, 0) << " | "
            << (d.sample_std ? fmt(*d.sample_std, 0) : "n.d.") << " | ";
        if (d.cv)
            out << std::llround(*d.cv * 100.0) << "% |\n";
        else
            out << "n.d. |\n";
    }

    bool has_others = false;
    for (const auto& automaker : panel.automakers()) {
        std::string lowered = automaker;
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (lowered == "others") has_others = true;
    }
    if (has_others)
        out << "\nCaveat: the aggregate pseudo-firm OTHERS is treated as a single "
               "firm, which biases rank-sensitive indices.\n";

    out << "\n| period | CR4 | CR8 | HHI | B (standard) | CCI "
           "|\n|---|---|---|---|---|---|\n";
    std::vector<double> cr4s, hhis, ccis;
    for (const auto& period : panel.periods()) {
        const auto snap = snapshot_from_panel(panel, period, "panel");
        const auto rep = index_report(snap);
        const int n = static_cast<int>(snap.size());
        const double cr4 = rep.cr.at(std::min(4, n));
        const double cr8 = rep.cr.at(std::min(8, n));
        cr4s.push_back(cr4);
        hhis.push_back(rep.hhi);
        ccis.push_back(rep.cci);
        out << "| " << period << " | " << fmt(cr4, 5) << " | " << fmt(cr8, 5)
            << " | " << fmt(rep.hhi, 5) << " | " << fmt(rep.rosenbluth_standard, 5)
            << " | " << fmt(rep.cci, 5) << " |\n";
    }
    if (!cr4s.empty()) {
        out << "\nMedians: CR4 " << fmt(column_median(cr4s), 4) << ", HHI "
            << fmt(column_median(hhis), 4) << ", CCI "
            << fmt(column_median(ccis), 4) << "\n";
    }
    out << "\n";
}

} // namespace

std::string dossier_markdown(const Dossier& input) {
    std::ostringstream out;
    out << "# Market concentration report\n\n";
    if (input.published) published_section(out, *input.published);
    if (input.countries)
        countries_section(out, *input.countries, input.cluster_config);
    if (input.panel) panel_section(out, *input.panel);
    if (!input.snapshots.empty()) {
        out << "## Market snapshots\n\n";
        for (const auto& rep : input.snapshots) out << to_markdown(rep) << "\n";
    }
    return out.str();
}

} // namespace report

} // namespace concentra
