// concentra: market concentration indices, merger screening and the
// cross-market statistics reports, from CSV inputs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "concentra/cluster.hpp"
#include "concentra/errors.hpp"
#include "concentra/indices.hpp"
#include "concentra/market.hpp"
#include "concentra/report.hpp"
#include "concentra/stats.hpp"
#include "concentra/svg.hpp"

namespace {

using namespace concentra;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

struct GlobalOptions {
    std::string format = "json";
    bool chart = false;
    std::string chart_path;
    std::uint64_t seed = 0;
    double rule_b_delta = 0.1;
};

void add_global_options(CLI::App* cmd, GlobalOptions& opts) {
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"json", "md"}))
        ->capture_default_str();
    cmd->add_flag("--chart", opts.chart, "Write SVG chart(s) alongside the output");
    cmd->add_option("--chart-path", opts.chart_path,
                    "Path (or prefix, for report) of the SVG output");
    cmd->add_option("--seed", opts.seed, "Seed for clustering restarts")
        ->capture_default_str();
    cmd->add_option("--rule-b-delta", opts.rule_b_delta,
                    "Delta threshold of merger screening rule (b)")
        ->check(CLI::Range(1e-9, 1.0))
        ->capture_default_str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write file: " + path);
    out << content;
}

MarketSnapshot snapshot_from_file(const std::string& path, bool as_counts) {
    const ShareFile file = load_share_csv(path);
    if (as_counts)
        return MarketSnapshot::from_counts(file.entries, file.market_id,
                                           file.period);
    return MarketSnapshot::from_shares(file.entries, file.market_id, file.period);
}

void emit(const GlobalOptions& opts, const nlohmann::json& json,
          const std::string& markdown) {
    if (opts.format == "md")
        std::cout << markdown;
    else
        std::cout << json.dump(2) << "\n";
}

std::optional<double> country_column(const CountryIndexRecord& rec,
                                     const std::string& column) {
    if (column == "cr3") return rec.cr3;
    if (column == "hhi") return rec.hhi;
    if (column == "num_firms") return static_cast<double>(rec.num_firms);
    if (column == "total_production")
        return static_cast<double>(rec.total_production);
    throw DomainError("unknown column: " + column +
                      " (expected cr3, hhi, num_firms or total_production)");
}

// Sniff the file kind from its header line.
enum class FileKind { Country, Panel, Shares };

FileKind sniff_kind(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open file: " + path);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first && line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' &&
            line[2] == '\xBF')
            line.erase(0, 3);
        first = false;
        std::string stripped = line;
        stripped.erase(0, stripped.find_first_not_of(" \t"));
        if (stripped.empty() || stripped[0] == '#') continue;
        if (stripped.rfind("country,", 0) == 0) return FileKind::Country;
        if (stripped.rfind("automaker,", 0) == 0) return FileKind::Panel;
        if (stripped.rfind("firm,", 0) == 0) return FileKind::Shares;
        throw SchemaError(path + ": unrecognized header: " + stripped);
    }
    throw SchemaError(path + ": missing header row");
}

int cmd_indices(const std::string& path, const std::vector<int>& k_list,
                bool as_counts, const GlobalOptions& opts) {
    const auto snapshot = snapshot_from_file(path, as_counts);
    const auto rep = index_report(snapshot, k_list);
    emit(opts, report::to_json(rep), report::to_markdown(rep));
    return kExitOk;
}

int cmd_screen(const std::string& path, const std::vector<std::string>& pair,
               bool as_counts, const GlobalOptions& opts) {
    const auto snapshot = snapshot_from_file(path, as_counts);
    const auto [merged, verdict] =
        merge_firms(snapshot, pair[0], pair[1], opts.rule_b_delta);
    (void)merged;
    emit(opts, report::to_json(verdict, snapshot.market_id(), pair[0], pair[1]),
         report::to_markdown(verdict, snapshot.market_id(), pair[0], pair[1]));
    return kExitOk;
}

int cmd_cluster(const std::string& path, int k, int restarts,
                const std::string& scale, const GlobalOptions& opts) {
    const auto records = load_country_indices(path);
    std::vector<FeaturePoint> points;
    std::vector<std::string> dropped;
    for (const auto& rec : records) {
        if (rec.complete())
            points.push_back({rec.country, {*rec.cr3, *rec.hhi}});
        else
            dropped.push_back(rec.country);
    }

    KMeansConfig config;
    config.k = k;
    config.restarts = restarts;
    config.seed = opts.seed;
    config.scaling = scale == "zscore" ? FeatureScaling::ZScore : FeatureScaling::None;

    const auto result = kmeans(points, config);
    const auto summary = summarize_clusters(result, points);
    emit(opts, report::to_json(summary, dropped),
         report::to_markdown(summary, dropped));

    if (opts.chart) {
        const std::string out_path =
            opts.chart_path.empty() ? "cluster.svg" : opts.chart_path;
        write_text_file(out_path, scatter_svg(points, result.centroids,
                                              "k-means clusters", "cr3", "hhi"));
        std::cerr << "chart written: " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_stats(const std::string& path, const std::string& column,
              const GlobalOptions& opts) {
    std::vector<LabeledValue> series;
    const FileKind kind = sniff_kind(path);
    if (kind == FileKind::Country) {
        for (const auto& rec : load_country_indices(path)) {
            const auto value = country_column(rec, column);
            if (value) series.push_back({rec.country, *value});
        }
    } else if (kind == FileKind::Panel) {
        const auto panel = load_licensing_panel(path);
        const auto it = panel.rows.find(column);
        if (it == panel.rows.end())
            throw DomainError("unknown automaker: " + column);
        for (const auto& [period, count] : it->second)
            series.push_back({period, static_cast<double>(count)});
    } else {
        throw SchemaError(path + ": stats expects a country or panel CSV");
    }

    std::vector<double> values;
    for (const auto& lv : series) values.push_back(lv.value);
    if (values.empty())
        throw TooFewPoints("column " + column + " has no values");
    const auto d = describe(values);
    const auto f = five_number(series);

    emit(opts, report::stats_json(column, d, f), report::stats_markdown(column, d, f));

    if (opts.chart) {
        const std::string out_path =
            opts.chart_path.empty() ? "boxplot.svg" : opts.chart_path;
        write_text_file(out_path, boxplot_svg(f, "Column " + column));
        std::cerr << "chart written: " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_regress(const std::string& path, const std::string& x_column,
                const std::string& y_column, const GlobalOptions& opts) {
    std::vector<double> x, y;
    for (const auto& rec : load_country_indices(path)) {
        const auto xv = country_column(rec, x_column);
        const auto yv = country_column(rec, y_column);
        if (xv && yv) {
            x.push_back(*xv);
            y.push_back(*yv);
        }
    }
    const auto fit = ols_fit(x, y);
    emit(opts, report::regression_json(x_column, y_column, fit),
         report::regression_markdown(x_column, y_column, fit));
    return kExitOk;
}

int cmd_report(const std::string& countries_path, const std::string& indices_path,
               const std::string& panel_path,
               const std::vector<std::string>& share_paths, bool as_counts,
               const GlobalOptions& opts) {
    report::Dossier dossier;
    dossier.cluster_config.seed = opts.seed;

    if (!countries_path.empty())
        dossier.countries = load_country_indices(countries_path);
    if (!indices_path.empty())
        dossier.published = load_published_indices(indices_path);
    if (!panel_path.empty())
        dossier.panel = load_licensing_panel(panel_path);
    for (const auto& path : share_paths)
        dossier.snapshots.push_back(index_report(snapshot_from_file(path, as_counts)));

    std::cout << report::dossier_markdown(dossier);

    if (opts.chart && dossier.countries) {
        const std::string prefix =
            opts.chart_path.empty() ? "report" : opts.chart_path;
        std::vector<FeaturePoint> points;
        std::vector<LabeledValue> hhi_col;
        for (const auto& rec : *dossier.countries) {
            if (rec.complete())
                points.push_back({rec.country, {*rec.cr3, *rec.hhi}});
            if (rec.hhi) hhi_col.push_back({rec.country, *rec.hhi});
        }
        if (points.size() >= 2) {
            KMeansConfig config = dossier.cluster_config;
            config.k = 2;
            const auto result = kmeans(points, config);
            write_text_file(prefix + "_cluster.svg",
                            scatter_svg(points, result.centroids,
                                        "k-means clusters (k=2)", "cr3", "hhi"));
            std::cerr << "chart written: " << prefix << "_cluster.svg\n";
        }
        if (hhi_col.size() >= 3) {
            write_text_file(prefix + "_boxplot.svg",
                            boxplot_svg(five_number(hhi_col), "HHI"));
            std::cerr << "chart written: " << prefix << "_boxplot.svg\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Market concentration analytics"};
    app.require_subcommand(1);

    GlobalOptions opts;

    // indices
    std::string indices_file;
    std::vector<int> k_list;
    bool indices_counts = false;
    auto* indices_cmd =
        app.add_subcommand("indices", "Concentration indices for one market");
    indices_cmd->add_option("file", indices_file, "Share CSV (header firm,share)")
        ->required();
    indices_cmd->add_option("--k", k_list, "Extra CR k values")->delimiter(',');
    indices_cmd->add_flag("--counts", indices_counts,
                          "Treat the share column as raw counts");
    add_global_options(indices_cmd, opts);

    // screen
    std::string screen_file;
    std::vector<std::string> merge_pair;
    bool screen_counts = false;
    auto* screen_cmd = app.add_subcommand("screen", "Merger screening verdict");
    screen_cmd->add_option("file", screen_file, "Share CSV of the pre-merger market")
        ->required();
    screen_cmd->add_option("--merge", merge_pair, "The two firm ids to merge")
        ->delimiter(',')
        ->expected(2)
        ->required();
    screen_cmd->add_flag("--counts", screen_counts,
                         "Treat the share column as raw counts");
    add_global_options(screen_cmd, opts);

    // cluster
    std::string cluster_file;
    int cluster_k = 2;
    int cluster_restarts = 100;
    std::string cluster_scale = "none";
    auto* cluster_cmd =
        app.add_subcommand("cluster", "k-means over (cr3, hhi) country records");
    cluster_cmd->add_option("file", cluster_file, "Country index CSV")->required();
    cluster_cmd->add_option("--k", cluster_k, "Number of clusters")
        ->required()
        ->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--restarts", cluster_restarts, "Seeded restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cluster_cmd->add_option("--scale", cluster_scale, "Feature scaling")
        ->check(CLI::IsMember({"none", "zscore"}))
        ->capture_default_str();
    add_global_options(cluster_cmd, opts);

    // stats
    std::string stats_file, stats_column;
    auto* stats_cmd =
        app.add_subcommand("stats", "Descriptive + five-number summary of a column");
    stats_cmd->add_option("file", stats_file, "Country index or licensing panel CSV")
        ->required();
    stats_cmd->add_option("--column", stats_column,
                          "Column (country files) or automaker (panel files)")
        ->required();
    add_global_options(stats_cmd, opts);

    // regress
    std::string regress_file, regress_x = "cr3", regress_y = "hhi";
    auto* regress_cmd =
        app.add_subcommand("regress", "Least-squares fit between two columns");
    regress_cmd->add_option("file", regress_file, "Country index CSV")->required();
    regress_cmd->add_option("--x", regress_x, "Predictor column")
        ->capture_default_str();
    regress_cmd->add_option("--y", regress_y, "Response column")
        ->capture_default_str();
    add_global_options(regress_cmd, opts);

    // report
    std::string report_countries, report_indices, report_panel;
    std::vector<std::string> report_shares;
    bool report_counts = false;
    auto* report_cmd = app.add_subcommand("report", "Full markdown dossier");
    report_cmd->add_option("--countries", report_countries, "Country index CSV");
    report_cmd->add_option("--indices", report_indices, "Published index CSV");
    report_cmd->add_option("--panel", report_panel, "Licensing panel CSV");
    report_cmd->add_option("--shares", report_shares, "Share CSV files");
    report_cmd->add_flag("--counts", report_counts,
                         "Treat share columns as raw counts");
    add_global_options(report_cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (indices_cmd->parsed())
            return cmd_indices(indices_file, k_list, indices_counts, opts);
        if (screen_cmd->parsed())
            return cmd_screen(screen_file, merge_pair, screen_counts, opts);
        if (cluster_cmd->parsed())
            return cmd_cluster(cluster_file, cluster_k, cluster_restarts,
                               cluster_scale, opts);
        if (stats_cmd->parsed()) return cmd_stats(stats_file, stats_column, opts);
        if (regress_cmd->parsed())
            return cmd_regress(regress_file, regress_x, regress_y, opts);
        if (report_cmd->parsed()) {
            if (report_countries.empty() && report_indices.empty() &&
                report_panel.empty() && report_shares.empty()) {
                std::cerr << "error: report requires at least one input "
                             "(--countries, --indices, --panel or --shares)\n";
                return kExitInput;
            }
            return cmd_report(report_countries, report_indices, report_panel,
                              report_shares, report_counts, opts);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
