#include "doctest.h"

#include <cmath>

#include "concentra/report.hpp"
#include "concentra/svg.hpp"
#include "test_util.hpp"

using namespace concentra;
using testutil::TempFile;

namespace {

IndexReport demo_report() {
    const auto snap = MarketSnapshot::from_counts(
        std::map<std::string, double>{{"A", 40}, {"B", 30}, {"C", 20}, {"D", 10}},
        "demo", "example");
    return index_report(snap, std::vector<int>{2});
}

} // namespace

TEST_CASE("published index fixture") {
    const auto rows = load_published_indices(testutil::data_path("table4_indices.csv"));
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].year == "2012");
    CHECK(rows[0].cr4 == 0.70508);
    CHECK(rows[4].b == 13.31406);

    CHECK_NOTHROW(validate_published_ordering(rows));

    const auto medians = published_medians(rows);
    CHECK(std::abs(medians.cr4 - 0.6016) <= 5e-4);
    CHECK(std::abs(medians.hhi - 0.1156) <= 5e-4);
    CHECK(std::abs(medians.cci - 0.338) <= 5e-4);
}

TEST_CASE("published index loader errors and ordering validation") {
    TempFile bad_fraction("year,cr4,cr8,hhi,b,cci\n2012,1.2,0.9,0.1,2.0,0.4\n");
    CHECK_THROWS_AS(load_published_indices(bad_fraction.path()), SchemaError);

    TempFile short_row("year,cr4,cr8,hhi,b,cci\n2012,0.7,0.9,0.1,2.0\n");
    CHECK_THROWS_AS(load_published_indices(short_row.path()), ParseError);

    TempFile violated("year,cr4,cr8,hhi,b,cci\n2012,0.6,0.9,0.5,2.0,0.4\n");
    const auto rows = load_published_indices(violated.path());
    try {
        validate_published_ordering(rows);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("2012") != std::string::npos);
    }
}

TEST_CASE("index report json round trip") {
    const auto rep = demo_report();
    const auto j = report::to_json(rep);
    CHECK(j["schema_version"] == 1);
    CHECK(j["market"] == "demo");
    CHECK(j["cr"]["2"] == 0.7);
    CHECK(j["hhi"] == 0.3);
    CHECK(j["cci"] == 0.644);
    CHECK(j["hhi_band"] == "highly_concentrated");

    const std::string dumped = j.dump(2);
    const auto reparsed = nlohmann::json::parse(dumped);
    CHECK(reparsed == j);
    CHECK(reparsed.dump(2) == dumped);

    // serialized values stay within 1e-4 of full precision
    CHECK(std::abs(reparsed["hhi"].get<double>() - rep.hhi) <= 1e-4);
    CHECK(std::abs(reparsed["di"].get<double>() - rep.di) <= 1e-4);
    CHECK(std::abs(reparsed["cci"].get<double>() - rep.cci) <= 1e-4);
    CHECK(std::abs(reparsed["rosenbluth_standard"].get<double>() -
                   rep.rosenbluth_standard) <= 1e-4);
    CHECK(classify_hhi(reparsed["hhi_points"].get<double>()) == rep.hhi_band);
}

TEST_CASE("rounding helper") {
    CHECK(report::round_to(0.123456, 5) == 0.12346);
    CHECK(report::round_to(-0.276997, 4) == -0.277);
    CHECK(report::round_to(3000.0, 2) == 3000.0);
    CHECK(report::fmt(0.60159, 4) == "0.6016");
}

TEST_CASE("verdict and cluster serialization") {
    const auto verdict = merger_screen(0.12, 0.15);
    const auto vj = report::to_json(verdict, "m", "A", "B");
    CHECK(vj["rule"] == "small_increase");
    CHECK(vj["h0"] == 0.12);
    CHECK(vj["delta"] == 0.03);
    CHECK(report::to_markdown(verdict, "m", "A", "B").find("small_increase") !=
          std::string::npos);

    std::vector<FeaturePoint> points;
    for (const auto& rec :
         load_country_indices(testutil::data_path("table2_countries.csv")))
        if (rec.complete()) points.push_back({rec.country, {*rec.cr3, *rec.hhi}});
    KMeansConfig config;
    config.k = 2;
    const auto result = kmeans(points, config);
    const auto summary = summarize_clusters(result, points);
    const auto cj = report::to_json(summary, {"United Kingdom"});
    CHECK(cj["k"] == 2);
    CHECK(cj["clusters"][0]["members"].size() == 4);
    CHECK(cj["dropped"][0] == "United Kingdom");
    const auto md = report::to_markdown(summary, {"United Kingdom"});
    CHECK(md.find("Germany") != std::string::npos);
    CHECK(md.find("United Kingdom") != std::string::npos);
}

TEST_CASE("dossier assembly") {
    report::Dossier dossier;
    dossier.countries =
        load_country_indices(testutil::data_path("table2_countries.csv"));
    dossier.published =
        load_published_indices(testutil::data_path("table4_indices.csv"));
    dossier.snapshots.push_back(demo_report());

    const auto md = report::dossier_markdown(dossier);
    CHECK(md.find("## Published indices") != std::string::npos);
    // the hhi median 0.11565 lands just above the half and prints as 0.1157
    CHECK(md.find("Medians: CR4 0.6016, HHI 0.1157, CCI 0.3378") !=
          std::string::npos);
    CHECK(md.find("moderately_concentrated") != std::string::npos);
    CHECK(md.find("## Cross-country concentration") != std::string::npos);
    CHECK(md.find("Regression hhi on cr3") != std::string::npos);
    CHECK(md.find("0.7434") != std::string::npos);
    CHECK(md.find("Italy") != std::string::npos);
    CHECK(md.find("Clusters (k=2)") != std::string::npos);
    CHECK(md.find("Clusters (k=3)") != std::string::npos);
    CHECK(md.find("### Indices for demo") != std::string::npos);

    // injected ordering violation aborts the dossier
    report::Dossier broken;
    broken.published = std::vector<PublishedIndexRow>{
        {"2099", 0.6, 0.9, 0.5, 2.0, 0.4}};
    CHECK_THROWS_AS(report::dossier_markdown(broken), DomainError);
}

TEST_CASE("dossier panel section") {
    TempFile panel_csv(
        "automaker,period,count\nA,2012,60\nA,2013,50\nB,2012,30\nB,2013,40\n"
        "OTHERS,2012,10\nOTHERS,2013,10\n");
    report::Dossier dossier;
    dossier.panel = load_licensing_panel(panel_csv.path());
    const auto md = report::dossier_markdown(dossier);
    CHECK(md.find("## Licensing panel") != std::string::npos);
    CHECK(md.find("OTHERS") != std::string::npos);
    CHECK(md.find("Caveat") != std::string::npos);
    CHECK(md.find("| 2012 |") != std::string::npos);
}

TEST_CASE("svg output") {
    std::vector<FeaturePoint> points;
    std::vector<LabeledValue> hhi_col;
    for (const auto& rec :
         load_country_indices(testutil::data_path("table2_countries.csv"))) {
        if (rec.complete()) {
            points.push_back({rec.country, {*rec.cr3, *rec.hhi}});
            hhi_col.push_back({rec.country, *rec.hhi});
        }
    }
    KMeansConfig config;
    config.k = 2;
    const auto result = kmeans(points, config);

    const auto scatter = scatter_svg(points, result.centroids, "clusters", "cr3", "hhi");
    CHECK(scatter.rfind("<svg", 0) == 0);
    CHECK(scatter.find("</svg>") != std::string::npos);
    CHECK(scatter.find("Brazil") != std::string::npos);
    CHECK(scatter.find("crimson") != std::string::npos); // centroid crosses

    const auto box = boxplot_svg(five_number(hhi_col), "hhi");
    CHECK(box.rfind("<svg", 0) == 0);
    CHECK(box.find("Italy") != std::string::npos);
    CHECK(box.find("rect") != std::string::npos);
}
