#include "concentra/indices.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "concentra/kernels.hpp"

namespace concentra {

namespace {

constexpr double kDegenerateEps = 1e-12;

bool is_others_row(const std::string& id) {
    if (id.size() != 6) return false;
    static const char ref[] = "others";
    for (std::size_t i = 0; i < 6; ++i)
        if (std::tolower(static_cast<unsigned char>(id[i])) != ref[i]) return false;
    return true;
}

} // namespace

const char* to_string(ConcentrationBand band) {
    switch (band) {
        case ConcentrationBand::Unconcentrated: return "unconcentrated";
        case ConcentrationBand::ModeratelyConcentrated:
            return "moderately_concentrated";
        case ConcentrationBand::HighlyConcentrated: return "highly_concentrated";
    }
    return "unknown";
}

const char* to_string(MergerRule rule) {
    switch (rule) {
        case MergerRule::Devolved: return "devolved";
        case MergerRule::SmallIncrease: return "small_increase";
        case MergerRule::NoCausalNexus: return "no_causal_nexus";
        case MergerRule::FlaggedForReview: return "flagged_for_review";
    }
    return "unknown";
}

double concentration_ratio(const MarketSnapshot& snapshot, int k) {
    if (k < 1)
        throw OutOfRange("concentration_ratio requires k >= 1");
    const auto shares = snapshot.shares();
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                   shares.size());
    if (take == shares.size())
        return 1.0; // clamped: the top-k cover the whole market
    return kernels::sum(shares.first(take));
}

double hhi(const MarketSnapshot& snapshot) {
    return kernels::sum_squares(snapshot.shares());
}

double hhi_points(const MarketSnapshot& snapshot) {
    return hhi(snapshot) * 10000.0;
}

double dominance_general(const MarketSnapshot& snapshot, double alpha) {
    if (!(alpha > 0.0))
        throw NonPositiveAlpha("dominance_general requires alpha > 0");
    const auto shares = snapshot.shares();

    if (alpha == 1.0) {
        const double s = kernels::sum(shares);
        return kernels::sum_squares(shares) / (s * s);
    }
    if (alpha == 2.0) {
        const double s = kernels::sum_squares(shares);
        return kernels::sum_quads(shares) / (s * s);
    }

    std::vector<double> powered(shares.size());
    for (std::size_t i = 0; i < shares.size(); ++i)
        powered[i] = std::pow(shares[i], alpha);
    const double s = kernels::sum(powered);
    return kernels::sum_squares(powered) / (s * s);
}

double dominance_index(const MarketSnapshot& snapshot) {
    return dominance_general(snapshot, 2.0);
}

double rosenbluth(const MarketSnapshot& snapshot, RosenbluthVariant variant) {
    const auto shares = snapshot.shares();
    const double weighted = variant == RosenbluthVariant::Standard
                                ? kernels::rank_weighted_sum(shares)
                                : kernels::sum(shares);
    const double denominator = 2.0 * weighted - 1.0;
    if (denominator <= 0.0 || std::abs(denominator) < kDegenerateEps) {
        std::ostringstream msg;
        msg << "rosenbluth denominator " << denominator << " is degenerate";
        throw DegenerateDenominator(msg.str());
    }
    return 1.0 / denominator;
}

double cci(const MarketSnapshot& snapshot) {
    const auto shares = snapshot.shares();
    const double leader = shares[0];
    const auto tail = shares.subspan(1);
    // sum p^2 * (1 + (1 - p)) over the tail, split into power sums.
    return leader + 2.0 * kernels::sum_squares(tail) - kernels::sum_cubes(tail);
}

double pareto_top_share(const MarketSnapshot& snapshot, double fraction_of_firms) {
    if (!(fraction_of_firms > 0.0) || fraction_of_firms > 1.0)
        throw OutOfRange("fraction_of_firms must be in (0, 1]");
    const auto shares = snapshot.shares();
    const double n = static_cast<double>(shares.size());
    // Nudge below the product so 0.2 * 5 does not round up to 2 firms.
    auto take = static_cast<std::size_t>(
        std::ceil(fraction_of_firms * n - 1e-9));
    take = std::clamp<std::size_t>(take, 1, shares.size());
    if (take == shares.size()) return 1.0;
    return kernels::sum(shares.first(take));
}

ConcentrationBand classify_hhi(double points) {
    // Upper boundary gets a small allowance: points computed from a valid
    // snapshot can land an ulp above 10000.
    if (!(points > 0.0) || points > 10000.0 + 1e-6) {
        std::ostringstream msg;
        msg << "hhi points " << points << " outside (0, 10000]";
        throw OutOfRange(msg.str());
    }
    if (points < 1500.0) return ConcentrationBand::Unconcentrated;
    if (points <= 2500.0) return ConcentrationBand::ModeratelyConcentrated;
    return ConcentrationBand::HighlyConcentrated;
}

ConcentrationBand classify_cr4(double cr4_percent) {
    if (cr4_percent < 0.0 || cr4_percent > 100.0 + 1e-6) {
        std::ostringstream msg;
        msg << "cr4 percent " << cr4_percent << " outside [0, 100]";
        throw OutOfRange(msg.str());
    }
    if (cr4_percent <= 45.0) return ConcentrationBand::Unconcentrated;
    if (cr4_percent <= 60.0) return ConcentrationBand::ModeratelyConcentrated;
    return ConcentrationBand::HighlyConcentrated;
}

MergerVerdict merger_screen(double h0, double h1, double rule_b_delta) {
    // Values computed from valid snapshots can exceed 1 by accumulated
    // rounding, hence the 1e-9 allowance.
    if (!(h0 > 0.0) || h0 > 1.0 + 1e-9)
        throw OutOfRange("h0 must be in (0, 1]");
    if (h1 > 1.0 + 1e-9)
        throw OutOfRange("h1 must be at most 1");
    if (h1 < h0 - 1e-12)
        throw InvalidOrder("h1 must not be below h0");
    if (!(rule_b_delta > 0.0))
        throw OutOfRange("rule-b delta threshold must be positive");

    MergerVerdict verdict;
    verdict.h0 = h0;
    verdict.h1 = h1;
    verdict.delta = h1 - h0;

    if (h1 < 0.1)
        verdict.rule = MergerRule::Devolved;
    else if (h1 < 0.18 && verdict.delta < rule_b_delta)
        verdict.rule = MergerRule::SmallIncrease;
    else if (h1 >= 0.18 && verdict.delta < 0.005)
        verdict.rule = MergerRule::NoCausalNexus;
    else
        verdict.rule = MergerRule::FlaggedForReview;
    return verdict;
}

std::pair<MarketSnapshot, MergerVerdict> merge_firms(const MarketSnapshot& snapshot,
                                                     const std::string& firm_a,
                                                     const std::string& firm_b,
                                                     double rule_b_delta) {
    if (firm_a == firm_b)
        throw SameFirm("cannot merge a firm with itself: " + firm_a);
    const auto rank_a = snapshot.rank_of(firm_a);
    if (!rank_a)
        throw UnknownFirm("unknown firm: " + firm_a);
    const auto rank_b = snapshot.rank_of(firm_b);
    if (!rank_b)
        throw UnknownFirm("unknown firm: " + firm_b);

    const std::string merged_id =
        std::min(firm_a, firm_b) + "+" + std::max(firm_a, firm_b);

    std::vector<std::pair<std::string, double>> entries;
    entries.reserve(snapshot.size() - 1);
    double merged_share = 0.0;
    for (const auto& firm : snapshot.firms()) {
        if (firm.firm_id == firm_a || firm.firm_id == firm_b)
            merged_share += firm.share;
        else
            entries.emplace_back(firm.firm_id, firm.share);
    }
    entries.emplace_back(merged_id, merged_share);

    std::vector<std::string> notes = snapshot.notes();
    notes.push_back("merger: " + merged_id);
    auto merged = MarketSnapshot::build(std::move(entries), snapshot.market_id(),
                                        snapshot.period(), std::move(notes));

    const double h0 = hhi(snapshot);
    const double h1 = hhi(merged);
    return {std::move(merged), merger_screen(h0, std::min(h1, 1.0), rule_b_delta)};
}

IndexReport index_report(const MarketSnapshot& snapshot,
                         std::span<const int> extra_k) {
    IndexReport report;
    report.market_id = snapshot.market_id();
    report.period = snapshot.period();
    report.notes = snapshot.notes();

    const int n = static_cast<int>(snapshot.size());

    std::set<int> requested = {1, 3, 4, 8, n};
    for (int k : extra_k) {
        if (k < 1)
            throw OutOfRange("requested cr k must be >= 1");
        requested.insert(k);
    }
    for (int k : requested) {
        const int effective = std::min(k, n);
        report.cr[effective] = concentration_ratio(snapshot, effective);
        if (k > n) {
            std::ostringstream note;
            note << "cr" << k << " clamped to n=" << n;
            report.notes.push_back(note.str());
        }
    }

    report.hhi = hhi(snapshot);
    report.hhi_points = hhi_points(snapshot);
    report.di = dominance_index(snapshot);
    report.rosenbluth_standard = rosenbluth(snapshot, RosenbluthVariant::Standard);
    report.rosenbluth_paper_literal =
        rosenbluth(snapshot, RosenbluthVariant::PaperLiteral);
    report.cci = cci(snapshot);
    report.pareto_top20 = pareto_top_share(snapshot, 0.2);
    report.hhi_band = classify_hhi(report.hhi_points);
    report.cr4_band = classify_cr4(report.cr.at(std::min(4, n)) * 100.0);

    for (const auto& firm : snapshot.firms()) {
        if (is_others_row(firm.firm_id)) {
            report.notes.push_back(
                "aggregate pseudo-firm '" + firm.firm_id +
                "' present; rank-sensitive indices may be biased");
            break;
        }
    }
    return report;
}

} // namespace concentra
