#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unicollab/corpus.hpp"

namespace unicollab {

/// Indicators that are normalized and aggregated across universities.
enum class Metric { P, FP, QP, FQP, QI, CI, FCI, DCI, CI_UNI, CI_DPR };
inline constexpr std::size_t kMetricCount = 10;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::P,  Metric::FP,  Metric::QP,  Metric::FQP,    Metric::QI,
    Metric::CI, Metric::FCI, Metric::DCI, Metric::CI_UNI, Metric::CI_DPR};
inline constexpr std::array<Metric, 5> kPerformanceMetrics = {Metric::P, Metric::FP, Metric::QP,
                                                              Metric::FQP, Metric::QI};

std::string_view to_string(Metric m);
/// Accepts the names above plus CI_IPR as an alias of CI_DPR.
std::optional<Metric> parse_metric(std::string_view name);

/// Which reading of collaboration intensity feeds Metric::CI.
enum class CiMode { Share, Ratio };

/// Indicators of one (university, sector) cell over the survey period.
/// Undefined values are empty optionals, never zero.
struct IndicatorRecord {
    std::string university;
    std::string sds;
    std::string area;

    std::size_t output = 0;            // O
    double fractional_output = 0.0;    // FO
    double strength = 0.0;             // SS
    double fractional_strength = 0.0;  // FSS
    std::optional<double> quality_index;
    double staff = 0.0;  // period-average headcount

    std::optional<double> productivity;
    std::optional<double> fractional_productivity;
    std::optional<double> quality_productivity;
    std::optional<double> fractional_quality_productivity;

    std::optional<double> ci_ratio;  // O / FO
    std::optional<double> ci_share;  // extramural fraction
    std::optional<double> ci_uni;
    std::optional<double> ci_dpr;
    std::optional<double> fci;
    std::optional<double> dci;

    std::optional<double> value(Metric m, CiMode ci_mode = CiMode::Share) const;

    friend bool operator==(const IndicatorRecord&, const IndicatorRecord&) = default;
};

/// 1 / number of distinct organizations on the publication.
double fractional_contribution(const Publication& pub);

/// (journal_id, year) -> impact factor divided by the publication-weighted
/// mean impact factor of the sector.
using NormalizedImpact = std::map<std::pair<std::string, int>, double>;

/// Empty for a sector without publications. Throws std::invalid_argument
/// naming the pair when a publication's journal has no impact factor for its
/// year, or when the sector mean is zero.
NormalizedImpact normalized_impact_factor(const Corpus& corpus, const std::string& sds);

/// One record per (university, sds) with at least one publication or one
/// roster entry inside the period, ordered by (university, sds).
/// Sums inside a cell run in publication-id order, so the result does not
/// depend on the order of the publication list.
std::vector<IndicatorRecord> compute_indicators(const Corpus& corpus);

/// Per publication (in corpus order): mean normalized impact factor over the
/// distinct sectors it is attributed to.
std::vector<double> publication_normalized_impact(const Corpus& corpus);

std::string indicators_to_csv(const std::vector<IndicatorRecord>& records);
std::vector<IndicatorRecord> read_indicators_csv(const std::filesystem::path& path);
std::vector<IndicatorRecord> parse_indicators_csv(std::string_view text, const std::string& source);

}  // namespace unicollab
