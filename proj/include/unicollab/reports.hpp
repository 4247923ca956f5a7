#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unicollab/aggregate.hpp"
#include "unicollab/corpus.hpp"
#include "unicollab/indicators.hpp"
#include "unicollab/stats.hpp"

namespace unicollab {

enum class QuartileScope { Global, PerSector };
enum class AreaProfileMode { Pooled, Weighted };

/// Publications by quartile of normalized impact factor (rows, worst first)
/// and type of collaboration (columns).
struct CrossTab {
    static constexpr std::size_t kRows = 4;
    static constexpr std::size_t kColumns = 4;
    static constexpr std::array<std::string_view, kRows> kRowLabels = {"0-25", "26-50", "51-75",
                                                                       "76-100"};
    enum Column : std::size_t { Intramural = 0, Extramural = 1, Foreign = 2, Enterprise = 3 };
    static constexpr std::array<std::string_view, kColumns> kColumnLabels = {
        "intramural", "extramural", "foreign", "enterprise"};

    std::array<std::array<long long, kColumns>, kRows> counts{};
    std::array<long long, kRows> row_totals{};
    std::array<long long, kColumns> column_totals{};
    long long grand_total = 0;
    std::array<std::array<std::optional<double>, kColumns>, kRows> concentration{};

    /// Column totals, grand total and concentration indices from cell counts
    /// and row totals.
    static CrossTab from_counts(const std::array<std::array<long long, kColumns>, kRows>& counts,
                                const std::array<long long, kRows>& row_totals);

    /// Violated marginal identities; empty when consistent.
    std::vector<std::string> check_marginals() const;
};

CrossTab build_crosstab(const Corpus& corpus, QuartileScope scope = QuartileScope::Global);

/// Publication counts pooled over distinct publications of a sector or
/// area (a publication attributed to two universities counts once).
struct PooledProfile {
    std::string key;  // sds code or area code
    std::string area;
    std::size_t output = 0;
    std::size_t extramural = 0;
    std::size_t other_university = 0;
    std::size_t dpr = 0;
    std::size_t foreign = 0;
    std::size_t enterprise = 0;

    /// Fraction of output carrying the metric's flag. Supports CI, CI_UNI,
    /// CI_DPR, FCI and DCI; undefined when output is 0.
    std::optional<double> share(Metric m) const;
};

std::vector<PooledProfile> pool_by_sector(const Corpus& corpus);
std::vector<PooledProfile> pool_by_area(const Corpus& corpus);

struct AreaProfileRow {
    std::string area;
    std::size_t output = 0;
    std::optional<double> ci;
    std::optional<double> ci_uni;
    std::optional<double> ci_dpr;
    std::optional<double> fci;
    std::optional<double> dci;
};

/// Pooled mode uses publication shares over the area; weighted mode takes
/// the staff-weighted mean of the cells' shares instead (output stays pooled).
std::vector<AreaProfileRow> build_area_profile(const Corpus& corpus,
                                               const std::vector<IndicatorRecord>& records,
                                               AreaProfileMode mode = AreaProfileMode::Pooled);

struct DispersionRow {
    std::string area;
    stats::Descriptives stats;
};

struct DispersionTable {
    Metric metric = Metric::CI;
    std::vector<DispersionRow> rows;
    std::vector<std::string> warnings;
};

/// Per area, descriptive statistics of the sector-level pooled metric.
DispersionTable build_dispersion_table(const std::vector<PooledProfile>& sector_profiles,
                                       const SectorMap& sectors, Metric metric = Metric::CI);

struct TopSectorRow {
    std::string area;
    std::size_t rank = 1;
    std::string sds;
    double value = 0.0;
    std::size_t output = 0;
    std::optional<double> area_share;  // sector output / area output
};

struct TopSectorTable {
    Metric metric = Metric::FCI;
    std::vector<TopSectorRow> rows;
};

/// The `top_n` sectors of each area by metric; ties go to the larger output,
/// then the smaller sds code.
TopSectorTable build_top_sector_table(const std::vector<PooledProfile>& sector_profiles,
                                      const std::vector<PooledProfile>& area_profiles,
                                      Metric metric, std::size_t top_n = 1);

struct CorrelationCell {
    std::string area;
    Metric indicator = Metric::P;
    stats::AssociationResult result;
};

struct CorrelationTable {
    Metric collaboration = Metric::CI;
    std::vector<CorrelationCell> cells;  // area-major, indicators in kPerformanceMetrics order

    const CorrelationCell* find(std::string_view area, Metric indicator) const;
};

/// Performance indicators (Y) regressed on a collaboration metric (X) across
/// the non-excluded universities of each area.
CorrelationTable build_correlation_table(const std::vector<AreaAggregate>& aggregates,
                                         Metric collaboration);

std::string crosstab_to_csv(const CrossTab& table);
std::string area_profile_to_csv(const std::vector<AreaProfileRow>& rows);
std::string dispersion_to_csv(const DispersionTable& table);
std::string top_sectors_to_csv(const TopSectorTable& table);
std::string correlation_to_csv(const CorrelationTable& table);

/// Writes an emitted table. Throws std::runtime_error on an unwritable path.
void emit_csv(std::string_view content, const std::filesystem::path& path);

}  // namespace unicollab
