#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unicollab/corpus.hpp"
#include "unicollab/indicators.hpp"

namespace unicollab {

using MetricValues = std::array<std::optional<double>, kMetricCount>;

/// A cell's indicators divided by the unweighted mean of all universities
/// with a defined value in the same sector.
struct NormalizedCell {
    std::string university;
    std::string sds;
    std::string area;
    std::size_t output = 0;
    double staff = 0.0;  // aggregation weight
    MetricValues values;

    std::optional<double> value(Metric m) const { return values[static_cast<std::size_t>(m)]; }
};

/// Sector whose mean is zero for some metrics; those values become undefined.
struct ZeroMeanSector {
    std::string sds;
    std::vector<Metric> metrics;
};

struct NormalizationResult {
    std::vector<NormalizedCell> cells;  // same order as the input records
    std::vector<ZeroMeanSector> zero_mean;
};

NormalizationResult normalize_to_sds_mean(const std::vector<IndicatorRecord>& records,
                                          CiMode ci_mode = CiMode::Share);

/// Staff-weighted mean of a university's normalized cell values over the
/// sectors of one area. Cells with an undefined value are skipped and the
/// weights renormalized over the rest.
struct AreaAggregate {
    std::string university;
    std::string area;
    MetricValues values;
    double total_staff = 0.0;  // period-average staff summed over the area's sectors
    std::size_t n_sectors = 0;  // sectors with at least one publication
    bool excluded = false;

    std::optional<double> value(Metric m) const { return values[static_cast<std::size_t>(m)]; }
};

/// Ordered by (university, area). Throws std::invalid_argument if a cell's
/// sector has no area in `sectors`.
std::vector<AreaAggregate> aggregate_area(const std::vector<NormalizedCell>& cells,
                                          const SectorMap& sectors);

struct Exclusion {
    std::string university;
    std::string area;
    double average_staff = 0.0;
};

/// Marks rows whose area staff average is strictly below `threshold` as
/// excluded and returns the exclusion log.
std::vector<Exclusion> apply_exclusion(std::vector<AreaAggregate>& aggregates,
                                       double threshold = 5.0);

/// Rows retained by the rule; the dropped rows are appended to `log` if given.
std::vector<AreaAggregate> filter_small_universities(const std::vector<AreaAggregate>& aggregates,
                                                     double threshold = 5.0,
                                                     std::vector<Exclusion>* log = nullptr);

std::string aggregates_to_csv(const std::vector<AreaAggregate>& aggregates);
std::vector<AreaAggregate> parse_aggregates_csv(std::string_view text, const std::string& source);
std::vector<AreaAggregate> read_aggregates_csv(const std::filesystem::path& path);
std::string exclusions_to_csv(const std::vector<Exclusion>& log);

}  // namespace unicollab
