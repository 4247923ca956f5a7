#include "unicollab/aggregate.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include "unicollab/csv.hpp"

namespace unicollab {

namespace {

// Metrics persisted in aggregates.csv, in column order.
constexpr std::array<Metric, 8> kAggregateColumns = {Metric::P,  Metric::FP,  Metric::QP,
                                                     Metric::FQP, Metric::QI, Metric::CI,
                                                     Metric::FCI, Metric::DCI};

std::vector<std::string> aggregate_header() {
    std::vector<std::string> h = {"university", "area"};
    for (Metric m : kAggregateColumns) h.emplace_back(to_string(m));
    h.insert(h.end(), {"staff", "n_sectors", "excluded"});
    return h;
}

void check_threshold(double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("exclusion threshold must be > 0");
}

}  // namespace

NormalizationResult normalize_to_sds_mean(const std::vector<IndicatorRecord>& records,
                                          CiMode ci_mode) {
    struct Sum {
        double total = 0.0;
        std::size_t n = 0;
    };
    // Per sector and metric; records are visited in input order, so the sum
    // order is fixed by the caller (compute_indicators sorts by university).
    std::map<std::string, std::array<Sum, kMetricCount>> sums;
    for (const auto& r : records) {
        auto& s = sums[r.sds];
        for (Metric m : kAllMetrics) {
            if (auto v = r.value(m, ci_mode)) {
                s[static_cast<std::size_t>(m)].total += *v;
                ++s[static_cast<std::size_t>(m)].n;
            }
        }
    }

    NormalizationResult result;
    for (const auto& [sds, s] : sums) {
        ZeroMeanSector zero{sds, {}};
        for (Metric m : kAllMetrics) {
            const Sum& sum = s[static_cast<std::size_t>(m)];
            if (sum.n > 0 && sum.total == 0.0) zero.metrics.push_back(m);
        }
        if (!zero.metrics.empty()) result.zero_mean.push_back(std::move(zero));
    }

    result.cells.reserve(records.size());
    for (const auto& r : records) {
        NormalizedCell cell;
        cell.university = r.university;
        cell.sds = r.sds;
        cell.area = r.area;
        cell.output = r.output;
        cell.staff = r.staff;
        const auto& s = sums.at(r.sds);
        for (Metric m : kAllMetrics) {
            const auto idx = static_cast<std::size_t>(m);
            const auto v = r.value(m, ci_mode);
            if (!v || s[idx].total == 0.0) continue;
            const double mean = s[idx].total / static_cast<double>(s[idx].n);
            cell.values[idx] = *v / mean;
        }
        result.cells.push_back(std::move(cell));
    }
    return result;
}

std::vector<AreaAggregate> aggregate_area(const std::vector<NormalizedCell>& cells,
                                          const SectorMap& sectors) {
    struct Acc {
        std::array<double, kMetricCount> weighted{};
        std::array<double, kMetricCount> weight{};
        std::array<bool, kMetricCount> seen{};
        double staff = 0.0;
        std::size_t n_sectors = 0;
    };
    std::map<std::pair<std::string, std::string>, Acc> acc;
    for (const auto& c : cells) {
        const std::string* area = sectors.area(c.sds);
        if (!area) throw std::invalid_argument("sector '" + c.sds + "' has no area");
        if (c.staff < 0.0) throw std::invalid_argument("negative staff weight for " + c.university);
        Acc& a = acc[{c.university, *area}];
        a.staff += c.staff;
        if (c.output > 0) ++a.n_sectors;
        for (Metric m : kAllMetrics) {
            const auto idx = static_cast<std::size_t>(m);
            if (auto v = c.values[idx]) {
                a.weighted[idx] += *v * c.staff;
                a.weight[idx] += c.staff;
                a.seen[idx] = true;
            }
        }
    }

    std::vector<AreaAggregate> out;
    out.reserve(acc.size());
    for (const auto& [key, a] : acc) {
        AreaAggregate agg;
        agg.university = key.first;
        agg.area = key.second;
        agg.total_staff = a.staff;
        agg.n_sectors = a.n_sectors;
        for (std::size_t idx = 0; idx < kMetricCount; ++idx) {
            if (a.seen[idx] && a.weight[idx] > 0.0) agg.values[idx] = a.weighted[idx] / a.weight[idx];
        }
        out.push_back(std::move(agg));
    }
    return out;
}

std::vector<Exclusion> apply_exclusion(std::vector<AreaAggregate>& aggregates, double threshold) {
    check_threshold(threshold);
    std::vector<Exclusion> log;
    for (auto& a : aggregates) {
        a.excluded = a.total_staff < threshold;
        if (a.excluded) log.push_back(Exclusion{a.university, a.area, a.total_staff});
    }
    return log;
}

std::vector<AreaAggregate> filter_small_universities(const std::vector<AreaAggregate>& aggregates,
                                                     double threshold,
                                                     std::vector<Exclusion>* log) {
    check_threshold(threshold);
    std::vector<AreaAggregate> kept;
    for (const auto& a : aggregates) {
        if (a.total_staff < threshold) {
            if (log) log->push_back(Exclusion{a.university, a.area, a.total_staff});
        } else {
            kept.push_back(a);
        }
    }
    return kept;
}

std::string aggregates_to_csv(const std::vector<AreaAggregate>& aggregates) {
    std::ostringstream out;
    CsvWriter writer(out);
    writer.write_row(aggregate_header());
    for (const auto& a : aggregates) {
        std::vector<std::string> row = {a.university, a.area};
        for (Metric m : kAggregateColumns) row.push_back(format_optional_shortest(a.value(m)));
        row.push_back(format_shortest(a.total_staff));
        row.push_back(std::to_string(a.n_sectors));
        row.emplace_back(a.excluded ? "true" : "false");
        writer.write_row(row);
    }
    return out.str();
}

std::vector<AreaAggregate> parse_aggregates_csv(std::string_view text, const std::string& source) {
    const CsvTable table = parse_csv(text, source);
    const auto header = aggregate_header();
    require_header(table, header);
    std::vector<AreaAggregate> out;
    for (const auto& row : table.rows()) {
        const auto& f = row.fields;
        AreaAggregate a;
        a.university = f[0];
        a.area = f[1];
        for (std::size_t i = 0; i < kAggregateColumns.size(); ++i) {
            a.values[static_cast<std::size_t>(kAggregateColumns[i])] =
                parse_optional_double(f[2 + i], source, row.line, header[2 + i]);
        }
        a.total_staff = parse_double(f[10], source, row.line, "staff");
        const long long n = parse_integer(f[11], source, row.line, "n_sectors");
        if (n < 0) throw InputError(source, row.line, "n_sectors", "must be >= 0");
        a.n_sectors = static_cast<std::size_t>(n);
        if (f[12] == "true") a.excluded = true;
        else if (f[12] != "false") throw InputError(source, row.line, "excluded", "expected true/false");
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<AreaAggregate> read_aggregates_csv(const std::filesystem::path& path) {
    return parse_aggregates_csv(read_file(path), path.filename().string());
}

std::string exclusions_to_csv(const std::vector<Exclusion>& log) {
    std::ostringstream out;
    CsvWriter writer(out);
    writer.write_row({"university", "area", "average_staff"});
    for (const auto& e : log) writer.write_row({e.university, e.area, format_shortest(e.average_staff)});
    return out.str();
}

}  // namespace unicollab
