#include "unicollab/reports.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "unicollab/csv.hpp"

namespace unicollab {

namespace {

std::string percent(const std::optional<double>& share) {
    return share ? format_fixed(*share * 100.0, 1) : std::string();
}

std::string statistic(double v) { return format_fixed(v, 2); }

template <typename KeyOf>
std::vector<PooledProfile> pool(const Corpus& corpus, KeyOf key_of) {
    std::map<std::string, PooledProfile> by_key;
    for (const auto& pub : corpus.publications) {
        const CollabProfile profile = classify_collaboration(corpus, pub);
        // Attributed universities per key, for the other-university flag.
        std::map<std::string, std::vector<std::string_view>> universities;
        for (const auto& a : pub.attributions) {
            auto key = key_of(a.sds);
            if (key.empty()) continue;
            universities[key].push_back(a.university);
        }
        for (const auto& [key, unis] : universities) {
            PooledProfile& p = by_key[key];
            p.key = key;
            ++p.output;
            p.extramural += profile.is_extramural;
            p.other_university += std::any_of(unis.begin(), unis.end(), [&](std::string_view u) {
                return profile.has_other_domestic_university(u);
            });
            p.dpr += profile.has_dpr;
            p.foreign += profile.has_foreign;
            p.enterprise += profile.has_domestic_enterprise;
        }
    }
    std::vector<PooledProfile> out;
    out.reserve(by_key.size());
    for (auto& [key, p] : by_key) out.push_back(std::move(p));
    return out;
}

}  // namespace

CrossTab CrossTab::from_counts(const std::array<std::array<long long, kColumns>, kRows>& counts,
                               const std::array<long long, kRows>& row_totals) {
    CrossTab t;
    t.counts = counts;
    t.row_totals = row_totals;
    for (std::size_t r = 0; r < kRows; ++r) {
        t.grand_total += row_totals[r];
        for (std::size_t c = 0; c < kColumns; ++c) t.column_totals[c] += counts[r][c];
    }
    for (std::size_t r = 0; r < kRows; ++r) {
        for (std::size_t c = 0; c < kColumns; ++c) {
            t.concentration[r][c] = stats::concentration_index(
                static_cast<double>(counts[r][c]), static_cast<double>(row_totals[r]),
                static_cast<double>(t.column_totals[c]), static_cast<double>(t.grand_total));
        }
    }
    return t;
}

std::vector<std::string> CrossTab::check_marginals() const {
    std::vector<std::string> problems;
    long long rows_sum = 0;
    for (std::size_t r = 0; r < kRows; ++r) {
        const std::string label(kRowLabels[r]);
        rows_sum += row_totals[r];
        if (counts[r][Intramural] + counts[r][Extramural] != row_totals[r]) {
            problems.push_back("row " + label + ": intramural + extramural != row total");
        }
        if (counts[r][Foreign] > counts[r][Extramural]) {
            problems.push_back("row " + label + ": foreign exceeds extramural");
        }
        if (counts[r][Enterprise] > counts[r][Extramural]) {
            problems.push_back("row " + label + ": enterprise exceeds extramural");
        }
        for (std::size_t c = 0; c < kColumns; ++c) {
            if (counts[r][c] < 0) problems.push_back("row " + label + ": negative count");
        }
    }
    if (rows_sum != grand_total) problems.push_back("row totals do not sum to grand total");
    for (std::size_t c = 0; c < kColumns; ++c) {
        long long s = 0;
        for (std::size_t r = 0; r < kRows; ++r) s += counts[r][c];
        if (s != column_totals[c]) {
            problems.push_back("column " + std::string(kColumnLabels[c]) + ": total mismatch");
        }
    }
    if (column_totals[Intramural] + column_totals[Extramural] != grand_total) {
        problems.push_back("intramural + extramural totals != grand total");
    }
    return problems;
}

CrossTab build_crosstab(const Corpus& corpus, QuartileScope scope) {
    std::array<std::array<long long, CrossTab::kColumns>, CrossTab::kRows> counts{};
    std::array<long long, CrossTab::kRows> row_totals{};
    const std::size_t n = corpus.publications.size();
    if (n == 0) return CrossTab::from_counts(counts, row_totals);

    const std::vector<double> quality = publication_normalized_impact(corpus);
    std::vector<std::uint8_t> bins;
    if (n >= 4) {
        bins = stats::quartile_bins(quality);
    } else {
        bins.assign(n, 0);  // too few publications to cut; everything lands in the lowest bin
    }

    if (scope == QuartileScope::PerSector) {
        // Bin within each publication's first attributed sector; sectors with
        // fewer than 4 publications keep their global bins.
        std::map<std::string, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& attrs = corpus.publications[i].attributions;
            if (!attrs.empty()) groups[attrs.front().sds].push_back(i);
        }
        for (const auto& [sds, members] : groups) {
            if (members.size() < 4) continue;
            std::vector<double> values;
            values.reserve(members.size());
            for (std::size_t i : members) values.push_back(quality[i]);
            const auto local = stats::quartile_bins(values);
            for (std::size_t k = 0; k < members.size(); ++k) bins[members[k]] = local[k];
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const CollabProfile profile = classify_collaboration(corpus, corpus.publications[i]);
        auto& row = counts[bins[i]];
        ++row_totals[bins[i]];
        if (!profile.is_extramural) {
            ++row[CrossTab::Intramural];
            continue;
        }
        ++row[CrossTab::Extramural];
        if (profile.has_foreign) ++row[CrossTab::Foreign];
        if (profile.has_domestic_enterprise) ++row[CrossTab::Enterprise];
    }
    return CrossTab::from_counts(counts, row_totals);
}

std::optional<double> PooledProfile::share(Metric m) const {
    if (output == 0) return std::nullopt;
    std::size_t flagged = 0;
    switch (m) {
        case Metric::CI: flagged = extramural; break;
        case Metric::CI_UNI: flagged = other_university; break;
        case Metric::CI_DPR: flagged = dpr; break;
        case Metric::FCI: flagged = foreign; break;
        case Metric::DCI: flagged = enterprise; break;
        default:
            throw std::invalid_argument("no pooled share for metric " + std::string(to_string(m)));
    }
    return static_cast<double>(flagged) / static_cast<double>(output);
}

std::vector<PooledProfile> pool_by_sector(const Corpus& corpus) {
    auto profiles = pool(corpus, [&](const std::string& sds) {
        return corpus.sectors.area(sds) ? sds : std::string();
    });
    for (auto& p : profiles) p.area = *corpus.sectors.area(p.key);
    return profiles;
}

std::vector<PooledProfile> pool_by_area(const Corpus& corpus) {
    auto profiles = pool(corpus, [&](const std::string& sds) {
        const std::string* area = corpus.sectors.area(sds);
        return area ? *area : std::string();
    });
    for (auto& p : profiles) p.area = p.key;
    return profiles;
}

std::vector<AreaProfileRow> build_area_profile(const Corpus& corpus,
                                               const std::vector<IndicatorRecord>& records,
                                               AreaProfileMode mode) {
    std::vector<AreaProfileRow> rows;
    for (const auto& p : pool_by_area(corpus)) {
        AreaProfileRow row;
        row.area = p.area;
        row.output = p.output;
        if (mode == AreaProfileMode::Pooled) {
            row.ci = p.share(Metric::CI);
            row.ci_uni = p.share(Metric::CI_UNI);
            row.ci_dpr = p.share(Metric::CI_DPR);
            row.fci = p.share(Metric::FCI);
            row.dci = p.share(Metric::DCI);
        } else {
            auto weighted = [&](Metric m) -> std::optional<double> {
                double num = 0.0, den = 0.0;
                for (const auto& r : records) {
                    if (r.area != p.area) continue;
                    if (auto v = r.value(m)) {
                        num += *v * r.staff;
                        den += r.staff;
                    }
                }
                if (den <= 0.0) return std::nullopt;
                return num / den;
            };
            row.ci = weighted(Metric::CI);
            row.ci_uni = weighted(Metric::CI_UNI);
            row.ci_dpr = weighted(Metric::CI_DPR);
            row.fci = weighted(Metric::FCI);
            row.dci = weighted(Metric::DCI);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

DispersionTable build_dispersion_table(const std::vector<PooledProfile>& sector_profiles,
                                       const SectorMap& sectors, Metric metric) {
    DispersionTable table;
    table.metric = metric;
    for (const auto& area : sectors.areas()) {
        std::vector<double> values;
        for (const auto& p : sector_profiles) {
            if (p.area != area) continue;
            if (auto v = p.share(metric)) values.push_back(*v);
        }
        if (values.empty()) {
            table.warnings.push_back("area " + area + " has no sector with a defined " +
                                     std::string(to_string(metric)) + "; omitted");
            continue;
        }
        table.rows.push_back(DispersionRow{area, stats::descriptive(values)});
    }
    return table;
}

TopSectorTable build_top_sector_table(const std::vector<PooledProfile>& sector_profiles,
                                      const std::vector<PooledProfile>& area_profiles,
                                      Metric metric, std::size_t top_n) {
    TopSectorTable table;
    table.metric = metric;
    std::map<std::string, std::size_t> area_output;
    for (const auto& a : area_profiles) area_output[a.key] = a.output;

    std::map<std::string, std::vector<const PooledProfile*>> by_area;
    for (const auto& p : sector_profiles) {
        if (p.share(metric)) by_area[p.area].push_back(&p);
    }
    for (auto& [area, candidates] : by_area) {
        std::sort(candidates.begin(), candidates.end(),
                  [&](const PooledProfile* a, const PooledProfile* b) {
                      const double va = *a->share(metric), vb = *b->share(metric);
                      if (va != vb) return va > vb;
                      if (a->output != b->output) return a->output > b->output;
                      return a->key < b->key;
                  });
        const std::size_t total = area_output.count(area) ? area_output[area] : 0;
        for (std::size_t i = 0; i < std::min(top_n, candidates.size()); ++i) {
            const PooledProfile& p = *candidates[i];
            TopSectorRow row{area, i + 1, p.key, *p.share(metric), p.output, std::nullopt};
            if (total > 0) row.area_share = static_cast<double>(p.output) / static_cast<double>(total);
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

const CorrelationCell* CorrelationTable::find(std::string_view area, Metric indicator) const {
    for (const auto& c : cells) {
        if (c.area == area && c.indicator == indicator) return &c;
    }
    return nullptr;
}

CorrelationTable build_correlation_table(const std::vector<AreaAggregate>& aggregates,
                                         Metric collaboration) {
    CorrelationTable table;
    table.collaboration = collaboration;
    std::map<std::string, std::vector<const AreaAggregate*>> by_area;
    for (const auto& a : aggregates) {
        by_area[a.area];
        if (!a.excluded) by_area[a.area].push_back(&a);
    }
    for (const auto& [area, rows] : by_area) {
        std::vector<std::optional<double>> x;
        x.reserve(rows.size());
        for (const auto* a : rows) x.push_back(a->value(collaboration));
        for (Metric indicator : kPerformanceMetrics) {
            std::vector<std::optional<double>> y;
            y.reserve(rows.size());
            for (const auto* a : rows) y.push_back(a->value(indicator));
            table.cells.push_back(CorrelationCell{area, indicator, stats::associate(x, y)});
        }
    }
    return table;
}

std::string crosstab_to_csv(const CrossTab& t) {
    std::ostringstream out;
    CsvWriter writer(out);
    std::vector<std::string> header = {"quartile"};
    for (auto label : CrossTab::kColumnLabels) {
        header.emplace_back(label);
        header.push_back(std::string(label) + "_concentration");
    }
    header.emplace_back("total");
    writer.write_row(header);
    for (std::size_t r = 0; r < CrossTab::kRows; ++r) {
        std::vector<std::string> row = {std::string(CrossTab::kRowLabels[r])};
        for (std::size_t c = 0; c < CrossTab::kColumns; ++c) {
            row.push_back(std::to_string(t.counts[r][c]));
            row.push_back(t.concentration[r][c] ? format_fixed(*t.concentration[r][c], 2) : "");
        }
        row.push_back(std::to_string(t.row_totals[r]));
        writer.write_row(row);
    }
    std::vector<std::string> total = {"Total"};
    for (std::size_t c = 0; c < CrossTab::kColumns; ++c) {
        total.push_back(std::to_string(t.column_totals[c]));
        total.emplace_back();
    }
    total.push_back(std::to_string(t.grand_total));
    writer.write_row(total);
    return out.str();
}

std::string area_profile_to_csv(const std::vector<AreaProfileRow>& rows) {
    std::ostringstream out;
    CsvWriter writer(out);
    writer.write_row({"area", "output", "CI", "CI_UNI", "CI_DPR", "FCI", "DCI"});
    for (const auto& r : rows) {
        writer.write_row({r.area, std::to_string(r.output), percent(r.ci), percent(r.ci_uni),
                          percent(r.ci_dpr), percent(r.fci), percent(r.dci)});
    }
    return out.str();
}

std::string dispersion_to_csv(const DispersionTable& table) {
    std::ostringstream out;
    CsvWriter writer(out);
    writer.write_row({"area", "n_sds", "mean", "median", "min", "max", "std", "cv"});
    for (const auto& r : table.rows) {
        const auto& d = r.stats;
        writer.write_row({r.area, std::to_string(d.n), percent(d.mean), percent(d.median),
                          percent(d.min), percent(d.max), percent(d.std),
                          d.cv ? format_fixed(*d.cv, 3) : std::string()});
    }
    return out.str();
}

std::string top_sectors_to_csv(const TopSectorTable& table) {
    std::ostringstream out;
    CsvWriter writer(out);
    writer.write_row({"area", "rank", "sds", std::string(to_string(table.metric)), "output",
                      "area_share"});
    for (const auto& r : table.rows) {
        writer.write_row({r.area, std::to_string(r.rank), r.sds, percent(r.value),
                          std::to_string(r.output), percent(r.area_share)});
    }
    return out.str();
}

std::string correlation_to_csv(const CorrelationTable& table) {
    std::ostringstream out;
    CsvWriter writer(out);
    writer.write_row({"area", "indicator", "collaboration", "n", "r", "beta", "r_squared", "status"});
    for (const auto& c : table.cells) {
        std::vector<std::string> row = {c.area, std::string(to_string(c.indicator)),
                                        std::string(to_string(table.collaboration)),
                                        std::to_string(c.result.n)};
        if (const auto& s = c.result.stats) {
            row.insert(row.end(), {statistic(s->r), statistic(s->beta), statistic(s->r_squared), "ok"});
        } else {
            row.insert(row.end(), {"", "", "", c.result.reason});
        }
        writer.write_row(row);
    }
    return out.str();
}

void emit_csv(std::string_view content, const std::filesystem::path& path) {
    write_file(path, content);
}

}  // namespace unicollab
