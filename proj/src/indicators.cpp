#include "unicollab/indicators.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "unicollab/csv.hpp"

namespace unicollab {

namespace {

constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "P", "FP", "QP", "FQP", "QI", "CI", "FCI", "DCI", "CI_UNI", "CI_DPR"};

const std::vector<std::string> kIndicatorHeader = {
    "university", "sds", "area",   "O",      "FO",       "SS",       "FSS",
    "QI",         "staff", "P",    "FP",     "QP",       "FQP",      "CI_ratio",
    "CI_share",   "CI_UNI", "CI_DPR", "FCI", "DCI"};

std::optional<double> ratio(double num, double den) {
    if (den <= 0.0) return std::nullopt;
    return num / den;
}

// Distinct publication indices per sector, with each sector's
// publication-id ordering fixed for reproducible summation.
std::map<std::string, std::vector<std::size_t>> publications_by_sector(const Corpus& corpus) {
    std::map<std::string, std::vector<std::size_t>> by_sds;
    for (std::size_t i = 0; i < corpus.publications.size(); ++i) {
        std::set<std::string_view> seen;
        for (const auto& a : corpus.publications[i].attributions) {
            if (seen.insert(a.sds).second) by_sds[a.sds].push_back(i);
        }
    }
    for (auto& [sds, idx] : by_sds) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return corpus.publications[a].id < corpus.publications[b].id;
        });
    }
    return by_sds;
}

double impact_of(const Corpus& corpus, const Publication& pub) {
    const Journal* j = corpus.journal(pub.journal);
    auto impact = j ? j->impact_factor(pub.year) : std::nullopt;
    if (!impact) {
        throw std::invalid_argument("missing impact factor for (" + pub.journal + ", " +
                                    std::to_string(pub.year) + ")");
    }
    return *impact;
}

// Normalized impact per publication index for one sector's publications.
std::unordered_map<std::size_t, double> normalize_sector(const Corpus& corpus,
                                                         const std::string& sds,
                                                         const std::vector<std::size_t>& pubs) {
    std::unordered_map<std::size_t, double> out;
    if (pubs.empty()) return out;
    double total = 0.0;
    for (std::size_t i : pubs) total += impact_of(corpus, corpus.publications[i]);
    const double mean = total / static_cast<double>(pubs.size());
    if (mean <= 0.0) {
        throw std::invalid_argument("sector '" + sds + "' has zero mean impact factor");
    }
    for (std::size_t i : pubs) out[i] = impact_of(corpus, corpus.publications[i]) / mean;
    return out;
}

}  // namespace

std::string_view to_string(Metric m) { return kMetricNames[static_cast<std::size_t>(m)]; }

std::optional<Metric> parse_metric(std::string_view name) {
    if (name == "CI_IPR") return Metric::CI_DPR;
    for (std::size_t i = 0; i < kMetricCount; ++i) {
        if (kMetricNames[i] == name) return static_cast<Metric>(i);
    }
    return std::nullopt;
}

std::optional<double> IndicatorRecord::value(Metric m, CiMode ci_mode) const {
    switch (m) {
        case Metric::P: return productivity;
        case Metric::FP: return fractional_productivity;
        case Metric::QP: return quality_productivity;
        case Metric::FQP: return fractional_quality_productivity;
        case Metric::QI: return quality_index;
        case Metric::CI: return ci_mode == CiMode::Share ? ci_share : ci_ratio;
        case Metric::FCI: return fci;
        case Metric::DCI: return dci;
        case Metric::CI_UNI: return ci_uni;
        case Metric::CI_DPR: return ci_dpr;
    }
    return std::nullopt;
}

double fractional_contribution(const Publication& pub) {
    const std::set<std::string_view> distinct(pub.orgs.begin(), pub.orgs.end());
    if (distinct.empty()) throw std::invalid_argument("publication " + pub.id + " has no organizations");
    return 1.0 / static_cast<double>(distinct.size());
}

NormalizedImpact normalized_impact_factor(const Corpus& corpus, const std::string& sds) {
    const auto by_sds = publications_by_sector(corpus);
    NormalizedImpact out;
    auto it = by_sds.find(sds);
    if (it == by_sds.end()) return out;
    for (const auto& [idx, value] : normalize_sector(corpus, sds, it->second)) {
        const Publication& p = corpus.publications[idx];
        out[{p.journal, p.year}] = value;
    }
    return out;
}

std::vector<IndicatorRecord> compute_indicators(const Corpus& corpus) {
    const auto by_sds = publications_by_sector(corpus);

    struct CellPubs {
        std::vector<std::size_t> pubs;
    };
    std::map<std::pair<std::string, std::string>, CellPubs> cells;
    std::map<std::string, std::unordered_map<std::size_t, double>> nif;
    for (const auto& [sds, pubs] : by_sds) nif.emplace(sds, normalize_sector(corpus, sds, pubs));

    for (const auto& [sds, pubs] : by_sds) {
        for (std::size_t i : pubs) {
            for (const auto& a : corpus.publications[i].attributions) {
                if (a.sds == sds) cells[{a.university, sds}].pubs.push_back(i);
            }
        }
    }
    for (const auto& [key, headcount] : corpus.staff.entries()) {
        if (corpus.period.contains(key.year)) cells[{key.university, key.sds}];
    }

    std::vector<IndicatorRecord> records;
    records.reserve(cells.size());
    for (auto& [key, cell] : cells) {
        const auto& [university, sds] = key;
        // by_sds order is already publication-id order; duplicates are impossible
        // in a valid corpus but collapse them anyway.
        cell.pubs.erase(std::unique(cell.pubs.begin(), cell.pubs.end()), cell.pubs.end());

        IndicatorRecord r;
        r.university = university;
        r.sds = sds;
        if (const std::string* area = corpus.sectors.area(sds)) r.area = *area;
        r.output = cell.pubs.size();
        std::size_t extramural = 0, other_uni = 0, dpr = 0, foreign = 0, enterprise = 0;
        const auto nif_it = nif.find(sds);
        for (std::size_t i : cell.pubs) {
            const Publication& pub = corpus.publications[i];
            const double frac = fractional_contribution(pub);
            const double quality = nif_it->second.at(i);
            r.fractional_output += frac;
            r.strength += quality;
            r.fractional_strength += quality * frac;
            const CollabProfile profile = classify_collaboration(corpus, pub);
            extramural += profile.is_extramural;
            other_uni += profile.has_other_domestic_university(university);
            dpr += profile.has_dpr;
            foreign += profile.has_foreign;
            enterprise += profile.has_domestic_enterprise;
        }
        r.staff = corpus.staff.period_average(university, sds, corpus.period);

        const double o = static_cast<double>(r.output);
        r.quality_index = ratio(r.strength, o);
        r.productivity = ratio(o, r.staff);
        r.fractional_productivity = ratio(r.fractional_output, r.staff);
        r.quality_productivity = ratio(r.strength, r.staff);
        r.fractional_quality_productivity = ratio(r.fractional_strength, r.staff);
        r.ci_ratio = ratio(o, r.fractional_output);
        r.ci_share = ratio(static_cast<double>(extramural), o);
        r.ci_uni = ratio(static_cast<double>(other_uni), o);
        r.ci_dpr = ratio(static_cast<double>(dpr), o);
        r.fci = ratio(static_cast<double>(foreign), o);
        r.dci = ratio(static_cast<double>(enterprise), o);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<double> publication_normalized_impact(const Corpus& corpus) {
    const auto by_sds = publications_by_sector(corpus);
    std::vector<double> sum(corpus.publications.size(), 0.0);
    std::vector<std::size_t> count(corpus.publications.size(), 0);
    for (const auto& [sds, pubs] : by_sds) {
        for (const auto& [idx, value] : normalize_sector(corpus, sds, pubs)) {
            sum[idx] += value;
            ++count[idx];
        }
    }
    // Sector order inside `sum` follows the map (sds code order), fixed.
    std::vector<double> out(corpus.publications.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (count[i] > 0) out[i] = sum[i] / static_cast<double>(count[i]);
    }
    return out;
}

std::string indicators_to_csv(const std::vector<IndicatorRecord>& records) {
    std::ostringstream out;
    CsvWriter writer(out);
    writer.write_row(kIndicatorHeader);
    for (const auto& r : records) {
        writer.write_row({r.university,
                          r.sds,
                          r.area,
                          std::to_string(r.output),
                          format_shortest(r.fractional_output),
                          format_shortest(r.strength),
                          format_shortest(r.fractional_strength),
                          format_optional_shortest(r.quality_index),
                          format_shortest(r.staff),
                          format_optional_shortest(r.productivity),
                          format_optional_shortest(r.fractional_productivity),
                          format_optional_shortest(r.quality_productivity),
                          format_optional_shortest(r.fractional_quality_productivity),
                          format_optional_shortest(r.ci_ratio),
                          format_optional_shortest(r.ci_share),
                          format_optional_shortest(r.ci_uni),
                          format_optional_shortest(r.ci_dpr),
                          format_optional_shortest(r.fci),
                          format_optional_shortest(r.dci)});
    }
    return out.str();
}

std::vector<IndicatorRecord> parse_indicators_csv(std::string_view text, const std::string& source) {
    CsvTable table = parse_csv(text, source);
    // CI_IPR is accepted in place of CI_DPR.
    std::vector<std::string> header = table.header();
    for (auto& h : header) {
        if (h == "CI_IPR") h = "CI_DPR";
    }
    if (header != kIndicatorHeader) require_header(table, kIndicatorHeader);

    std::vector<IndicatorRecord> records;
    for (const auto& row : table.rows()) {
        const auto& f = row.fields;
        const std::size_t line = row.line;
        auto num = [&](std::size_t i) { return parse_double(f[i], source, line, kIndicatorHeader[i]); };
        auto opt = [&](std::size_t i) {
            return parse_optional_double(f[i], source, line, kIndicatorHeader[i]);
        };
        IndicatorRecord r;
        r.university = f[0];
        r.sds = f[1];
        r.area = f[2];
        const long long o = parse_integer(f[3], source, line, "O");
        if (o < 0) throw InputError(source, line, "O", "must be >= 0");
        r.output = static_cast<std::size_t>(o);
        r.fractional_output = num(4);
        r.strength = num(5);
        r.fractional_strength = num(6);
        r.quality_index = opt(7);
        r.staff = num(8);
        r.productivity = opt(9);
        r.fractional_productivity = opt(10);
        r.quality_productivity = opt(11);
        r.fractional_quality_productivity = opt(12);
        r.ci_ratio = opt(13);
        r.ci_share = opt(14);
        r.ci_uni = opt(15);
        r.ci_dpr = opt(16);
        r.fci = opt(17);
        r.dci = opt(18);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<IndicatorRecord> read_indicators_csv(const std::filesystem::path& path) {
    return parse_indicators_csv(read_file(path), path.filename().string());
}

}  // namespace unicollab
