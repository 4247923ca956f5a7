// Acceptance checks; one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "indicator_oracle.hpp"
#include "test_support.hpp"
#include "unicollab/aggregate.hpp"
#include "unicollab/pipeline.hpp"
#include "unicollab/reports.hpp"
#include "unicollab/stats.hpp"
#include "unicollab/synth.hpp"

using namespace unicollab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = Outcome{false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << o.detail << " ["
         << std::fixed;
    line.precision(3);
    line << secs << " s]";
    std::cout << line.str() << std::endl;
}

template <class T>
std::string str(T v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double close_rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

using Counts = std::array<std::array<long long, 4>, 4>;
const Counts kCounts = {{{2974, 4507, 1697, 221},
                         {3830, 6443, 2612, 313},
                         {4453, 10369, 4506, 419},
                         {4754, 16090, 8413, 607}}};
const std::array<long long, 4> kRowTotals = {7481, 10273, 14822, 20844};
const double kIndices[4][4] = {{1.33, 0.86, 0.70, 1.01},
                               {1.24, 0.90, 0.79, 1.04},
                               {1.00, 1.00, 0.94, 0.97},
                               {0.76, 1.10, 1.25, 1.00}};

Outcome concentration_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const CrossTab t = CrossTab::from_counts(kCounts, kRowTotals);
    double worst = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) worst = std::max(worst, std::abs(*t.concentration[r][c] - kIndices[r][c]));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double first = *t.concentration[0][0], last = *t.concentration[3][0];
    const bool ok = worst <= 0.01 && std::abs(first - 1.33) <= 0.01 && std::abs(last - 0.76) <= 0.01 && secs < 1.0;
    return {ok, "max |index - expected| = " + str(worst) + ", (0-25, intramural) = " + str(first) +
                    ", (76-100, intramural) = " + str(last)};
}

Outcome marginal_identity() {
    long long sum = 0;
    for (auto r : kRowTotals) sum += r;
    const CrossTab t = CrossTab::from_counts(kCounts, kRowTotals);
    const auto problems = t.check_marginals();
    const bool ok = sum == 53420 && t.grand_total == 53420 && problems.empty();
    return {ok, "row totals sum to " + str(sum) + ", grand total " + str(t.grand_total) + ", " +
                    str(problems.size()) + " marginal problem(s)"};
}

Outcome cv_consistency() {
    struct Row { const char* area; double mean, sd, cv; };
    const Row rows[] = {{"Mathematics", 68.2, 6.2, 0.09},  {"Physics", 92.7, 5.1, 0.056},
                        {"Chemistry", 66.9, 13.0, 0.195},  {"Earth sciences", 77.3, 8.4, 0.109},
                        {"Biology", 71.5, 6.2, 0.087},     {"Medicine", 65.0, 13.2, 0.203},
                        {"Agriculture", 63.9, 10.6, 0.166}, {"Engineering", 57.5, 10.9, 0.190}};
    double worst = 0.0;
    std::string worst_area;
    for (const auto& r : rows) {
        const double d = std::abs(r.sd / r.mean - r.cv);
        if (d > worst) {
            worst = d;
            worst_area = r.area;
        }
    }
    return {worst <= 0.002, "max |std/mean - cv| = " + str(worst) + " (" + worst_area + ")"};
}

Outcome statistics_identities() {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal;
    double worst_r2 = 0.0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> x(30), y(30);
        const double slope = normal(rng);
        for (int k = 0; k < 30; ++k) {
            x[k] = normal(rng);
            y[k] = slope * x[k] + normal(rng);
        }
        const auto r = stats::pearson(x, y);
        const auto fit = stats::ols_simple(x, y);
        if (!r || !fit) return {false, "undefined statistic on series " + str(i)};
        worst_r2 = std::max(worst_r2, std::abs(fit->r_squared - *r * *r));
    }
    std::uniform_int_distribution<long long> count(0, 20000);
    double worst_ci = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Counts c{};
        std::array<long long, 4> rows{};
        for (std::size_t r = 0; r < 4; ++r) {
            c[r][0] = count(rng) + 1;
            c[r][1] = count(rng) + 1;
            c[r][2] = count(rng) % (c[r][1] + 1);
            c[r][3] = count(rng) % (c[r][1] + 1);
            rows[r] = c[r][0] + c[r][1];
        }
        const CrossTab t = CrossTab::from_counts(c, rows);
        for (std::size_t col = 0; col < 4; ++col) {
            if (t.column_totals[col] == 0) continue;
            double mean = 0.0;
            for (std::size_t r = 0; r < 4; ++r)
                mean += *t.concentration[r][col] * static_cast<double>(rows[r]) / static_cast<double>(t.grand_total);
            worst_ci = std::max(worst_ci, std::abs(mean - 1.0));
        }
    }
    return {worst_r2 <= 1e-10 && worst_ci <= 1e-9,
            "max |R^2 - r^2| = " + str(worst_r2) + ", max |weighted concentration mean - 1| = " + str(worst_ci)};
}

Outcome normalization_properties() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> value(0.05, 5.0);
    std::uniform_real_distribution<double> staff(0.0, 40.0);
    SectorMap sectors;
    std::vector<IndicatorRecord> records;
    for (int s = 0; s < 12; ++s) {
        const std::string sds = "S" + std::to_string(10 + s);
        sectors.area_of[sds] = "A" + std::to_string(s / 4);
        for (int u = 0; u < 30; ++u) {
            IndicatorRecord r;
            r.university = "U" + std::to_string(100 + u);
            r.sds = sds;
            r.area = sectors.area_of[sds];
            r.output = 1;
            r.staff = staff(rng);
            r.productivity = value(rng);
            r.fractional_productivity = value(rng);
            r.quality_productivity = value(rng);
            r.fractional_quality_productivity = value(rng);
            r.quality_index = value(rng);
            r.ci_share = value(rng) / 5.0;
            r.ci_uni = value(rng) / 5.0;
            r.ci_dpr = value(rng) / 5.0;
            r.fci = value(rng) / 5.0;
            r.dci = value(rng) / 5.0;
            records.push_back(r);
        }
    }
    const auto norm = normalize_to_sds_mean(records);
    double worst_mean = 0.0;
    for (const auto& sds : sectors.area_of) {
        for (auto m : kAllMetrics) {
            double sum = 0.0;
            int n = 0;
            for (const auto& c : norm.cells)
                if (c.sds == sds.first) {
                    sum += *c.value(m);
                    ++n;
                }
            worst_mean = std::max(worst_mean, std::abs(sum / n - 1.0));
        }
    }

    const auto agg = aggregate_area(norm.cells, sectors);
    double worst_agg = 0.0;
    for (const auto& a : agg) {
        for (auto m : kAllMetrics) {
            const auto k = static_cast<std::size_t>(m);
            double num = 0.0, den = 0.0;
            for (const auto& c : norm.cells) {
                if (c.university != a.university || sectors.area_of.at(c.sds) != a.area) continue;
                num += *c.values[k] * c.staff;
                den += c.staff;
            }
            worst_agg = std::max(worst_agg, std::abs(*a.values[k] - num / den));
        }
    }

    // Powers of two keep the rescaling exact in floating point.
    bool exact = true;
    for (double lambda : {2.0, 0.125, 1024.0}) {
        for (int s = 0; s < 12; ++s) {
            auto scaled = records;
            const std::string sds = "S" + std::to_string(10 + s);
            for (auto& r : scaled) {
                if (r.sds != sds) continue;
                *r.productivity *= lambda;
                *r.quality_index *= lambda;
                *r.fci *= lambda;
            }
            const auto n2 = normalize_to_sds_mean(scaled);
            const auto a2 = aggregate_area(n2.cells, sectors);
            for (std::size_t i = 0; i < n2.cells.size(); ++i) exact = exact && n2.cells[i].values == norm.cells[i].values;
            for (std::size_t i = 0; i < a2.size(); ++i) exact = exact && a2[i].values == agg[i].values;
        }
    }
    return {worst_mean <= 1e-9 && worst_agg <= 1e-12 && exact,
            "max |sector mean - 1| = " + str(worst_mean) + ", max |aggregate - brute force| = " + str(worst_agg) +
                ", scale invariance " + (exact ? "exact" : "violated")};
}

Outcome indicator_oracle() {
    std::mt19937_64 rng(606);
    std::size_t cells = 0, mismatches = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Corpus c = testing::random_mini_corpus(rng, 50);
        const auto got = compute_indicators(c);
        const auto want = testing::naive_indicators(c);
        if (got.size() != want.size()) return {false, "cell count differs on corpus " + str(trial)};
        for (std::size_t i = 0; i < got.size(); ++i) {
            const auto& g = got[i];
            const auto& w = want[i];
            ++cells;
            bool same = g.university == w.university && g.sds == w.sds && g.area == w.area && g.output == w.output;
            const auto real = [&](double a, double b) {
                worst = std::max(worst, close_rel(a, b));
                same = same && close_rel(a, b) <= 1e-12;
            };
            const auto opt = [&](const std::optional<double>& a, const std::optional<double>& b) {
                if (a.has_value() != b.has_value()) {
                    same = false;
                    return;
                }
                if (a) real(*a, *b);
            };
            real(g.fractional_output, w.fractional_output);
            real(g.strength, w.strength);
            real(g.fractional_strength, w.fractional_strength);
            real(g.staff, w.staff);
            opt(g.quality_index, w.quality_index);
            opt(g.productivity, w.productivity);
            opt(g.fractional_productivity, w.fractional_productivity);
            opt(g.quality_productivity, w.quality_productivity);
            opt(g.fractional_quality_productivity, w.fractional_quality_productivity);
            opt(g.ci_ratio, w.ci_ratio);
            opt(g.ci_share, w.ci_share);
            opt(g.ci_uni, w.ci_uni);
            opt(g.ci_dpr, w.ci_dpr);
            opt(g.fci, w.fci);
            opt(g.dci, w.dci);
            mismatches += !same;
        }
    }
    return {mismatches == 0, str(cells) + " cells over 200 corpora, " + str(mismatches) +
                                 " mismatching, max relative difference " + str(worst)};
}

Outcome planted_correlation() {
    const auto t0 = std::chrono::steady_clock::now();
    int recovered = 0, quiet = 0;
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        synth::SynthParams p;
        p.seed = seed;
        p.n_universities = 60;
        p.planted.push_back(synth::PlantedAssociation{"DA01", Metric::CI, Metric::P, 0.7});
        const auto res = synth::generate_corpus(p);
        const auto norm = normalize_to_sds_mean(compute_indicators(res.corpus));
        auto agg = aggregate_area(norm.cells, res.corpus.sectors);
        apply_exclusion(agg);
        const auto table = build_correlation_table(agg, Metric::CI);
        const auto* planted = table.find("DA01", Metric::P);
        if (planted && planted->result.stats) {
            const double r = planted->result.stats->r;
            sum += r;
            recovered += std::abs(r - 0.7) <= 0.1;
        }
        bool all_quiet = true;
        for (const char* area : {"DA02", "DA03"}) {
            const auto* cell = table.find(area, Metric::P);
            all_quiet = all_quiet && cell && cell->result.stats && std::abs(cell->result.stats->r) < 0.3;
        }
        quiet += all_quiet;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {recovered >= 95 && quiet >= 90 && secs < 60.0,
            "planted area within 0.1 of 0.7 in " + str(recovered) + "/100 seeds (mean r " + str(sum / 100) +
                "), unplanted areas |r| < 0.3 in " + str(quiet) + "/100 seeds"};
}

std::map<std::string, std::string> directory_contents(const std::filesystem::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) out[e.path().filename().string()] = read_file(e.path());
    return out;
}

Outcome end_to_end_determinism() {
    const auto root = testing::scratch_dir("acceptance_e2e");
    const std::string cli = std::string("\"") + UNICOLLAB_CLI_PATH + "\"";
    const auto sh = [](const std::string& cmd) { return std::system((cmd + " > /dev/null").c_str()); };
    if (sh(cli + " synth --seed 42 --out \"" + (root / "corpus").string() + "\"") != 0) return {false, "synth failed"};
    for (const char* out : {"run1", "run2"}) {
        if (sh(cli + " all --input-dir \"" + (root / "corpus").string() + "\" --out \"" + (root / out).string() + "\"") != 0)
            return {false, std::string("all failed for ") + out};
    }
    const auto a = directory_contents(root / "run1");
    const auto b = directory_contents(root / "run2");
    return {a == b && a.size() >= 13, str(a.size()) + " files per run, " + (a == b ? "byte-identical" : "different")};
}

Outcome exclusion_rule() {
    synth::SynthParams p;
    p.seed = 31;
    p.n_universities = 8;
    p.n_areas = 1;
    p.years = 10;
    std::vector<long long> forty_nine(10, 5);
    forty_nine[9] = 4;
    p.staff_overrides = {synth::StaffOverride{"U001", "DA01", {3}}, synth::StaffOverride{"U002", "DA01", forty_nine},
                         synth::StaffOverride{"U003", "DA01", {5}}, synth::StaffOverride{"U004", "DA01", {40}}};
    const auto res = synth::generate_corpus(p);
    const auto norm = normalize_to_sds_mean(compute_indicators(res.corpus));
    std::vector<Exclusion> log;
    const auto kept = filter_small_universities(aggregate_area(norm.cells, res.corpus.sectors), 5.0, &log);
    std::string names;
    for (const auto& e : log) names += (names.empty() ? "" : ", ") + e.university + " (" + str(e.average_staff) + ")";
    const bool ok = log.size() == 2 && log[0].university == "U001" && log[1].university == "U002" &&
                    std::abs(log[1].average_staff - 4.9) < 1e-12 && kept.size() == 6;
    return {ok, "excluded " + names + "; " + str(kept.size()) + " retained"};
}

}  // namespace

int main() {
    report(1, "concentration-index reproduction", concentration_reproduction);
    report(2, "cross-tab marginal identity", marginal_identity);
    report(3, "dispersion cv consistency", cv_consistency);
    report(4, "statistics identities", statistics_identities);
    report(5, "normalization and aggregation properties", normalization_properties);
    report(6, "indicator oracle equivalence", indicator_oracle);
    report(7, "planted correlation recovery", planted_correlation);
    report(8, "end-to-end determinism", end_to_end_determinism);
    report(9, "small-university exclusion", exclusion_rule);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
