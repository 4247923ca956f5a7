#include "unicollab/pipeline.hpp"

#include <array>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "unicollab/aggregate.hpp"
#include "unicollab/csv.hpp"
#include "unicollab/synth.hpp"

namespace unicollab {

namespace {

constexpr std::array<std::string_view, 7> kSubcommandNames = {
    "validate", "indicators", "aggregate", "report", "correlate", "synth", "all"};

// Raised inside a stage; carries the stage name for the error summary.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error(message), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

class Run {
public:
    Run(const RunConfig& config, std::ostream& log) : config_(config), log_(log) {}

    template <typename F>
    auto stage(const std::string& name, F&& body) {
        try {
            return body();
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(name, e.what());
        }
    }

    void validate_stage() {
        const Corpus c = stage("validate", [&] { return parse_corpus(config_.inputs, corpus_config()); });
        note_inputs();
        const ValidationReport report = validate_corpus(c);
        write("validation_report.txt", report.to_text());
        log_ << "validate: " << c.publications.size() << " publications, " << report.error_count()
             << " error(s), " << report.warning_count() << " warning(s)\n";
        if (!report.ok()) throw StageError("validate", report.to_text());
        corpus_ = c;
    }

    void indicators_stage() {
        records();
        write("indicators.csv", indicators_to_csv(*records_));
    }

    void aggregate_stage() {
        aggregates();
        write("aggregates.csv", aggregates_to_csv(*aggregates_));
        write("exclusions.csv", exclusions_to_csv(exclusions_));
    }

    void correlate_stage() {
        stage("correlate", [&] {
            for (Metric m : {Metric::CI, Metric::FCI, Metric::DCI}) {
                const auto table = build_correlation_table(aggregates(), m);
                std::string name(to_string(m));
                for (auto& ch : name) ch = static_cast<char>(std::tolower(ch));
                write("correlation_" + name + ".csv", correlation_to_csv(table));
            }
            return 0;
        });
    }

    void report_stage() {
        const Corpus& c = corpus();
        const auto& recs = records();
        stage("report", [&] {
            write("crosstab.csv", crosstab_to_csv(build_crosstab(c, config_.quartile_scope)));
            write("area_profile.csv", area_profile_to_csv(build_area_profile(c, recs, config_.table2_mode)));
            const auto by_sector = pool_by_sector(c);
            const auto by_area = pool_by_area(c);
            const auto dispersion = build_dispersion_table(by_sector, c.sectors, Metric::CI);
            for (const auto& w : dispersion.warnings) log_ << "warning: " << w << "\n";
            write("dispersion.csv", dispersion_to_csv(dispersion));
            write("top_sectors_fci.csv",
                  top_sectors_to_csv(build_top_sector_table(by_sector, by_area, Metric::FCI, config_.top_n)));
            write("top_sectors_dci.csv",
                  top_sectors_to_csv(build_top_sector_table(by_sector, by_area, Metric::DCI, config_.top_n)));
            return 0;
        });
    }

    void synth_stage() {
        stage("synth", [&] {
            synth::SynthParams params;
            if (config_.params_path) {
                params = synth::parse_params_json(read_file(*config_.params_path));
                inputs_.push_back(*config_.params_path);
            }
            if (config_.seed) params.seed = *config_.seed;
            const auto result = synth::generate_corpus(params);
            std::filesystem::create_directories(config_.out_dir);
            synth::write_synthetic(result, config_.out_dir);
            const CorpusPaths paths = CorpusPaths::in_directory(config_.out_dir);
            for (const auto& p : {paths.publications, paths.organizations, paths.journals, paths.staff,
                                  paths.sectors, config_.out_dir / "ground_truth.json"}) {
                outputs_.push_back(p.filename().string());
            }
            write("synth_params.json", synth::params_to_json(params));
            log_ << "synth: " << result.corpus.publications.size() << " publications\n";
            return 0;
        });
    }

    void write_manifest(std::string_view subcommand) {
        nlohmann::ordered_json j;
        j["subcommand"] = std::string(subcommand);
        j["config"] = {{"home_country", config_.home_country},
                       {"period", to_string(config_.period)},
                       {"threshold", config_.threshold},
                       {"ci_mode", config_.ci_mode == CiMode::Share ? "share" : "ratio"},
                       {"quartile_scope",
                        config_.quartile_scope == QuartileScope::Global ? "global" : "per-sector"},
                       {"table2_mode",
                        config_.table2_mode == AreaProfileMode::Pooled ? "pooled" : "weighted"},
                       {"top", config_.top_n}};
        if (config_.seed) j["config"]["seed"] = *config_.seed;
        auto inputs = nlohmann::ordered_json::array();
        for (const auto& p : inputs_) {
            inputs.push_back({{"file", p.filename().string()}, {"sha256", file_sha256(p)}});
        }
        j["inputs"] = inputs;
        auto outputs = nlohmann::ordered_json::array();
        for (const auto& name : outputs_) {
            outputs.push_back({{"file", name}, {"sha256", file_sha256(config_.out_dir / name)}});
        }
        j["outputs"] = outputs;
        write_file(config_.out_dir / "run_manifest.json", j.dump(2) + "\n");
    }

private:
    CorpusConfig corpus_config() const { return CorpusConfig{config_.home_country, config_.period}; }

    void note_inputs() {
        if (inputs_noted_) return;
        inputs_noted_ = true;
        const auto& p = config_.inputs;
        for (const auto& path : {p.publications, p.organizations, p.journals, p.staff, p.sectors}) {
            inputs_.push_back(path);
        }
    }

    const Corpus& corpus() {
        if (!corpus_) {
            corpus_ = stage("load", [&] { return load_corpus(config_.inputs, corpus_config()); });
            note_inputs();
        }
        return *corpus_;
    }

    const std::vector<IndicatorRecord>& records() {
        if (!records_) {
            if (config_.indicators_input) {
                records_ = stage("indicators", [&] { return read_indicators_csv(*config_.indicators_input); });
                inputs_.push_back(*config_.indicators_input);
            } else {
                const Corpus& c = corpus();
                records_ = stage("indicators", [&] { return compute_indicators(c); });
            }
            log_ << "indicators: " << records_->size() << " cells\n";
        }
        return *records_;
    }

    const std::vector<AreaAggregate>& aggregates() {
        if (!aggregates_) {
            if (config_.aggregates_input) {
                aggregates_ = stage("aggregate", [&] { return read_aggregates_csv(*config_.aggregates_input); });
                inputs_.push_back(*config_.aggregates_input);
                return *aggregates_;
            }
            const auto& recs = records();
            aggregates_ = stage("aggregate", [&] {
                SectorMap sectors;
                if (corpus_) {
                    sectors = corpus_->sectors;
                } else {
                    for (const auto& r : recs) sectors.area_of[r.sds] = r.area;
                }
                const NormalizationResult norm = normalize_to_sds_mean(recs, config_.ci_mode);
                for (const auto& z : norm.zero_mean) {
                    std::string metrics;
                    for (Metric m : z.metrics) metrics += (metrics.empty() ? "" : ",") + std::string(to_string(m));
                    log_ << "warning: sector " << z.sds << " has zero mean for " << metrics
                         << "; normalized values undefined\n";
                }
                auto aggs = aggregate_area(norm.cells, sectors);
                exclusions_ = apply_exclusion(aggs, config_.threshold);
                return aggs;
            });
            log_ << "aggregate: " << aggregates_->size() << " rows, " << exclusions_.size()
                 << " excluded\n";
        }
        return *aggregates_;
    }

    void write(const std::string& name, std::string_view content) {
        std::filesystem::create_directories(config_.out_dir);
        emit_csv(content, config_.out_dir / name);
        outputs_.push_back(name);
    }

    const RunConfig& config_;
    std::ostream& log_;
    std::optional<Corpus> corpus_;
    std::optional<std::vector<IndicatorRecord>> records_;
    std::optional<std::vector<AreaAggregate>> aggregates_;
    std::vector<Exclusion> exclusions_;
    std::vector<std::filesystem::path> inputs_;
    std::vector<std::string> outputs_;
    bool inputs_noted_ = false;
};

}  // namespace

std::optional<Subcommand> parse_subcommand(std::string_view name) {
    for (std::size_t i = 0; i < kSubcommandNames.size(); ++i) {
        if (kSubcommandNames[i] == name) return static_cast<Subcommand>(i);
    }
    return std::nullopt;
}

std::string_view to_string(Subcommand s) { return kSubcommandNames[static_cast<std::size_t>(s)]; }

void RunConfig::validate() const {
    if (period.empty()) throw std::invalid_argument("period must be non-empty");
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");
    if (top_n == 0) throw std::invalid_argument("--top must be >= 1");
    if (home_country.empty()) throw std::invalid_argument("home country must be set");
}

int run(Subcommand subcommand, const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        config.validate();
    } catch (const std::exception& e) {
        err << "error: stage=config: " << e.what() << "\n";
        return 2;
    }
    Run r(config, log);
    try {
        switch (subcommand) {
            case Subcommand::Validate: r.validate_stage(); break;
            case Subcommand::Indicators: r.indicators_stage(); break;
            case Subcommand::Aggregate: r.aggregate_stage(); break;
            case Subcommand::Report: r.report_stage(); break;
            case Subcommand::Correlate: r.correlate_stage(); break;
            case Subcommand::Synth: r.synth_stage(); break;
            case Subcommand::All:
                r.validate_stage();
                r.indicators_stage();
                r.aggregate_stage();
                r.report_stage();
                r.correlate_stage();
                break;
        }
        r.write_manifest(to_string(subcommand));
    } catch (const StageError& e) {
        err << "error: stage=" << e.stage() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: stage=" << to_string(subcommand) << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}

std::string file_sha256(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed for " + path.string());
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

}  // namespace unicollab
