#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "unicollab/corpus.hpp"
#include "unicollab/indicators.hpp"
#include "unicollab/reports.hpp"

namespace unicollab {

enum class Subcommand { Validate, Indicators, Aggregate, Report, Correlate, Synth, All };

std::optional<Subcommand> parse_subcommand(std::string_view name);
std::string_view to_string(Subcommand s);

struct RunConfig {
    CorpusPaths inputs;
    std::filesystem::path out_dir = "out";
    std::string home_country = "IT";
    Period period;
    double threshold = 5.0;
    CiMode ci_mode = CiMode::Share;
    QuartileScope quartile_scope = QuartileScope::Global;
    AreaProfileMode table2_mode = AreaProfileMode::Pooled;
    std::size_t top_n = 1;

    // Persisted intermediates used instead of recomputing from raw inputs.
    std::optional<std::filesystem::path> indicators_input;
    std::optional<std::filesystem::path> aggregates_input;

    // synth only
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> params_path;

    /// Throws std::invalid_argument on an empty period or threshold <= 0.
    void validate() const;
};

/// Runs one subcommand and writes its outputs plus run_manifest.json into
/// `config.out_dir`. Returns 0 on success, 1 when a stage fails and 2 for
/// an invalid configuration; failures are summarized on `err` as
/// "error: stage=<name>: <message>".
int run(Subcommand subcommand, const RunConfig& config, std::ostream& log, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace unicollab
