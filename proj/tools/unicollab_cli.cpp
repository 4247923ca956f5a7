#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "unicollab/pipeline.hpp"

int main(int argc, char** argv) {
    using namespace unicollab;

    CLI::App app{"Collaboration intensity and research productivity indicators"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    std::filesystem::path input_dir;
    std::string pubs, orgs, journals, staff, sectors;
    std::string period = to_string(config.period);
    std::string ci_mode = "share", quartile_scope = "global", table2_mode = "pooled";
    std::string indicators_in, aggregates_in, params;
    std::uint64_t seed = 0;

    app.add_option("--input-dir", input_dir, "Directory holding the five standard input files");
    app.add_option("--pubs", pubs, "publications.jsonl");
    app.add_option("--orgs", orgs, "organizations.csv");
    app.add_option("--journals", journals, "journals.csv");
    app.add_option("--staff", staff, "staff.csv");
    app.add_option("--sectors", sectors, "sectors.csv");
    app.add_option("--out", config.out_dir, "Output directory")->capture_default_str();
    app.add_option("--home-country", config.home_country, "Home country code")->capture_default_str();
    app.add_option("--period", period, "Survey period, e.g. 2001-2003")->capture_default_str();
    app.add_option("--threshold", config.threshold, "Minimum average area staff")->capture_default_str();
    app.add_option("--ci-mode", ci_mode, "Collaboration intensity reading for correlations")
        ->check(CLI::IsMember({"share", "ratio"}))
        ->capture_default_str();
    app.add_option("--quartile-scope", quartile_scope, "Impact factor quartiles for the cross-tab")
        ->check(CLI::IsMember({"global", "per-sector"}))
        ->capture_default_str();
    app.add_option("--table2-mode", table2_mode, "Area profile shares")
        ->check(CLI::IsMember({"pooled", "weighted"}))
        ->capture_default_str();
    app.add_option("--top", config.top_n, "Sectors listed per area in top-sector tables")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--indicators", indicators_in, "Persisted indicators.csv to start from");
    app.add_option("--aggregates", aggregates_in, "Persisted aggregates.csv to start from");
    auto* seed_opt = app.add_option("--seed", seed, "Generator seed (synth)");
    app.add_option("--params", params, "Generator parameters JSON (synth)");

    for (const char* name : {"validate", "indicators", "aggregate", "report", "correlate", "synth", "all"}) {
        app.add_subcommand(name);
    }

    CLI11_PARSE(app, argc, argv);

    if (!input_dir.empty()) config.inputs = CorpusPaths::in_directory(input_dir);
    if (!pubs.empty()) config.inputs.publications = pubs;
    if (!orgs.empty()) config.inputs.organizations = orgs;
    if (!journals.empty()) config.inputs.journals = journals;
    if (!staff.empty()) config.inputs.staff = staff;
    if (!sectors.empty()) config.inputs.sectors = sectors;
    try {
        config.period = parse_period(period);
    } catch (const std::exception& e) {
        std::cerr << "error: stage=config: " << e.what() << "\n";
        return 2;
    }
    config.ci_mode = ci_mode == "ratio" ? CiMode::Ratio : CiMode::Share;
    config.quartile_scope = quartile_scope == "per-sector" ? QuartileScope::PerSector : QuartileScope::Global;
    config.table2_mode = table2_mode == "weighted" ? AreaProfileMode::Weighted : AreaProfileMode::Pooled;
    if (!indicators_in.empty()) config.indicators_input = indicators_in;
    if (!aggregates_in.empty()) config.aggregates_input = aggregates_in;
    if (*seed_opt) config.seed = seed;
    if (!params.empty()) config.params_path = params;

    const auto subcommand = parse_subcommand(app.get_subcommands().front()->get_name());
    return run(*subcommand, config, std::cout, std::cerr);
}
