#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "unicollab/corpus.hpp"
#include "unicollab/indicators.hpp"

namespace unicollab::synth {

/// Per-publication probabilities of including one co-author organization of
/// each class.
struct Propensities {
    double other_university = 0.25;
    double dpr = 0.25;
    double enterprise = 0.03;
    double foreign = 0.30;
};

/// Induces a sample correlation `r` across universities between the area
/// aggregates of collaboration metric `x` (CI, FCI or DCI) and productivity
/// `y` (P).
struct PlantedAssociation {
    std::string area;
    Metric x = Metric::CI;
    Metric y = Metric::P;
    double r = 0.0;
};

/// Fixed yearly area headcounts for one university; the whole headcount is
/// placed in the area's first sector. One entry means "every year".
struct StaffOverride {
    std::string university;
    std::string area;
    std::vector<long long> headcounts;
};

struct SynthParams {
    std::uint64_t seed = 42;
    std::size_t n_universities = 20;
    std::size_t n_areas = 3;
    std::size_t sds_per_area = 3;
    std::size_t years = 3;
    int first_year = 2001;
    std::string home_country = "IT";

    long long staff_min = 5;
    long long staff_max = 30;
    double pubs_per_staff_mean = 1.0;  // publications per staff member per year

    Propensities collab;
    std::map<std::string, Propensities> area_collab;    // by area code
    std::map<std::string, Propensities> sector_collab;  // by sds code

    double if_log_mean = 0.5;
    double if_log_sd = 0.6;
    double if_sector_spread = 0.5;  // per-sector log-mean offset, uniform in [-spread, spread]
    std::size_t journals_per_sds = 8;

    std::size_t n_dpr = 5;
    std::size_t n_enterprises = 10;
    std::size_t n_foreign = 20;

    double co_attribution = 0.2;  // partner university also credited in the same sector
    double cross_sector = 0.05;   // extra attribution to a second sector of the same area
    double association_spread = 0.3;  // relative spread of the latent university drivers

    std::vector<PlantedAssociation> planted;
    std::vector<StaffOverride> staff_overrides;

    Period period() const;
};

/// Throws std::invalid_argument describing the first invalid parameter,
/// including infeasible planted correlations.
void validate_params(const SynthParams& params);

/// All keys optional; missing keys keep their defaults.
SynthParams parse_params_json(std::string_view text);
std::string params_to_json(const SynthParams& params);

std::string area_code(std::size_t area_index);
std::string sds_code(std::size_t area_index, std::size_t sds_index);
std::string university_code(std::size_t index);

struct PlantedCorrelationTruth {
    PlantedAssociation association;
    double latent_r = 0.0;  // r used for the latent drivers after reliability correction
    double achieved_latent_r = 0.0;
    double reliability_x = 1.0;
    double reliability_y = 1.0;
    // Per-university multipliers actually applied, in university order.
    std::vector<double> driver_x;
    std::vector<double> driver_y;
};

struct GroundTruth {
    std::map<std::string, std::map<std::string, double>> planted_shares;  // area -> metric -> share
    std::vector<PlantedCorrelationTruth> planted_correlations;
    std::vector<std::pair<std::string, std::string>> below_staff_threshold;  // (university, area) < 5
};

struct SynthResult {
    Corpus corpus;
    GroundTruth truth;
};

/// Pure function of the parameters: same parameters, same corpus.
SynthResult generate_corpus(const SynthParams& params);

std::string ground_truth_to_json(const GroundTruth& truth);

/// The five corpus files plus ground_truth.json.
void write_synthetic(const SynthResult& result, const std::filesystem::path& dir);

}  // namespace unicollab::synth
