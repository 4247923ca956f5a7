#include "unicollab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "unicollab/csv.hpp"

namespace unicollab::synth {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent generator per (seed, entity key).
std::mt19937_64 stream(std::uint64_t seed, std::string_view key) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(fnv1a(key))));
}

std::string code(const char* prefix, std::size_t index, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, index);
    return buf;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument("synth parameters: " + message);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void check_propensities(const Propensities& p, const std::string& where) {
    require(is_probability(p.other_university) && is_probability(p.dpr) &&
                is_probability(p.enterprise) && is_probability(p.foreign),
            where + " propensities must lie in [0,1]");
}

const Propensities& area_propensities(const SynthParams& params, const std::string& area) {
    auto it = params.area_collab.find(area);
    return it == params.area_collab.end() ? params.collab : it->second;
}

const Propensities& sector_propensities(const SynthParams& params, const std::string& area,
                                        const std::string& sds) {
    auto it = params.sector_collab.find(sds);
    return it == params.sector_collab.end() ? area_propensities(params, area) : it->second;
}

double extramural_probability(const Propensities& p) {
    return 1.0 - (1.0 - p.other_university) * (1.0 - p.dpr) * (1.0 - p.enterprise) *
                     (1.0 - p.foreign);
}

// Standardized sample (mean 0, sd 1); zero vector if constant.
std::vector<double> standardize(std::vector<double> v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double& x : v) {
        x -= mean;
        ss += x * x;
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    for (double& x : v) x = sd > 0.0 ? x / sd : 0.0;
    return v;
}

// Two series whose sample correlation is exactly r.
std::pair<std::vector<double>, std::vector<double>> correlated_pair(std::uint64_t seed,
                                                                    const std::string& key,
                                                                    std::size_t n, double r) {
    std::vector<double> a(n), b(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto rng = stream(seed, key + "/" + university_code(k));
        std::normal_distribution<double> normal;
        a[k] = normal(rng);
        b[k] = normal(rng);
    }
    a = standardize(std::move(a));
    // Residualize b on a.
    double dot = 0.0;
    for (std::size_t k = 0; k < n; ++k) dot += a[k] * b[k];
    const double coef = dot / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) b[k] -= coef * a[k];
    b = standardize(std::move(b));
    std::vector<double> y(n);
    const double rest = std::sqrt(std::max(0.0, 1.0 - r * r));
    for (std::size_t k = 0; k < n; ++k) y[k] = r * a[k] + rest * b[k];
    return {std::move(a), std::move(y)};
}

double sample_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

// University-level multipliers within one area.
struct Drivers {
    double productivity = 1.0;
    double all_collab = 1.0;
    double foreign = 1.0;
    double enterprise = 1.0;
};

Propensities scaled(const Propensities& p, const Drivers& d) {
    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    return Propensities{clamp01(p.other_university * d.all_collab), clamp01(p.dpr * d.all_collab),
                        clamp01(p.enterprise * d.all_collab * d.enterprise),
                        clamp01(p.foreign * d.all_collab * d.foreign)};
}

// Share of publications carrying metric x's flag.
double flag_share(const Propensities& p, Metric x) {
    switch (x) {
        case Metric::FCI: return p.foreign;
        case Metric::DCI: return p.enterprise;
        default: return extramural_probability(p);
    }
}

Drivers drivers_for(const PlantedAssociation& a, double spread, double zx, double zy) {
    Drivers d;
    const double gx = std::max(0.05, 1.0 + spread * zx);
    switch (a.x) {
        case Metric::FCI: d.foreign = gx; break;
        case Metric::DCI: d.enterprise = gx; break;
        default: d.all_collab = gx; break;
    }
    d.productivity = std::max(0.05, 1.0 + spread * zy);
    return d;
}

double driver_x(const PlantedAssociation& a, const Drivers& d) {
    switch (a.x) {
        case Metric::FCI: return d.foreign;
        case Metric::DCI: return d.enterprise;
        default: return d.all_collab;
    }
}

struct Calibration {
    double latent_r = 0.0;
    double reliability_x = 1.0;
    double reliability_y = 1.0;
};

// Correlation between the measured area aggregates implied by latent r:
// expected per-university values (own output plus co-attributed partner
// output) attenuated by Poisson and binomial sampling noise.
double predicted_r(const SynthParams& params, const PlantedAssociation& a,
                   const std::vector<double>& person_years, double latent, Calibration* cal) {
    const std::size_t n = params.n_universities;
    const auto [zx, zy] = correlated_pair(params.seed, "latent/" + a.area + "/" + std::string(to_string(a.x)),
                                          n, latent);
    const Propensities& base = area_propensities(params, a.area);
    std::vector<double> own(n), send(n), share(n);
    double send_total = 0.0, send_flag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Drivers d = drivers_for(a, params.association_spread, zx[k], zy[k]);
        const Propensities prop = scaled(base, d);
        own[k] = person_years[k] * params.pubs_per_staff_mean * d.productivity;
        send[k] = n > 1 ? own[k] * prop.other_university * params.co_attribution : 0.0;
        share[k] = flag_share(prop, a.x);
        send_total += send[k];
        send_flag += send[k] * (a.x == Metric::CI ? 1.0 : share[k]);
    }
    std::vector<double> ex, ey;
    double noise_x = 0.0, noise_y = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double years_staff = person_years[k] / static_cast<double>(params.years);
        if (years_staff < 5.0) continue;
        const double others = n > 1 ? static_cast<double>(n - 1) : 1.0;
        const double received = (send_total - send[k]) / others;
        const double received_flag =
            send_total - send[k] > 0.0 ? (send_flag - send[k] * (a.x == Metric::CI ? 1.0 : share[k])) /
                                             (send_total - send[k])
                                       : 0.0;
        const double total = own[k] + received;
        if (total <= 0.0) continue;
        const double x = (own[k] * share[k] + received * received_flag) / total;
        const double y = total / person_years[k];
        ex.push_back(x);
        ey.push_back(y);
        noise_x += x * (1.0 - x) / total;
        noise_y += y * y / total;
    }
    if (ex.size() < 3) return 0.0;
    const double m = static_cast<double>(ex.size());
    noise_x /= m;
    noise_y /= m;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ex.size(); ++i) {
        mx += ex[i];
        my += ey[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ex.size(); ++i) {
        sxx += (ex[i] - mx) * (ex[i] - mx);
        syy += (ey[i] - my) * (ey[i] - my);
        sxy += (ex[i] - mx) * (ey[i] - my);
    }
    const double vx = sxx / (m - 1.0), vy = syy / (m - 1.0);
    const double rel_x = vx + noise_x > 0.0 ? vx / (vx + noise_x) : 0.0;
    const double rel_y = vy + noise_y > 0.0 ? vy / (vy + noise_y) : 0.0;
    if (cal) *cal = Calibration{latent, rel_x, rel_y};
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy) * std::sqrt(rel_x * rel_y);
}

// Latent r whose predicted measured correlation equals the target.
Calibration calibrate(const SynthParams& params, const PlantedAssociation& a,
                      const std::vector<double>& person_years) {
    Calibration cal;
    if (a.r == 0.0) {
        predicted_r(params, a, person_years, 0.0, &cal);
        return cal;
    }
    const double sign = a.r > 0.0 ? 1.0 : -1.0;
    const double reach = sign * predicted_r(params, a, person_years, sign, nullptr);
    if (!(std::abs(a.r) < reach)) {
        throw std::invalid_argument("synth parameters: infeasible planted correlation r=" + format_shortest(a.r) +
                                    " in area " + a.area + " (sampling noise caps the attainable |r| at " +
                                    format_shortest(std::max(0.0, reach)) + ")");
    }
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sign * predicted_r(params, a, person_years, sign * mid, nullptr) < std::abs(a.r)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    predicted_r(params, a, person_years, sign * 0.5 * (lo + hi), &cal);
    return cal;
}

// Yearly headcounts for every (university, sector, year).
StaffRoster build_staff(const SynthParams& params) {
    std::map<std::pair<std::string, std::string>, const StaffOverride*> overrides;
    for (const auto& o : params.staff_overrides) overrides[{o.university, o.area}] = &o;
    StaffRoster staff;
    for (std::size_t a = 0; a < params.n_areas; ++a) {
        for (std::size_t k = 0; k < params.n_universities; ++k) {
            const std::string uni = university_code(k);
            auto ov = overrides.find({uni, area_code(a)});
            for (std::size_t s = 0; s < params.sds_per_area; ++s) {
                const std::string sds = sds_code(a, s);
                auto rng = stream(params.seed, "staff/" + uni + "/" + sds);
                std::uniform_int_distribution<long long> base_dist(params.staff_min, params.staff_max);
                std::uniform_int_distribution<int> jitter(-1, 1);
                const long long base = base_dist(rng);
                for (std::size_t y = 0; y < params.years; ++y) {
                    long long h = std::clamp(base + jitter(rng), params.staff_min, params.staff_max);
                    if (ov != overrides.end()) {
                        const auto& hc = ov->second->headcounts;
                        h = s == 0 ? hc[hc.size() == 1 ? 0 : y] : 0;
                    }
                    staff.set(StaffKey{uni, sds, params.first_year + static_cast<int>(y)}, h);
                }
            }
        }
    }
    return staff;
}

// Person-years of staff per university in one area.
std::vector<double> area_person_years(const SynthParams& params, const StaffRoster& staff,
                                      const std::string& area) {
    std::vector<double> out(params.n_universities, 0.0);
    for (const auto& [key, head] : staff.entries()) {
        if (key.sds.rfind(area + "-", 0) != 0) continue;
        const std::size_t k = static_cast<std::size_t>(std::stoul(key.university.substr(1))) - 1;
        out[k] += static_cast<double>(head);
    }
    return out;
}

Propensities propensities_from_json(const nlohmann::json& j, Propensities p) {
    p.other_university = j.value("other_university", p.other_university);
    p.dpr = j.value("dpr", p.dpr);
    p.enterprise = j.value("enterprise", p.enterprise);
    p.foreign = j.value("foreign", p.foreign);
    return p;
}

ordered_json propensities_to_json(const Propensities& p) {
    ordered_json j;
    j["other_university"] = p.other_university;
    j["dpr"] = p.dpr;
    j["enterprise"] = p.enterprise;
    j["foreign"] = p.foreign;
    return j;
}

Metric parse_planted_metric(const std::string& name) {
    if (name == "CI_share") return Metric::CI;
    auto m = parse_metric(name);
    if (!m) throw std::invalid_argument("synth parameters: unknown metric '" + name + "'");
    return *m;
}

}  // namespace

Period SynthParams::period() const {
    return Period{first_year, first_year + static_cast<int>(years) - 1};
}

std::string area_code(std::size_t area_index) { return code("DA", area_index + 1, 2); }

std::string sds_code(std::size_t area_index, std::size_t sds_index) {
    return area_code(area_index) + code("-S", sds_index + 1, 2);
}

std::string university_code(std::size_t index) { return code("U", index + 1, 3); }

void validate_params(const SynthParams& p) {
    require(p.n_universities >= 1 && p.n_areas >= 1 && p.sds_per_area >= 1 && p.years >= 1,
            "counts must be >= 1");
    require(p.journals_per_sds >= 1, "journals_per_sds must be >= 1");
    require(p.staff_min >= 0 && p.staff_min <= p.staff_max, "staff range must satisfy 0 <= min <= max");
    require(p.pubs_per_staff_mean >= 0.0 && std::isfinite(p.pubs_per_staff_mean),
            "pubs_per_staff_mean must be >= 0");
    require(p.if_log_sd >= 0.0 && p.if_sector_spread >= 0.0, "impact factor spreads must be >= 0");
    require(is_probability(p.co_attribution) && is_probability(p.cross_sector),
            "co_attribution and cross_sector must lie in [0,1]");
    require(p.association_spread >= 0.0, "association_spread must be >= 0");
    check_propensities(p.collab, "default");
    for (const auto& [area, prop] : p.area_collab) check_propensities(prop, "area " + area);
    for (const auto& [sds, prop] : p.sector_collab) check_propensities(prop, "sector " + sds);
    require(p.n_dpr >= 1 || p.collab.dpr == 0.0, "dpr propensity needs n_dpr >= 1");
    require(p.n_enterprises >= 1 || p.collab.enterprise == 0.0, "enterprise propensity needs n_enterprises >= 1");
    require(p.n_foreign >= 1 || p.collab.foreign == 0.0, "foreign propensity needs n_foreign >= 1");

    std::set<std::string> areas;
    for (std::size_t a = 0; a < p.n_areas; ++a) areas.insert(area_code(a));
    for (const auto& o : p.staff_overrides) {
        require(areas.count(o.area) == 1, "staff override names unknown area " + o.area);
        require(o.headcounts.size() == 1 || o.headcounts.size() == p.years,
                "staff override needs 1 or `years` headcounts");
        for (long long h : o.headcounts) require(h >= 0, "staff override headcounts must be >= 0");
    }
    std::set<std::pair<std::string, Metric>> used;
    for (const auto& a : p.planted) {
        require(areas.count(a.area) == 1, "planted association names unknown area " + a.area);
        require(a.r >= -1.0 && a.r <= 1.0, "planted r must lie in [-1,1]");
        require(a.x == Metric::CI || a.x == Metric::FCI || a.x == Metric::DCI,
                "planted x must be CI, FCI or DCI");
        require(a.y == Metric::P, "planted y must be P");
        require(p.n_universities >= 3, "planted correlations need >= 3 universities");
        require(used.emplace(a.area, a.x).second && used.emplace(a.area, a.y).second,
                "each metric may be planted at most once per area");
    }
    if (!p.planted.empty()) {
        const StaffRoster staff = build_staff(p);
        for (const auto& a : p.planted) calibrate(p, a, area_person_years(p, staff, a.area));
    }
}

SynthParams parse_params_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("synth parameters: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("synth parameters: expected a JSON object");
    SynthParams p;
    try {
        p.seed = j.value("seed", p.seed);
        p.n_universities = j.value("n_universities", p.n_universities);
        p.n_areas = j.value("n_areas", p.n_areas);
        p.sds_per_area = j.value("sds_per_area", p.sds_per_area);
        p.years = j.value("years", p.years);
        p.first_year = j.value("first_year", p.first_year);
        p.home_country = j.value("home_country", p.home_country);
        if (j.contains("staff_range")) {
            const auto& r = j.at("staff_range");
            p.staff_min = r.at(0).get<long long>();
            p.staff_max = r.at(1).get<long long>();
        }
        p.pubs_per_staff_mean = j.value("pubs_per_staff_mean", p.pubs_per_staff_mean);
        if (j.contains("collab_propensities")) {
            p.collab = propensities_from_json(j.at("collab_propensities"), p.collab);
        }
        if (j.contains("area_propensities")) {
            for (const auto& [area, v] : j.at("area_propensities").items()) {
                p.area_collab[area] = propensities_from_json(v, p.collab);
            }
        }
        if (j.contains("sector_propensities")) {
            for (const auto& [sds, v] : j.at("sector_propensities").items()) {
                p.sector_collab[sds] = propensities_from_json(v, p.collab);
            }
        }
        if (j.contains("if_distribution")) {
            const auto& d = j.at("if_distribution");
            p.if_log_mean = d.value("log_mean", p.if_log_mean);
            p.if_log_sd = d.value("log_sd", p.if_log_sd);
            p.if_sector_spread = d.value("sector_spread", p.if_sector_spread);
        }
        p.journals_per_sds = j.value("journals_per_sds", p.journals_per_sds);
        p.n_dpr = j.value("n_dpr", p.n_dpr);
        p.n_enterprises = j.value("n_enterprises", p.n_enterprises);
        p.n_foreign = j.value("n_foreign", p.n_foreign);
        p.co_attribution = j.value("co_attribution", p.co_attribution);
        p.cross_sector = j.value("cross_sector", p.cross_sector);
        p.association_spread = j.value("association_spread", p.association_spread);
        if (j.contains("planted_associations")) {
            for (const auto& a : j.at("planted_associations")) {
                p.planted.push_back(PlantedAssociation{a.at("area").get<std::string>(),
                                                       parse_planted_metric(a.value("x", "CI")),
                                                       parse_planted_metric(a.value("y", "P")),
                                                       a.at("r").get<double>()});
            }
        }
        if (j.contains("staff_overrides")) {
            for (const auto& o : j.at("staff_overrides")) {
                StaffOverride so{o.at("university").get<std::string>(), o.at("area").get<std::string>(),
                                 {}};
                if (o.contains("headcounts")) {
                    so.headcounts = o.at("headcounts").get<std::vector<long long>>();
                } else {
                    so.headcounts = {o.at("headcount").get<long long>()};
                }
                p.staff_overrides.push_back(std::move(so));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("synth parameters: ") + e.what());
    }
    validate_params(p);
    return p;
}

std::string params_to_json(const SynthParams& p) {
    ordered_json j;
    j["seed"] = p.seed;
    j["n_universities"] = p.n_universities;
    j["n_areas"] = p.n_areas;
    j["sds_per_area"] = p.sds_per_area;
    j["years"] = p.years;
    j["first_year"] = p.first_year;
    j["home_country"] = p.home_country;
    j["staff_range"] = {p.staff_min, p.staff_max};
    j["pubs_per_staff_mean"] = p.pubs_per_staff_mean;
    j["collab_propensities"] = propensities_to_json(p.collab);
    ordered_json areas = ordered_json::object();
    for (const auto& [a, v] : p.area_collab) areas[a] = propensities_to_json(v);
    j["area_propensities"] = areas;
    ordered_json sectors = ordered_json::object();
    for (const auto& [s, v] : p.sector_collab) sectors[s] = propensities_to_json(v);
    j["sector_propensities"] = sectors;
    j["if_distribution"] = {{"log_mean", p.if_log_mean},
                            {"log_sd", p.if_log_sd},
                            {"sector_spread", p.if_sector_spread}};
    j["journals_per_sds"] = p.journals_per_sds;
    j["n_dpr"] = p.n_dpr;
    j["n_enterprises"] = p.n_enterprises;
    j["n_foreign"] = p.n_foreign;
    j["co_attribution"] = p.co_attribution;
    j["cross_sector"] = p.cross_sector;
    j["association_spread"] = p.association_spread;
    ordered_json planted = ordered_json::array();
    for (const auto& a : p.planted) {
        planted.push_back(ordered_json{{"area", a.area},
                                       {"x", std::string(to_string(a.x))},
                                       {"y", std::string(to_string(a.y))},
                                       {"r", a.r}});
    }
    j["planted_associations"] = planted;
    ordered_json overrides = ordered_json::array();
    for (const auto& o : p.staff_overrides) {
        overrides.push_back(
            ordered_json{{"university", o.university}, {"area", o.area}, {"headcounts", o.headcounts}});
    }
    j["staff_overrides"] = overrides;
    return j.dump(2) + "\n";
}

SynthResult generate_corpus(const SynthParams& params) {
    validate_params(params);
    SynthResult result;
    Corpus& c = result.corpus;
    c.home_country = params.home_country;
    c.period = params.period();
    const std::size_t n_uni = params.n_universities;

    // Registry.
    for (std::size_t k = 0; k < n_uni; ++k) {
        const std::string id = university_code(k);
        c.organizations[id] = Organization{id, "University " + id, OrgClass::UnivDomestic,
                                           params.home_country};
    }
    std::vector<std::string> dprs, enterprises, foreigns;
    for (std::size_t i = 0; i < params.n_dpr; ++i) {
        dprs.push_back(code("R", i + 1, 3));
        c.organizations[dprs.back()] = Organization{dprs.back(), "Research institute " + dprs.back(),
                                                    OrgClass::DprDomestic, params.home_country};
    }
    for (std::size_t i = 0; i < params.n_enterprises; ++i) {
        enterprises.push_back(code("E", i + 1, 3));
        c.organizations[enterprises.back()] =
            Organization{enterprises.back(), "Enterprise " + enterprises.back(),
                         OrgClass::EnterpriseDomestic, params.home_country};
    }
    static constexpr const char* kForeignCountries[] = {"DE", "FR", "US", "GB", "ES", "NL", "CH"};
    std::size_t country_slot = 0;
    for (std::size_t i = 0; i < params.n_foreign; ++i) {
        foreigns.push_back(code("F", i + 1, 3));
        std::string country = kForeignCountries[i % 7];
        while (country == params.home_country) country = kForeignCountries[(i + ++country_slot) % 7];
        c.organizations[foreigns.back()] =
            Organization{foreigns.back(), "Foreign lab " + foreigns.back(), OrgClass::Foreign, country};
    }

    // Sectors and journals.
    std::vector<std::vector<std::string>> sectors(params.n_areas);
    std::map<std::string, std::vector<std::string>> journals_of;
    for (std::size_t a = 0; a < params.n_areas; ++a) {
        for (std::size_t s = 0; s < params.sds_per_area; ++s) {
            const std::string sds = sds_code(a, s);
            sectors[a].push_back(sds);
            c.sectors.area_of[sds] = area_code(a);

            auto rng = stream(params.seed, "sector/" + sds);
            std::uniform_real_distribution<double> offset(-params.if_sector_spread,
                                                          params.if_sector_spread);
            const double log_mean = params.if_log_mean + offset(rng);
            for (std::size_t j = 0; j < params.journals_per_sds; ++j) {
                const std::string jid = "J" + sds + code("-", j + 1, 2);
                auto jr = stream(params.seed, "journal/" + jid);
                std::lognormal_distribution<double> base_if(log_mean, params.if_log_sd);
                std::normal_distribution<double> drift(0.0, 0.05);
                const double base = base_if(jr);
                Journal& journal = c.journals[jid];
                journal.id = jid;
                for (int y = c.period.first_year; y <= c.period.last_year; ++y) {
                    const double v = std::round(base * std::exp(drift(jr)) * 1000.0) / 1000.0;
                    journal.impact_factor_by_year[y] = std::max(0.001, v);
                }
                journals_of[sds].push_back(jid);
            }
        }
    }

    c.staff = build_staff(params);

    // Latent drivers.
    std::map<std::string, std::vector<Drivers>> drivers;
    for (std::size_t a = 0; a < params.n_areas; ++a) drivers[area_code(a)].assign(n_uni, Drivers{});
    for (const auto& planted : params.planted) {
        const Calibration cal = calibrate(params, planted, area_person_years(params, c.staff, planted.area));
        PlantedCorrelationTruth truth;
        truth.association = planted;
        truth.latent_r = cal.latent_r;
        truth.reliability_x = cal.reliability_x;
        truth.reliability_y = cal.reliability_y;
        const std::string key = "latent/" + planted.area + "/" + std::string(to_string(planted.x));
        auto [zx, zy] = correlated_pair(params.seed, key, n_uni, truth.latent_r);
        truth.achieved_latent_r = sample_correlation(zx, zy);
        auto& d = drivers[planted.area];
        for (std::size_t k = 0; k < n_uni; ++k) {
            d[k] = drivers_for(planted, params.association_spread, zx[k], zy[k]);
            truth.driver_x.push_back(driver_x(planted, d[k]));
            truth.driver_y.push_back(d[k].productivity);
        }
        result.truth.planted_correlations.push_back(truth);
    }

    // Publications.
    std::size_t next_pub = 0;
    for (std::size_t a = 0; a < params.n_areas; ++a) {
        const std::string area = area_code(a);
        for (std::size_t s = 0; s < sectors[a].size(); ++s) {
            const std::string& sds = sectors[a][s];
            const Propensities& base_prop = sector_propensities(params, area, sds);
            const auto& jlist = journals_of[sds];
            for (std::size_t k = 0; k < n_uni; ++k) {
                const std::string uni = university_code(k);
                const Drivers& d = drivers[area][k];
                const Propensities prop = scaled(base_prop, d);
                for (std::size_t y = 0; y < params.years; ++y) {
                    const int year = params.first_year + static_cast<int>(y);
                    const long long headcount =
                        c.staff.entries().at(StaffKey{uni, sds, year});
                    const double rate =
                        static_cast<double>(headcount) * params.pubs_per_staff_mean * d.productivity;
                    auto rng = stream(params.seed, "pubs/" + uni + "/" + sds + "/" + std::to_string(year));
                    const long long n_pubs =
                        rate > 0.0 ? std::poisson_distribution<long long>(rate)(rng) : 0;
                    std::uniform_real_distribution<double> unit(0.0, 1.0);
                    auto pick = [&](std::size_t n) {
                        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
                    };
                    for (long long i = 0; i < n_pubs; ++i) {
                        Publication pub;
                        pub.id = code("P", ++next_pub, 7);
                        pub.year = year;
                        pub.journal = jlist[pick(jlist.size())];
                        pub.orgs.push_back(uni);
                        pub.attributions.push_back(Attribution{uni, sds});
                        if (n_uni > 1 && unit(rng) < prop.other_university) {
                            std::size_t other = pick(n_uni - 1);
                            if (other >= k) ++other;
                            pub.orgs.push_back(university_code(other));
                            if (unit(rng) < params.co_attribution) {
                                pub.attributions.push_back(Attribution{university_code(other), sds});
                            }
                        }
                        if (!dprs.empty() && unit(rng) < prop.dpr) pub.orgs.push_back(dprs[pick(dprs.size())]);
                        if (!enterprises.empty() && unit(rng) < prop.enterprise) {
                            pub.orgs.push_back(enterprises[pick(enterprises.size())]);
                        }
                        if (!foreigns.empty() && unit(rng) < prop.foreign) {
                            pub.orgs.push_back(foreigns[pick(foreigns.size())]);
                        }
                        if (sectors[a].size() > 1 && unit(rng) < params.cross_sector) {
                            std::size_t second = pick(sectors[a].size() - 1);
                            if (second >= s) ++second;
                            pub.attributions.push_back(Attribution{uni, sectors[a][second]});
                        }
                        c.publications.push_back(std::move(pub));
                    }
                }
            }
        }
    }

    // Ground truth.
    for (std::size_t a = 0; a < params.n_areas; ++a) {
        const std::string area = area_code(a);
        const Propensities& p = area_propensities(params, area);
        result.truth.planted_shares[area] = {{"CI", extramural_probability(p)},
                                             {"CI_UNI", p.other_university},
                                             {"CI_DPR", p.dpr},
                                             {"FCI", p.foreign},
                                             {"DCI", p.enterprise}};
        for (std::size_t k = 0; k < n_uni; ++k) {
            const std::string uni = university_code(k);
            double staff = 0.0;
            for (const auto& sds : sectors[a]) staff += c.staff.period_average(uni, sds, c.period);
            if (staff < 5.0) result.truth.below_staff_threshold.emplace_back(uni, area);
        }
    }
    return result;
}

std::string ground_truth_to_json(const GroundTruth& truth) {
    ordered_json j;
    ordered_json shares = ordered_json::object();
    for (const auto& [area, m] : truth.planted_shares) {
        ordered_json entry = ordered_json::object();
        for (const auto& [metric, v] : m) entry[metric] = v;
        shares[area] = entry;
    }
    j["planted_shares"] = shares;
    ordered_json corr = ordered_json::array();
    for (const auto& t : truth.planted_correlations) {
        corr.push_back(ordered_json{{"area", t.association.area},
                                    {"x", std::string(to_string(t.association.x))},
                                    {"y", std::string(to_string(t.association.y))},
                                    {"r", t.association.r},
                                    {"latent_r", t.latent_r},
                                    {"achieved_latent_r", t.achieved_latent_r},
                                    {"reliability_x", t.reliability_x},
                                    {"reliability_y", t.reliability_y}});
        ordered_json drivers = ordered_json::array();
        for (std::size_t k = 0; k < t.driver_x.size(); ++k) {
            drivers.push_back(ordered_json{{"university", university_code(k)},
                                           {"x", t.driver_x[k]},
                                           {"y", t.driver_y[k]}});
        }
        corr.back()["drivers"] = drivers;
    }
    j["planted_correlations"] = corr;
    ordered_json below = ordered_json::array();
    for (const auto& [u, a] : truth.below_staff_threshold) {
        below.push_back(ordered_json{{"university", u}, {"area", a}});
    }
    j["below_staff_threshold"] = below;
    return j.dump(2) + "\n";
}

void write_synthetic(const SynthResult& result, const std::filesystem::path& dir) {
    write_corpus(result.corpus, dir);
    write_file(dir / "ground_truth.json", ground_truth_to_json(result.truth));
}

}  // namespace unicollab::synth
