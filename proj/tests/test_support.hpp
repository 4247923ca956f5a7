#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "unicollab/corpus.hpp"
#include "unicollab/csv.hpp"

namespace testing {

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("unicollab_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Registry with universities UA, UB, UC, one public research body, one
/// enterprise and one foreign lab; sectors S1, S2 (area A1) and S3 (area A2);
/// journal J1 with IF 1.0 and J2 with IF 2.0 in every year of 2001-2003.
inline unicollab::Corpus base_corpus() {
    using namespace unicollab;
    Corpus c;
    c.home_country = "IT";
    c.period = Period{2001, 2003};
    for (const char* u : {"UA", "UB", "UC"}) {
        c.organizations[u] = Organization{u, std::string("University ") + u, OrgClass::UnivDomestic, "IT"};
    }
    c.organizations["DPR1"] = Organization{"DPR1", "Institute", OrgClass::DprDomestic, "IT"};
    c.organizations["ENT1"] = Organization{"ENT1", "Enterprise", OrgClass::EnterpriseDomestic, "IT"};
    c.organizations["FOR1"] = Organization{"FOR1", "Foreign lab", OrgClass::Foreign, "DE"};
    for (auto [id, impact] : {std::pair{"J1", 1.0}, std::pair{"J2", 2.0}, std::pair{"J3", 3.0}}) {
        Journal j;
        j.id = id;
        for (int y = 2001; y <= 2003; ++y) j.impact_factor_by_year[y] = impact;
        c.journals[id] = j;
    }
    c.sectors.area_of = {{"S1", "A1"}, {"S2", "A1"}, {"S3", "A2"}};
    return c;
}

inline unicollab::Publication pub(std::string id, std::string journal, std::vector<std::string> orgs,
                                  std::vector<unicollab::Attribution> attributions, int year = 2002) {
    return unicollab::Publication{std::move(id), year, std::move(journal), std::move(orgs),
                                  std::move(attributions)};
}

inline void set_staff(unicollab::Corpus& c, const std::string& u, const std::string& sds,
                      long long headcount) {
    for (int y = c.period.first_year; y <= c.period.last_year; ++y) {
        c.staff.set(unicollab::StaffKey{u, sds, y}, headcount);
    }
}

}  // namespace testing
