#include "unicollab/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "unicollab/csv.hpp"

namespace unicollab {

namespace {

constexpr std::string_view kClassNames[] = {"UNIV_DOMESTIC", "DPR_DOMESTIC",
                                            "ENTERPRISE_DOMESTIC", "FOREIGN"};

const std::vector<std::string> kOrgHeader = {"org_id", "name", "class", "country"};
const std::vector<std::string> kJournalHeader = {"journal_id", "year", "impact_factor"};
const std::vector<std::string> kStaffHeader = {"university", "sds", "year", "headcount"};
const std::vector<std::string> kSectorHeader = {"sds", "area"};

const nlohmann::json& require_field(const nlohmann::json& obj, const char* name,
                                    const std::string& file, std::size_t line) {
    auto it = obj.find(name);
    if (it == obj.end()) throw InputError(file, line, name, "missing");
    return *it;
}

std::string require_string(const nlohmann::json& obj, const char* name, const std::string& file,
                           std::size_t line) {
    const auto& v = require_field(obj, name, file, line);
    if (!v.is_string()) throw InputError(file, line, name, "expected a string");
    return v.get<std::string>();
}

Publication parse_publication(std::string_view text, const std::string& file, std::size_t line) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(file, line, "", std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw InputError(file, line, "", "expected a JSON object");

    Publication pub;
    pub.id = require_string(obj, "id", file, line);
    const auto& year = require_field(obj, "year", file, line);
    if (!year.is_number_integer()) throw InputError(file, line, "year", "expected an integer");
    pub.year = year.get<int>();
    pub.journal = require_string(obj, "journal", file, line);

    const auto& orgs = require_field(obj, "orgs", file, line);
    if (!orgs.is_array()) throw InputError(file, line, "orgs", "expected an array");
    for (const auto& o : orgs) {
        if (!o.is_string()) throw InputError(file, line, "orgs", "expected string elements");
        pub.orgs.push_back(o.get<std::string>());
    }

    const auto& attrs = require_field(obj, "attributions", file, line);
    if (!attrs.is_array()) throw InputError(file, line, "attributions", "expected an array");
    for (const auto& a : attrs) {
        if (!a.is_object()) throw InputError(file, line, "attributions", "expected objects");
        pub.attributions.push_back(Attribution{require_string(a, "university", file, line),
                                               require_string(a, "sds", file, line)});
    }
    return pub;
}

std::vector<Publication> read_publications(const std::filesystem::path& path) {
    const std::string file = path.filename().string();
    const std::string text = read_file(path);
    std::vector<Publication> pubs;
    std::set<std::string> seen;
    std::size_t line = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        ++line;
        std::string_view row(text.data() + pos, end - pos);
        if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
        pos = end + 1;
        if (row.find_first_not_of(" \t") == std::string_view::npos) continue;
        Publication pub = parse_publication(row, file, line);
        if (!seen.insert(pub.id).second) {
            throw InputError(file, line, "id", "duplicate pub_id '" + pub.id + "'");
        }
        pubs.push_back(std::move(pub));
    }
    return pubs;
}

std::map<std::string, Organization> read_organizations(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    require_header(table, kOrgHeader);
    std::map<std::string, Organization> orgs;
    for (const auto& row : table.rows()) {
        const auto& f = row.fields;
        auto cls = parse_org_class(f[2]);
        if (!cls) throw InputError(table.source(), row.line, "class", "unknown class '" + f[2] + "'");
        if (f[0].empty()) throw InputError(table.source(), row.line, "org_id", "empty identifier");
        Organization org{f[0], f[1], *cls, f[3]};
        if (!orgs.emplace(org.id, org).second) {
            throw InputError(table.source(), row.line, "org_id", "duplicate org_id '" + f[0] + "'");
        }
    }
    return orgs;
}

std::map<std::string, Journal> read_journals(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    require_header(table, kJournalHeader);
    std::map<std::string, Journal> journals;
    for (const auto& row : table.rows()) {
        const auto& f = row.fields;
        const int year = static_cast<int>(parse_integer(f[1], table.source(), row.line, "year"));
        const double impact = parse_double(f[2], table.source(), row.line, "impact_factor");
        if (impact < 0.0) {
            throw InputError(table.source(), row.line, "impact_factor", "must be non-negative");
        }
        Journal& j = journals[f[0]];
        j.id = f[0];
        if (!j.impact_factor_by_year.emplace(year, impact).second) {
            throw InputError(table.source(), row.line, "year",
                             "duplicate impact factor for journal '" + f[0] + "'");
        }
    }
    return journals;
}

StaffRoster read_staff(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    require_header(table, kStaffHeader);
    StaffRoster roster;
    for (const auto& row : table.rows()) {
        const auto& f = row.fields;
        const int year = static_cast<int>(parse_integer(f[2], table.source(), row.line, "year"));
        const long long headcount = parse_integer(f[3], table.source(), row.line, "headcount");
        if (headcount < 0) throw InputError(table.source(), row.line, "headcount", "must be >= 0");
        StaffKey key{f[0], f[1], year};
        if (roster.entries().count(key)) {
            throw InputError(table.source(), row.line, "", "duplicate (university, sds, year) row");
        }
        roster.set(std::move(key), headcount);
    }
    return roster;
}

SectorMap read_sectors(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    require_header(table, kSectorHeader);
    SectorMap sectors;
    for (const auto& row : table.rows()) {
        if (!sectors.area_of.emplace(row.fields[0], row.fields[1]).second) {
            throw InputError(table.source(), row.line, "sds", "duplicate sds '" + row.fields[0] + "'");
        }
    }
    return sectors;
}

void add(ValidationReport& report, Severity severity, std::string code, std::string location,
         std::string message) {
    report.issues.push_back(
        Issue{severity, std::move(code), std::move(location), std::move(message)});
}

// Collects references to a missing key so each distinct key is reported once.
struct MissingRefs {
    std::map<std::string, std::pair<std::string, std::size_t>> first_and_count;

    void note(const std::string& key, const std::string& referrer) {
        auto [it, inserted] = first_and_count.try_emplace(key, referrer, 0);
        ++it->second.second;
    }
};

void flush(ValidationReport& report, const MissingRefs& refs, const std::string& code,
           const std::string& what) {
    for (const auto& [key, ref] : refs.first_and_count) {
        add(report, Severity::Error, code, ref.first,
            what + " '" + key + "' is not defined (" + std::to_string(ref.second) +
                " reference(s))");
    }
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::ostringstream out;
    CsvWriter(out).write_row(fields);
    return out.str();
}

}  // namespace

std::string_view to_string(OrgClass c) { return kClassNames[static_cast<int>(c)]; }

std::optional<OrgClass> parse_org_class(std::string_view text) {
    for (int i = 0; i < 4; ++i) {
        if (kClassNames[i] == text) return static_cast<OrgClass>(i);
    }
    return std::nullopt;
}

std::optional<double> Journal::impact_factor(int year) const {
    auto it = impact_factor_by_year.find(year);
    if (it == impact_factor_by_year.end()) return std::nullopt;
    return it->second;
}

Period parse_period(std::string_view text) {
    auto parse_year = [&](std::string_view s) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
            throw std::invalid_argument("invalid period '" + std::string(text) + "'");
        }
        return v;
    };
    Period p;
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) {
        p.first_year = p.last_year = parse_year(text);
    } else {
        p.first_year = parse_year(text.substr(0, dash));
        p.last_year = parse_year(text.substr(dash + 1));
    }
    if (p.empty()) throw std::invalid_argument("empty period '" + std::string(text) + "'");
    return p;
}

std::string to_string(const Period& period) {
    return std::to_string(period.first_year) + "-" + std::to_string(period.last_year);
}

void StaffRoster::set(StaffKey key, long long headcount) { entries_[std::move(key)] = headcount; }

double StaffRoster::period_average(const std::string& university, const std::string& sds,
                                   const Period& period) const {
    if (period.empty()) return 0.0;
    long long total = 0;
    auto it = entries_.lower_bound(StaffKey{university, sds, period.first_year});
    for (; it != entries_.end(); ++it) {
        const StaffKey& k = it->first;
        if (k.university != university || k.sds != sds || k.year > period.last_year) break;
        total += it->second;
    }
    return static_cast<double>(total) / period.length();
}

bool StaffRoster::has_entry(const std::string& university, const std::string& sds) const {
    auto it = entries_.lower_bound(StaffKey{university, sds, std::numeric_limits<int>::min()});
    return it != entries_.end() && it->first.university == university && it->first.sds == sds;
}

const std::string* SectorMap::area(const std::string& sds) const {
    auto it = area_of.find(sds);
    return it == area_of.end() ? nullptr : &it->second;
}

std::vector<std::string> SectorMap::sectors_in(const std::string& area) const {
    std::vector<std::string> out;
    for (const auto& [sds, a] : area_of) {
        if (a == area) out.push_back(sds);
    }
    return out;
}

std::vector<std::string> SectorMap::areas() const {
    std::set<std::string> s;
    for (const auto& [sds, a] : area_of) s.insert(a);
    return {s.begin(), s.end()};
}

const Organization* Corpus::organization(const std::string& id) const {
    auto it = organizations.find(id);
    return it == organizations.end() ? nullptr : &it->second;
}

const Journal* Corpus::journal(const std::string& id) const {
    auto it = journals.find(id);
    return it == journals.end() ? nullptr : &it->second;
}

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
    return CorpusPaths{dir / "publications.jsonl", dir / "organizations.csv", dir / "journals.csv",
                       dir / "staff.csv", dir / "sectors.csv"};
}

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(
        issues.begin(), issues.end(), [](const Issue& i) { return i.severity == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const { return issues.size() - error_count(); }

std::size_t ValidationReport::count(std::string_view code) const {
    return static_cast<std::size_t>(
        std::count_if(issues.begin(), issues.end(), [&](const Issue& i) { return i.code == code; }));
}

std::string ValidationReport::to_text() const {
    std::string out;
    for (const auto& i : issues) {
        out += i.severity == Severity::Error ? "error" : "warning";
        out += ": " + i.code + ": " + i.location + ": " + i.message + "\n";
    }
    return out;
}

CorpusError::CorpusError(ValidationReport report)
    : std::runtime_error("corpus validation failed with " + std::to_string(report.error_count()) +
                         " error(s)\n" + report.to_text()),
      report_(std::move(report)) {}

Corpus parse_corpus(const CorpusPaths& paths, const CorpusConfig& config) {
    Corpus c;
    c.home_country = config.home_country;
    c.period = config.period;
    c.publications = read_publications(paths.publications);
    c.organizations = read_organizations(paths.organizations);
    c.journals = read_journals(paths.journals);
    c.staff = read_staff(paths.staff);
    c.sectors = read_sectors(paths.sectors);
    return c;
}

ValidationReport validate_corpus(const Corpus& corpus) {
    ValidationReport report;

    for (const auto& [id, org] : corpus.organizations) {
        const bool foreign_country = org.country != corpus.home_country;
        if ((org.org_class == OrgClass::Foreign) != foreign_country) {
            add(report, Severity::Error, "foreign class mismatch", "organization " + id,
                "class " + std::string(to_string(org.org_class)) + " with country '" + org.country +
                    "' (home country '" + corpus.home_country + "')");
        }
    }

    MissingRefs missing_orgs, missing_journals, missing_if, missing_sds;
    std::set<std::pair<std::string, std::string>> attributed_cells;
    for (const auto& pub : corpus.publications) {
        const std::string where = "publication " + pub.id;
        if (!corpus.period.contains(pub.year)) {
            add(report, Severity::Error, "year outside period", where,
                "year " + std::to_string(pub.year) + " outside " + to_string(corpus.period));
        }
        if (pub.orgs.empty()) {
            add(report, Severity::Error, "empty organization set", where, "empty organization set");
        }
        if (pub.attributions.empty()) {
            add(report, Severity::Error, "empty attribution list", where, "no attributions");
        }
        std::set<std::string> org_set;
        for (const auto& o : pub.orgs) {
            if (!org_set.insert(o).second) {
                add(report, Severity::Error, "duplicate organization", where,
                    "organization '" + o + "' listed twice");
            }
            if (!corpus.organization(o)) missing_orgs.note(o, where);
        }
        if (const Journal* j = corpus.journal(pub.journal)) {
            if (!j->impact_factor(pub.year)) {
                missing_if.note(pub.journal + "@" + std::to_string(pub.year), where);
            }
        } else {
            missing_journals.note(pub.journal, where);
        }
        std::set<Attribution> attr_set;
        for (const auto& a : pub.attributions) {
            if (!attr_set.insert(a).second) {
                add(report, Severity::Error, "duplicate attribution", where,
                    "(" + a.university + ", " + a.sds + ") listed twice");
            }
            if (!corpus.sectors.area(a.sds)) missing_sds.note(a.sds, where);
            if (!org_set.count(a.university)) {
                add(report, Severity::Error, "attribution outside organizations", where,
                    "attributed university '" + a.university + "' not among orgs");
            } else if (const Organization* org = corpus.organization(a.university);
                       org && org->org_class != OrgClass::UnivDomestic) {
                add(report, Severity::Error, "attribution to non-university", where,
                    "'" + a.university + "' is " + std::string(to_string(org->org_class)));
            }
            attributed_cells.emplace(a.university, a.sds);
        }
    }

    for (const auto& [key, headcount] : corpus.staff.entries()) {
        const std::string where = "staff " + key.university + "/" + key.sds + "/" +
                                  std::to_string(key.year);
        if (!corpus.sectors.area(key.sds)) missing_sds.note(key.sds, where);
        const Organization* org = corpus.organization(key.university);
        if (!org) {
            missing_orgs.note(key.university, where);
        } else if (org->org_class != OrgClass::UnivDomestic) {
            add(report, Severity::Error, "roster for non-university", where,
                "'" + key.university + "' is " + std::string(to_string(org->org_class)));
        }
    }

    flush(report, missing_orgs, "dangling org_id", "organization");
    flush(report, missing_journals, "dangling journal_id", "journal");
    flush(report, missing_if, "missing impact factor", "impact factor for journal@year");
    flush(report, missing_sds, "dangling sds_code", "sector");

    for (const auto& [university, sds] : attributed_cells) {
        if (!corpus.staff.has_entry(university, sds)) {
            add(report, Severity::Warning, "attribution without roster entry",
                "cell " + university + "/" + sds, "no staff entry in any year");
        }
    }
    return report;
}

Corpus load_corpus(const CorpusPaths& paths, const CorpusConfig& config) {
    Corpus c = parse_corpus(paths, config);
    ValidationReport report = validate_corpus(c);
    if (!report.ok()) throw CorpusError(std::move(report));
    return c;
}

std::string publication_to_json_line(const Publication& pub) {
    nlohmann::ordered_json obj;
    obj["id"] = pub.id;
    obj["year"] = pub.year;
    obj["journal"] = pub.journal;
    obj["orgs"] = pub.orgs;
    auto attrs = nlohmann::ordered_json::array();
    for (const auto& a : pub.attributions) {
        nlohmann::ordered_json entry;
        entry["university"] = a.university;
        entry["sds"] = a.sds;
        attrs.push_back(std::move(entry));
    }
    obj["attributions"] = std::move(attrs);
    return obj.dump() + "\n";
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const CorpusPaths paths = CorpusPaths::in_directory(dir);

    std::string pubs;
    for (const auto& p : corpus.publications) pubs += publication_to_json_line(p);
    write_file(paths.publications, pubs);

    std::string orgs = csv_line(kOrgHeader);
    for (const auto& [id, o] : corpus.organizations) {
        orgs += csv_line({o.id, o.name, std::string(to_string(o.org_class)), o.country});
    }
    write_file(paths.organizations, orgs);

    std::string journals = csv_line(kJournalHeader);
    for (const auto& [id, j] : corpus.journals) {
        for (const auto& [year, impact] : j.impact_factor_by_year) {
            journals += csv_line({j.id, std::to_string(year), format_shortest(impact)});
        }
    }
    write_file(paths.journals, journals);

    std::string staff = csv_line(kStaffHeader);
    for (const auto& [k, headcount] : corpus.staff.entries()) {
        staff += csv_line({k.university, k.sds, std::to_string(k.year), std::to_string(headcount)});
    }
    write_file(paths.staff, staff);

    std::string sectors = csv_line(kSectorHeader);
    for (const auto& [sds, area] : corpus.sectors.area_of) sectors += csv_line({sds, area});
    write_file(paths.sectors, sectors);
}

bool CollabProfile::has_other_domestic_university(std::string_view university) const {
    return std::any_of(domestic_universities.begin(), domestic_universities.end(),
                       [&](const std::string& u) { return u != university; });
}

CollabProfile classify_collaboration(const Corpus& corpus, const Publication& pub) {
    CollabProfile profile;
    std::set<std::string_view> distinct(pub.orgs.begin(), pub.orgs.end());
    profile.is_extramural = distinct.size() >= 2;
    for (std::string_view id : distinct) {
        const Organization* org = corpus.organization(std::string(id));
        if (!org) continue;
        switch (org->org_class) {
            case OrgClass::UnivDomestic:
                profile.domestic_universities.emplace_back(id);
                break;
            case OrgClass::DprDomestic:
                profile.has_dpr = true;
                break;
            case OrgClass::EnterpriseDomestic:
                profile.has_domestic_enterprise = true;
                break;
            case OrgClass::Foreign:
                profile.has_foreign = true;
                break;
        }
    }
    return profile;
}

}  // namespace unicollab
