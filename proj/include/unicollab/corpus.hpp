#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace unicollab {

enum class OrgClass { UnivDomestic, DprDomestic, EnterpriseDomestic, Foreign };

std::string_view to_string(OrgClass c);
std::optional<OrgClass> parse_org_class(std::string_view text);

struct Organization {
    std::string id;
    std::string name;
    OrgClass org_class = OrgClass::UnivDomestic;
    std::string country;
};

struct Journal {
    std::string id;
    std::map<int, double> impact_factor_by_year;

    std::optional<double> impact_factor(int year) const;
};

struct Attribution {
    std::string university;
    std::string sds;

    friend auto operator<=>(const Attribution&, const Attribution&) = default;
};

struct Publication {
    std::string id;
    int year = 0;
    std::string journal;
    std::vector<std::string> orgs;
    std::vector<Attribution> attributions;
};

/// Inclusive range of survey years.
struct Period {
    int first_year = 2001;
    int last_year = 2003;

    int length() const { return last_year - first_year + 1; }
    bool contains(int year) const { return year >= first_year && year <= last_year; }
    bool empty() const { return last_year < first_year; }

    friend bool operator==(const Period&, const Period&) = default;
};

/// Parses "2001-2003" or a single year "2001".
Period parse_period(std::string_view text);
std::string to_string(const Period& period);

struct StaffKey {
    std::string university;
    std::string sds;
    int year = 0;

    friend auto operator<=>(const StaffKey&, const StaffKey&) = default;
};

/// Headcounts per (university, sds, year). A headcount for year y is the
/// staff in post on 31 December of y-1.
class StaffRoster {
public:
    void set(StaffKey key, long long headcount);
    const std::map<StaffKey, long long>& entries() const noexcept { return entries_; }

    /// Mean headcount over the period's years; years without an entry count
    /// as zero staff.
    double period_average(const std::string& university, const std::string& sds,
                          const Period& period) const;

    /// True if any year (inside or outside the period) has an entry.
    bool has_entry(const std::string& university, const std::string& sds) const;

private:
    std::map<StaffKey, long long> entries_;
};

struct SectorMap {
    std::map<std::string, std::string> area_of;  // sds -> area

    const std::string* area(const std::string& sds) const;
    /// Sectors of `area` in code order.
    std::vector<std::string> sectors_in(const std::string& area) const;
    std::vector<std::string> areas() const;
};

struct CorpusConfig {
    std::string home_country = "IT";
    Period period;
};

/// Immutable once built: downstream modules only hold const references.
struct Corpus {
    std::vector<Publication> publications;
    std::map<std::string, Organization> organizations;
    std::map<std::string, Journal> journals;
    StaffRoster staff;
    SectorMap sectors;
    std::string home_country = "IT";
    Period period;

    const Organization* organization(const std::string& id) const;
    const Journal* journal(const std::string& id) const;
};

struct CorpusPaths {
    std::filesystem::path publications;
    std::filesystem::path organizations;
    std::filesystem::path journals;
    std::filesystem::path staff;
    std::filesystem::path sectors;

    /// Standard file names (publications.jsonl, organizations.csv, ...) in `dir`.
    static CorpusPaths in_directory(const std::filesystem::path& dir);
};

enum class Severity { Error, Warning };

struct Issue {
    Severity severity = Severity::Error;
    std::string code;      // stable short tag, e.g. "dangling journal_id"
    std::string location;  // e.g. "publication P000123"
    std::string message;
};

struct ValidationReport {
    std::vector<Issue> issues;

    bool ok() const { return error_count() == 0; }
    std::size_t error_count() const;
    std::size_t warning_count() const;
    std::size_t count(std::string_view code) const;
    std::string to_text() const;
};

/// Raised by load_corpus when the parsed corpus fails validation.
class CorpusError : public std::runtime_error {
public:
    explicit CorpusError(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// Syntax-level load: malformed lines, duplicate ids and unknown
/// organization classes throw InputError. Cross references are not checked.
Corpus parse_corpus(const CorpusPaths& paths, const CorpusConfig& config);

/// Every invariant violation with its location. Empty error list means the
/// corpus is valid; missing roster coverage is reported as a warning.
ValidationReport validate_corpus(const Corpus& corpus);

/// parse_corpus followed by validate_corpus; throws CorpusError on any error.
Corpus load_corpus(const CorpusPaths& paths, const CorpusConfig& config);

/// Writes the five input files in canonical order under their standard names.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

std::string publication_to_json_line(const Publication& pub);

struct CollabProfile {
    bool is_extramural = false;
    bool has_dpr = false;
    bool has_foreign = false;
    bool has_domestic_enterprise = false;
    std::vector<std::string> domestic_universities;

    /// Another UNIV_DOMESTIC organization besides `university` is present.
    bool has_other_domestic_university(std::string_view university) const;
};

CollabProfile classify_collaboration(const Corpus& corpus, const Publication& pub);

}  // namespace unicollab
