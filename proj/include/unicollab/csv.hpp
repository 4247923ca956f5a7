#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace unicollab {

/// Malformed or inconsistent input. Carries the source location so callers
/// can report "file:line: field: message".
class InputError : public std::runtime_error {
public:
    InputError(std::string file, std::size_t line, std::string field, const std::string& message);

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string file_;
    std::size_t line_;
    std::string field_;
};

struct CsvRow {
    std::size_t line = 0;  // 1-based physical line where the record starts
    std::vector<std::string> fields;
};

/// A parsed CSV file. The header row is mandatory.
class CsvTable {
public:
    CsvTable(std::string source, std::vector<std::string> header, std::vector<CsvRow> rows);

    const std::string& source() const noexcept { return source_; }
    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<CsvRow>& rows() const noexcept { return rows_; }

    /// Index of a named column; throws InputError (line 1) if absent.
    std::size_t column(std::string_view name) const;
    std::optional<std::size_t> find_column(std::string_view name) const;

private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<CsvRow> rows_;
};

CsvTable parse_csv(std::string_view text, std::string source);
CsvTable read_csv(const std::filesystem::path& path);

/// Requires the header to start with exactly `expected` (extra trailing
/// columns are rejected too).
void require_header(const CsvTable& table, const std::vector<std::string>& expected);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void write_row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

std::string quote_csv_field(std::string_view field);

// Number formatting. All output goes through these so that emitted files are
// locale-independent and byte-reproducible.
std::string format_shortest(double value);
std::string format_fixed(double value, int precision);
std::string format_optional_shortest(const std::optional<double>& value);

double parse_double(std::string_view text, const std::string& file, std::size_t line,
                    const std::string& field);
long long parse_integer(std::string_view text, const std::string& file, std::size_t line,
                        const std::string& field);
std::optional<double> parse_optional_double(std::string_view text, const std::string& file,
                                            std::size_t line, const std::string& field);

std::string read_file(const std::filesystem::path& path);
/// Writes `content` to `path`, throwing std::runtime_error if the file
/// cannot be opened or written.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace unicollab
