#include "unicollab/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace unicollab {

namespace {

std::string describe(const std::string& file, std::size_t line, const std::string& field,
                     const std::string& message) {
    std::string out = file;
    if (line > 0) out += ":" + std::to_string(line);
    if (!field.empty()) out += ": field '" + field + "'";
    out += ": " + message;
    return out;
}

}  // namespace

InputError::InputError(std::string file, std::size_t line, std::string field,
                       const std::string& message)
    : std::runtime_error(describe(file, line, field, message)),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

CsvTable::CsvTable(std::string source, std::vector<std::string> header, std::vector<CsvRow> rows)
    : source_(std::move(source)), header_(std::move(header)), rows_(std::move(rows)) {}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
    if (auto idx = find_column(name)) return *idx;
    throw InputError(source_, 1, std::string(name), "missing column in header");
}

CsvTable parse_csv(std::string_view text, std::string source) {
    // Strip a UTF-8 byte order mark.
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<CsvRow> records;
    CsvRow current;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool row_has_content = false;
    std::size_t line = 1;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        if (row_has_content || !current.fields.empty()) {
            end_field();
            records.push_back(std::move(current));
        }
        current = CsvRow{};
        current.line = line;
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty() || field_was_quoted) {
                    throw InputError(source, line, "", "unexpected quote inside unquoted field");
                }
                in_quotes = true;
                field_was_quoted = true;
                row_has_content = true;
                break;
            case ',':
                end_field();
                row_has_content = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                if (field_was_quoted) {
                    throw InputError(source, line, "", "characters after closing quote");
                }
                field.push_back(c);
                row_has_content = true;
        }
    }
    if (in_quotes) throw InputError(source, current.line, "", "unterminated quoted field");
    end_record();

    if (records.empty()) throw InputError(source, 1, "", "missing header row");
    std::vector<std::string> header = std::move(records.front().fields);
    records.erase(records.begin());
    for (const auto& row : records) {
        if (row.fields.size() != header.size()) {
            throw InputError(source, row.line, "",
                             "expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(row.fields.size()));
        }
    }
    return CsvTable(std::move(source), std::move(header), std::move(records));
}

CsvTable read_csv(const std::filesystem::path& path) {
    return parse_csv(read_file(path), path.filename().string());
}

void require_header(const CsvTable& table, const std::vector<std::string>& expected) {
    if (table.header() != expected) {
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        throw InputError(table.source(), 1, "", "header must be '" + want + "'");
    }
}

std::string quote_csv_field(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << quote_csv_field(fields[i]);
    }
    out_ << '\n';
}

std::string format_shortest(double value) {
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

std::string format_fixed(double value, int precision) {
    char buf[128];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, precision);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    std::string out(buf, ptr);
    // "-0.00" would make byte output depend on the sign of a rounded zero.
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

std::string format_optional_shortest(const std::optional<double>& value) {
    return value ? format_shortest(*value) : std::string();
}

double parse_double(std::string_view text, const std::string& file, std::size_t line,
                    const std::string& field) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
        throw InputError(file, line, field, "not a number: '" + std::string(text) + "'");
    }
    return value;
}

long long parse_integer(std::string_view text, const std::string& file, std::size_t line,
                        const std::string& field) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw InputError(file, line, field, "not an integer: '" + std::string(text) + "'");
    }
    return value;
}

std::optional<double> parse_optional_double(std::string_view text, const std::string& file,
                                            std::size_t line, const std::string& field) {
    if (text.empty()) return std::nullopt;
    return parse_double(text, file, line, field);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path.string(), 0, "", "cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace unicollab
