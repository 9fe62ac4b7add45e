#pragma once

// Minimal CSV reader for the fixture formats: comma-separated, no quoting,
// optional `# key: value` comment lines. Field values are trimmed.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace concentra::csvio {

struct Row {
    std::size_t line_no = 0;
    std::vector<std::string> fields;
};

struct Document {
    std::vector<std::pair<std::string, std::string>> metadata; // from # key: value
    std::vector<std::string> header;
    std::vector<Row> rows;
};

std::string trim(std::string_view s);

// Throws IoError if the file cannot be read, SchemaError if there is no
// header row.
Document read_csv(const std::string& path);

// Strict numeric field parsers; throw ParseError naming row/column.
double parse_double(const std::string& field, std::size_t line_no,
                    const std::string& column);
long long parse_int(const std::string& field, std::size_t line_no,
                    const std::string& column);

} // namespace concentra::csvio
