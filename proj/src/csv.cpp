#include "csv.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "concentra/errors.hpp"

namespace concentra::csvio {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        out.push_back(trim(std::string_view(line).substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

} // namespace

Document read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open file: " + path);

    Document doc;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.size() >= 3 && line[0] == '\xEF' &&
            line[1] == '\xBB' && line[2] == '\xBF')
            line.erase(0, 3); // UTF-8 BOM

        const std::string stripped = trim(line);
        if (stripped.empty()) continue;

        if (stripped[0] == '#') {
            // `# key: value` becomes metadata; other comments are ignored.
            const std::string body = trim(std::string_view(stripped).substr(1));
            const std::size_t colon = body.find(':');
            if (colon != std::string::npos) {
                doc.metadata.emplace_back(
                    trim(std::string_view(body).substr(0, colon)),
                    trim(std::string_view(body).substr(colon + 1)));
            }
            continue;
        }

        if (!have_header) {
            doc.header = split_fields(stripped);
            have_header = true;
        } else {
            doc.rows.push_back(Row{line_no, split_fields(stripped)});
        }
    }

    if (!have_header)
        throw SchemaError(path + ": missing header row");
    return doc;
}

double parse_double(const std::string& field, std::size_t line_no,
                    const std::string& column) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        std::ostringstream msg;
        msg << "line " << line_no << ", column " << column
            << ": expected a number, got \"" << field << "\"";
        throw ParseError(msg.str());
    }
    return value;
}

long long parse_int(const std::string& field, std::size_t line_no,
                    const std::string& column) {
    long long value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        std::ostringstream msg;
        msg << "line " << line_no << ", column " << column
            << ": expected an integer, got \"" << field << "\"";
        throw ParseError(msg.str());
    }
    return value;
}

} // namespace concentra::csvio
