#include "sketchlab/csv.hpp"

#include "sketchlab/error.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>

namespace sketchlab::csv {

std::string format(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format(Index value) { return std::to_string(value); }

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        auto cell = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
        cells.emplace_back(cell);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw FormatError("not a number: '" + std::string(text) + "'");
    return value;
}

long long parse_integer(std::string_view text) {
    long long value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw FormatError("not an integer: '" + std::string(text) + "'");
    return value;
}

bool is_numeric_row(std::string_view line) {
    for (const auto& cell : split_line(line)) {
        try {
            parse_double(cell);
        } catch (const FormatError&) {
            return false;
        }
    }
    return true;
}

bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return true;
    }
    return false;
}

void write_vector(std::ostream& out, const Vector& v) {
    out << "value\n";
    for (Index i = 0; i < v.size(); ++i) out << format(v(i)) << '\n';
}

Vector read_vector(std::istream& in) {
    std::vector<double> values;
    std::string line;
    bool first = true;
    std::optional<std::size_t> column;
    while (next_line(in, line)) {
        if (first && !is_numeric_row(line)) {
            first = false;
            const auto header = split_line(line);
            const auto it = std::find(header.begin(), header.end(), "value");
            if (it != header.end()) column = static_cast<std::size_t>(it - header.begin());
            continue;
        }
        first = false;
        const auto cells = split_line(line);
        if (column) {
            if (*column >= cells.size()) throw FormatError("vector CSV row lacks the value column");
            values.push_back(parse_double(cells[*column]));
        } else {
            for (const auto& cell : cells) values.push_back(parse_double(cell));
        }
    }
    if (values.empty()) throw FormatError("vector CSV has no values");
    return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace sketchlab::csv
