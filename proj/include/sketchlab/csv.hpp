#pragma once

#include "sketchlab/core.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sketchlab::csv {

/// Shortest-free, locale-independent rendering with 17 significant digits.
std::string format(double value);
std::string format(Index value);
inline std::string format(int value) { return format(static_cast<Index>(value)); }
inline std::string format(std::string_view text) { return std::string(text); }
inline std::string format(const char* text) { return std::string(text); }
inline std::string format(const std::string& text) { return text; }

/// Writes cells joined by ',' and terminated by '\n'.
void write_row(std::ostream& out, const std::vector<std::string>& cells);

template <class... Cells>
void row(std::ostream& out, const Cells&... cells) {
    write_row(out, {format(cells)...});
}

std::vector<std::string> split_line(std::string_view line);

/// Locale-independent parse; throws FormatError on trailing garbage.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

/// True when every cell of the line parses as a number.
bool is_numeric_row(std::string_view line);

/// Reads the next non-empty line, stripping a trailing '\r'. False at EOF.
bool next_line(std::istream& in, std::string& line);

/// Vectors as one value per row under a single "value" header.
void write_vector(std::ostream& out, const Vector& v);
Vector read_vector(std::istream& in);

}  // namespace sketchlab::csv
