#pragma once

#include <string>
#include <vector>

namespace relaylab {

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

// RFC-4180 field quoting: wraps in quotes when the field holds a comma,
// quote, or newline, doubling any embedded quotes.
std::string csv_field(const std::string& field);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string to_string() const;
};

// Creates the directory (and parents) if missing.
void ensure_dir(const std::string& path);

// Writes via a temporary sibling then renames, so readers never see a
// half-written file. Throws IoError with the path on any failure.
void write_file_atomic(const std::string& path, const std::string& content);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal self-contained SVG line chart; presentation only.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series, bool log_x);

}  // namespace relaylab
