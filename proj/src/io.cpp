#include "relaylab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "relaylab/errors.hpp"

namespace relaylab {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string CsvTable::to_string() const {
  std::string out;
  auto emit_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += csv_field(row[i]);
    }
    out.push_back('\n');
  };
  emit_row(header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw IoError("csv row width disagrees with the header");
    emit_row(row);
  }
  return out;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory '" + path + "': " + ec.message());
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot move '" + tmp + "' into place: " + ec.message());
  }
}

namespace {

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series, bool log_x) {
  constexpr double kW = 900, kH = 540;
  constexpr double kLeft = 80, kRight = 720, kTop = 50, kBottom = 480;

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = 0.0;
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (double v : s.x) {
      const double u = log_x ? std::log10(v) : v;
      x_lo = std::min(x_lo, u);
      x_hi = std::max(x_hi, u);
    }
    for (double v : s.y) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
  y_hi += 0.05 * (y_hi - y_lo);

  auto px = [&](double x) {
    const double u = log_x ? std::log10(x) : x;
    return kLeft + (u - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
  };
  auto py = [&](double y) {
    return kBottom - (y - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
  };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
  constexpr int kPaletteSize = 8;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kW << " "
      << kH << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"28\" font-size=\"18\" "
      << "text-anchor=\"middle\">" << xml_escape(title) << "</text>\n";

  // frame + ticks
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kRight - kLeft << "\" height=\"" << kBottom - kTop
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fu = x_lo + (x_hi - x_lo) * i / 4.0;
    const double xv = log_x ? std::pow(10.0, fu) : fu;
    const double X = kLeft + (kRight - kLeft) * i / 4.0;
    svg << "<line x1=\"" << X << "\" y1=\"" << kBottom << "\" x2=\"" << X
        << "\" y2=\"" << kBottom + 6 << "\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << X << "\" y=\"" << kBottom + 22
        << "\" font-size=\"12\" text-anchor=\"middle\">" << tick_label(xv)
        << "</text>\n";
    const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
    const double Y = py(yv);
    svg << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << Y << "\" x2=\"" << kLeft
        << "\" y2=\"" << Y << "\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << kLeft - 10 << "\" y=\"" << Y + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << tick_label(yv)
        << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 45
      << "\" font-size=\"14\" text-anchor=\"middle\">" << xml_escape(x_label)
      << "</text>\n";
  svg << "<text x=\"24\" y=\"" << (kTop + kBottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 24 "
      << (kTop + kBottom) / 2 << ")\">" << xml_escape(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPaletteSize];
    const auto& sr = series[s];
    // Cap each polyline at ~1000 points; charts are presentation only.
    const std::size_t stride = std::max<std::size_t>(1, sr.x.size() / 1000);
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    char pt[48];
    for (std::size_t i = 0; i < sr.x.size(); i += stride) {
      std::snprintf(pt, sizeof(pt), "%.2f,%.2f ", px(sr.x[i]), py(sr.y[i]));
      svg << pt;
    }
    if (!sr.x.empty() && (sr.x.size() - 1) % stride != 0) {
      std::snprintf(pt, sizeof(pt), "%.2f,%.2f", px(sr.x.back()), py(sr.y.back()));
      svg << pt;
    }
    svg << "\"/>\n";
    const double ly = kTop + 18.0 * static_cast<double>(s);
    svg << "<line x1=\"" << kRight + 12 << "\" y1=\"" << ly + 8 << "\" x2=\""
        << kRight + 36 << "\" y2=\"" << ly + 8 << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kRight + 42 << "\" y=\"" << ly + 12
        << "\" font-size=\"12\">" << xml_escape(sr.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace relaylab
