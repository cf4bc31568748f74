#include "semidisp/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace semidisp {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv row width mismatch");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << str();
}

namespace {
std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}
}  // namespace

std::string render_plot(const FitResult& fit, const PlotLabels& labels) {
  if (fit.x.size() < 4) throw std::invalid_argument("plot needs at least 4 points");
  const double W = 640, H = 480, left = 70, right = 20, top = 40, bottom = 60;
  double x0 = *std::min_element(fit.x.begin(), fit.x.end());
  double x1 = *std::max_element(fit.x.begin(), fit.x.end());
  double y0 = *std::min_element(fit.y.begin(), fit.y.end());
  double y1 = *std::max_element(fit.y.begin(), fit.y.end());
  if (x1 - x0 < 1e-9) x1 = x0 + 1;
  const double xm = 0.5 * (x0 + x1);
  const double ym_data = [&] {
    double s = 0;
    for (double v : fit.y) s += v;
    return s / fit.y.size();
  }();
  const double xmean = [&] {
    double s = 0;
    for (double v : fit.x) s += v;
    return s / fit.x.size();
  }();
  const bool has_ref = std::isfinite(fit.reference);
  auto ref_at = [&](double x) { return ym_data + fit.reference * (x - xmean); };
  auto fit_at = [&](double x) { return fit.intercept + fit.slope * x; };
  for (double x : {x0, x1}) {
    y0 = std::min(y0, fit_at(x));
    y1 = std::max(y1, fit_at(x));
    if (has_ref) {
      y0 = std::min(y0, ref_at(x));
      y1 = std::max(y1, ref_at(x));
    }
  }
  if (y1 - y0 < 1e-9) y1 = y0 + 1;
  const double pad_y = 0.08 * (y1 - y0);
  y0 -= pad_y;
  y1 += pad_y;
  (void)xm;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  auto sy = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
     << W << ' ' << H << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << escape(labels.title) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << escape(labels.x_label) << " (log2)</text>\n";
  os << "<text x=\"18\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
     << H / 2 << ")\">" << escape(labels.y_label) << " (log2)</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << px(sx(xv)) << "\" y=\"" << H - bottom + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fixed4(xv) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << px(sy(yv) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fixed4(yv) << "</text>\n";
  }
  os << "<line id=\"fit\" x1=\"" << px(sx(x0)) << "\" y1=\"" << px(sy(fit_at(x0))) << "\" x2=\"" << px(sx(x1))
     << "\" y2=\"" << px(sy(fit_at(x1))) << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  if (has_ref)
    os << "<line id=\"reference\" x1=\"" << px(sx(x0)) << "\" y1=\"" << px(sy(ref_at(x0))) << "\" x2=\""
       << px(sx(x1)) << "\" y2=\"" << px(sy(ref_at(x1)))
       << "\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";
  for (std::size_t i = 0; i < fit.x.size(); ++i)
    os << "<circle cx=\"" << px(sx(fit.x[i])) << "\" cy=\"" << px(sy(fit.y[i])) << "\" r=\"4\" fill=\"black\"/>\n";
  const double lx = left + 14, ly = top + 14;
  os << "<text x=\"" << lx << "\" y=\"" << ly << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">fit slope "
     << fixed4(fit.slope) << "</text>\n";
  if (has_ref)
    os << "<text x=\"" << lx << "\" y=\"" << ly + 16
       << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">reference slope " << fixed4(fit.reference)
       << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const FitResult& fit, const std::filesystem::path& path, const PlotLabels& labels) {
  const std::string svg = render_plot(fit, labels);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << svg;
}

}  // namespace semidisp
