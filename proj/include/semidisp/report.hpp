#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "semidisp/fit.hpp"

namespace semidisp {

// Shortest round-trip text for a double; used for every CSV and report number.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;  // header row, commas, LF endings
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

std::string render_plot(const FitResult& fit, const PlotLabels& labels);
void emit_plot(const FitResult& fit, const std::filesystem::path& path, const PlotLabels& labels);

}  // namespace semidisp
