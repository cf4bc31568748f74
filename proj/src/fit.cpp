#include "semidisp/fit.hpp"

namespace semidisp {

FitResult loglog_fit(const std::vector<double>& values, const std::vector<double>& ratios) {
  if (values.size() != ratios.size()) throw ValidationError("fit", "mismatched sample counts");
  if (values.size() < 4) throw ValidationError("fit", "at least 4 points are required");
  FitResult f;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0) || !(ratios[i] > 0) || !std::isfinite(ratios[i]))
      throw ValidationError("fit", "values and ratios must be positive and finite");
    f.x.push_back(std::log2(values[i]));
    f.y.push_back(std::log2(ratios[i]));
  }
  const auto line = fit_line(f.x, f.y);
  f.slope = line.slope;
  f.intercept = line.intercept;
  f.residual = line.residual;
  f.poor_fit = f.residual > 0.5;
  return f;
}

}  // namespace semidisp
