#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "semidisp/domain.hpp"

namespace semidisp {

template <typename Scalar>
struct LineFit {
  Scalar slope;
  Scalar intercept;
  Scalar residual;  // max |y - fit|
};

template <typename Scalar>
LineFit<Scalar> fit_line(const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Mat A(n, 2);
  Vec b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = x[i];
    A(i, 1) = Scalar(1);
    b(i) = y[i];
  }
  const Eigen::Matrix<Scalar, 2, 1> c = A.colPivHouseholderQr().solve(b);
  const Scalar res = (A * c - b).cwiseAbs().maxCoeff();
  return {c(0), c(1), res};
}

struct FitResult {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();  // log2 units
  std::vector<double> x;  // log2 scan value
  std::vector<double> y;  // log2 ratio
  double reference = std::numeric_limits<double>::quiet_NaN();  // predicted slope
  double tolerance = 0.15;
  bool pass = false;
  bool poor_fit = false;  // residual above 0.5 log2 units
};

// log2-log2 least squares over >= 4 positive points
FitResult loglog_fit(const std::vector<double>& values, const std::vector<double>& ratios);

}  // namespace semidisp
