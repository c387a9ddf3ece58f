#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tvb {

/// Count-valued time series X_0..X_T on the rescaled time grid t/T.
struct CountSeries {
  Eigen::VectorXi values;           // nonnegative counts, X_0..X_T
  std::vector<std::string> labels;  // optional per-row labels (e.g. dates)

  CountSeries() = default;

  explicit CountSeries(Eigen::VectorXi v, std::vector<std::string> row_labels = {})
      : values(std::move(v)), labels(std::move(row_labels)) {
    if (values.size() == 0) throw std::invalid_argument("count series is empty");
    if ((values.array() < 0).any()) throw std::invalid_argument("count series has a negative entry");
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != values.size())
      throw std::invalid_argument("label count does not match series length");
  }

  Eigen::Index length() const { return values.size(); }

  /// T, the index of the last observation.
  Eigen::Index horizon() const { return values.size() - 1; }

  Eigen::VectorXd as_real() const { return values.cast<double>(); }
};

}  // namespace tvb
