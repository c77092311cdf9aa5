#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vextrace/common.hpp"

namespace vextrace {

/// Scalar field sampled on a rectangular grid together with a cell measure
/// weight per node (volume or boundary surface measure). Axes are strictly
/// increasing node coordinates; values and weights are stored row-major with
/// the last axis fastest.
class SampledField {
 public:
  SampledField() = default;
  SampledField(std::vector<std::vector<double>> axes, std::vector<double> values,
               std::vector<double> weights);

  /// Midpoint grid on the box [lo_d, hi_d] with counts[d] cells per axis;
  /// weights are the cell volumes, values from fn(node).
  static SampledField midpoint(const std::vector<double>& lo, const std::vector<double>& hi,
                               const std::vector<int>& counts,
                               const std::function<double(std::span<const double>)>& fn);

  /// Same grid as `like`, values from fn.
  static SampledField on_grid_of(const SampledField& like,
                                 const std::function<double(std::span<const double>)>& fn);

  int dim() const { return static_cast<int>(axes_.size()); }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::vector<double>>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& mutable_values() { return values_; }

  double total_measure() const;
  double max_abs() const;
  bool same_grid(const SampledField& other) const;
  std::vector<double> node(std::size_t flat_index) const;

  nlohmann::json to_json() const;
  static SampledField from_json(const nlohmann::json& j);
  std::string to_csv() const;
  static SampledField from_csv(const std::string& text);

 private:
  std::vector<std::vector<double>> axes_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

}  // namespace vextrace
