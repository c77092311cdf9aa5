#include "vextrace/sampled_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace vextrace {

namespace {

std::size_t grid_size(const std::vector<std::vector<double>>& axes) {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

SampledField::SampledField(std::vector<std::vector<double>> axes,
                           std::vector<double> values, std::vector<double> weights)
    : axes_(std::move(axes)), values_(std::move(values)), weights_(std::move(weights)) {
  if (axes_.empty()) throw std::invalid_argument("SampledField: needs at least one axis");
  for (const auto& a : axes_) {
    if (a.empty()) throw std::invalid_argument("SampledField: empty axis");
    for (std::size_t i = 1; i < a.size(); ++i)
      if (!(a[i] > a[i - 1]))
        throw std::invalid_argument("SampledField: axes must be strictly increasing");
  }
  const std::size_t n = grid_size(axes_);
  if (values_.size() != n || weights_.size() != n)
    throw std::invalid_argument("SampledField: values/weights size mismatch with grid");
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("SampledField: weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("SampledField: total measure must be positive");
}

SampledField SampledField::midpoint(const std::vector<double>& lo,
                                    const std::vector<double>& hi,
                                    const std::vector<int>& counts,
                                    const std::function<double(std::span<const double>)>& fn) {
  const int d = static_cast<int>(lo.size());
  if (static_cast<int>(hi.size()) != d || static_cast<int>(counts.size()) != d)
    throw std::invalid_argument("SampledField::midpoint: dimension mismatch");
  std::vector<std::vector<double>> axes(d);
  double cell = 1.0;
  for (int k = 0; k < d; ++k) {
    if (counts[k] < 1 || !(hi[k] > lo[k]))
      throw std::invalid_argument("SampledField::midpoint: bad box");
    const double h = (hi[k] - lo[k]) / counts[k];
    cell *= h;
    axes[k].resize(counts[k]);
    for (int i = 0; i < counts[k]; ++i) axes[k][i] = lo[k] + (i + 0.5) * h;
  }
  const std::size_t n = grid_size(axes);
  std::vector<double> values(n), weights(n, cell);
  std::vector<double> pt(d);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rem = idx;
    for (int k = d - 1; k >= 0; --k) {
      pt[k] = axes[k][rem % axes[k].size()];
      rem /= axes[k].size();
    }
    values[idx] = fn(pt);
  }
  return SampledField(std::move(axes), std::move(values), std::move(weights));
}

SampledField SampledField::on_grid_of(const SampledField& like,
                                      const std::function<double(std::span<const double>)>& fn) {
  std::vector<double> values(like.size());
  for (std::size_t i = 0; i < like.size(); ++i) {
    const auto pt = like.node(i);
    values[i] = fn(pt);
  }
  return SampledField(like.axes_, std::move(values), like.weights_);
}

double SampledField::total_measure() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double SampledField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool SampledField::same_grid(const SampledField& other) const {
  return axes_ == other.axes_;
}

std::vector<double> SampledField::node(std::size_t flat_index) const {
  std::vector<double> pt(dim());
  std::size_t rem = flat_index;
  for (int k = dim() - 1; k >= 0; --k) {
    pt[k] = axes_[k][rem % axes_[k].size()];
    rem /= axes_[k].size();
  }
  return pt;
}

nlohmann::json SampledField::to_json() const {
  return {{"axes", axes_}, {"values", values_}, {"weights", weights_}};
}

SampledField SampledField::from_json(const nlohmann::json& j) {
  return SampledField(j.at("axes").get<std::vector<std::vector<double>>>(),
                      j.at("values").get<std::vector<double>>(),
                      j.at("weights").get<std::vector<double>>());
}

std::string SampledField::to_csv() const {
  std::ostringstream os;
  for (int k = 0; k < dim(); ++k) os << "x" << k << ",";
  os << "value,weight\n";
  for (std::size_t i = 0; i < size(); ++i) {
    const auto pt = node(i);
    for (double c : pt) os << format_double(c) << ",";
    os << format_double(values_[i]) << "," << format_double(weights_[i]) << "\n";
  }
  return os.str();
}

SampledField SampledField::from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("SampledField: empty CSV");
  int ncols = 1;
  for (char c : line) ncols += (c == ',');
  const int d = ncols - 2;
  if (d < 1) throw std::invalid_argument("SampledField: CSV needs coordinate columns");

  std::vector<std::vector<double>> coords(d);
  std::vector<double> values, weights;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* s = line.c_str();
    char* end = nullptr;
    for (int k = 0; k < ncols; ++k) {
      row.push_back(std::strtod(s, &end));
      if (s == end) throw std::invalid_argument("SampledField: malformed CSV row");
      s = (*end == ',') ? end + 1 : end;
    }
    for (int k = 0; k < d; ++k) coords[k].push_back(row[k]);
    values.push_back(row[d]);
    weights.push_back(row[d + 1]);
  }

  // Recover per-axis node lists from the row-major coordinate columns.
  std::vector<std::vector<double>> axes(d);
  for (int k = 0; k < d; ++k) {
    std::vector<double> uniq = coords[k];
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    axes[k] = std::move(uniq);
  }
  return SampledField(std::move(axes), std::move(values), std::move(weights));
}

}  // namespace vextrace
