#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracasym/errors.hpp"

namespace fracasym {

/// Samples of a real function on the uniform grid τ_j = j·T/N, j = 0..N.
///
/// The left endpoint is always 0. Values are immutable once constructed and
/// must all be finite.
class GridFunction {
 public:
  GridFunction(double t_end, std::size_t n_steps, std::vector<double> values)
      : t_end_(t_end), n_steps_(n_steps), values_(std::move(values)) {
    if (!(t_end_ > 0.0) || !std::isfinite(t_end_)) {
      throw domain_error("GridFunction: t_end must be positive and finite");
    }
    if (n_steps_ < 1) {
      throw domain_error("GridFunction: n_steps must be at least 1");
    }
    if (values_.size() != n_steps_ + 1) {
      throw domain_error("GridFunction: expected n_steps + 1 values");
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (!std::isfinite(values_[j])) {
        throw domain_error("GridFunction: non-finite value at node " + std::to_string(j));
      }
    }
  }

  template <typename F>
  static GridFunction sample(F&& f, double t_end, std::size_t n_steps) {
    std::vector<double> v(n_steps + 1);
    const double h = t_end / static_cast<double>(n_steps);
    for (std::size_t j = 0; j <= n_steps; ++j) {
      v[j] = f(static_cast<double>(j) * h);
    }
    return GridFunction(t_end, n_steps, std::move(v));
  }

  static GridFunction constant(double c, double t_end, std::size_t n_steps) {
    return GridFunction(t_end, n_steps, std::vector<double>(n_steps + 1, c));
  }

  double t_end() const noexcept { return t_end_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t size() const noexcept { return values_.size(); }
  double step() const noexcept { return t_end_ / static_cast<double>(n_steps_); }
  double node(std::size_t j) const noexcept { return static_cast<double>(j) * step(); }

  double operator[](std::size_t j) const noexcept { return values_[j]; }
  std::span<const double> values() const noexcept { return values_; }
  double back() const noexcept { return values_.back(); }

  bool same_grid(const GridFunction& other) const noexcept {
    return n_steps_ == other.n_steps_ && t_end_ == other.t_end_;
  }

  /// Piecewise-linear interpolant; τ is clamped to [0, T].
  double at(double tau) const noexcept {
    const double h = step();
    const double s = std::clamp(tau, 0.0, t_end_) / h;
    const auto j = std::min(static_cast<std::size_t>(s), n_steps_ - 1);
    const double w = s - static_cast<double>(j);
    return (1.0 - w) * values_[j] + w * values_[j + 1];
  }

  GridFunction map(const std::function<double(double, double)>& f) const {
    std::vector<double> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(node(j), values_[j]);
    return GridFunction(t_end_, n_steps_, std::move(v));
  }

 private:
  double t_end_;
  std::size_t n_steps_;
  std::vector<double> values_;
};

/// a·f + b·g on a shared grid.
inline GridFunction linear_combination(double a, const GridFunction& f, double b,
                                       const GridFunction& g) {
  if (!f.same_grid(g)) throw domain_error("linear_combination: grids differ");
  std::vector<double> v(f.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a * f[j] + b * g[j];
  return GridFunction(f.t_end(), f.n_steps(), std::move(v));
}

inline double max_abs_difference(const GridFunction& f, const GridFunction& g) {
  if (!f.same_grid(g)) throw domain_error("max_abs_difference: grids differ");
  double m = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f[j] - g[j]));
  return m;
}

/// Order of a fractional operator, restricted to (0, 1].
class FractionalOrder {
 public:
  explicit FractionalOrder(double value) : value_(value) {
    if (!(value > 0.0 && value <= 1.0)) {
      throw domain_error("FractionalOrder: value must lie in (0, 1]");
    }
  }
  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

}  // namespace fracasym
