#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace choquard {

/// Log-uniform radial grid r_i = r_min e^{i h}, with quadrature weights for
/// the measure r^{N-1} dr on [0, r_max].
struct RadialGrid {
  int N = 3;
  double r_min = 0.0;
  double r_max = 0.0;
  double h = 0.0;  // step in log r
  std::vector<double> nodes;
  std::vector<double> weights;

  static std::shared_ptr<const RadialGrid> logarithmic(int N, double r_min, double r_max, int M);

  int size() const { return static_cast<int>(nodes.size()); }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// u(r) ~ amplitude * r^-exponent beyond r_max.
struct TailModel {
  double amplitude = 0.0;
  double exponent = 0.0;

  double operator()(double r) const;
};

/// Samples of a radial function on a grid, extended by a constant below
/// r_min and by a power-law tail above r_max.
class RadialFunction {
 public:
  RadialFunction(GridPtr grid, std::vector<double> values, TailModel tail, double value_at_origin);

  /// Tail with the given exponent and amplitude matched at r_max.
  static RadialFunction with_tail_exponent(GridPtr grid, std::vector<double> values, double exponent);

  /// Samples f on the grid; value_at_origin = f(0).
  static RadialFunction sample(GridPtr grid, const std::function<double(double)>& f,
                               double tail_exponent);

  const GridPtr& grid() const { return grid_; }
  const RadialGrid& g() const { return *grid_; }
  const std::vector<double>& values() const { return values_; }
  const TailModel& tail() const { return tail_; }
  double value_at_origin() const { return value_at_origin_; }
  int size() const { return static_cast<int>(values_.size()); }

  /// Value at node index j for any integer j, using the extensions outside.
  double at_index(long j) const;

  /// Cubic interpolation in log r inside the grid, extensions outside.
  double operator()(double r) const;

  /// Integral over R^N (radial measure times sphere area), tail included.
  double integral() const;

  /// |u|^q with tail (A^q, q omega).
  RadialFunction pow(double q) const;
  RadialFunction scaled(double c) const;

  /// Nodewise product; tail exponents add.
  RadialFunction times(const RadialFunction& other) const;

  double sup_abs() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  TailModel tail_;
  double value_at_origin_ = 0.0;
};

}  // namespace choquard
