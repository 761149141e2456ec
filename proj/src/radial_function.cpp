#include "choquard/radial_function.hpp"

#include <algorithm>
#include <cmath>

#include "choquard/error.hpp"
#include "choquard/specfun.hpp"

namespace choquard {

GridPtr RadialGrid::logarithmic(int N, double r_min, double r_max, int M) {
  if (N < 2) throw DomainError("grid: N must be >= 2");
  if (!(r_min > 0.0 && r_max > r_min)) throw DomainError("grid: need 0 < r_min < r_max");
  if (M < 8) throw DomainError("grid: need at least 8 nodes");
  auto g = std::make_shared<RadialGrid>();
  g->N = N;
  g->r_min = r_min;
  g->r_max = r_max;
  g->h = std::log(r_max / r_min) / (M - 1);
  g->nodes.resize(M);
  g->weights.resize(M);
  for (int i = 0; i < M; ++i) g->nodes[i] = r_min * std::exp(i * g->h);
  g->nodes[M - 1] = r_max;

  // Trapezoid in log r with third-order end corrections; the measure
  // r^{N-1} dr becomes r^N d(log r).
  static const double end[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (int i = 0; i < M; ++i) {
    double c = 1.0;
    if (i < 3) c = end[i];
    if (M - 1 - i < 3) c = end[M - 1 - i];
    g->weights[i] = c * g->h * std::pow(g->nodes[i], N);
  }
  g->weights[0] += std::pow(r_min, N) / N;
  return g;
}

double TailModel::operator()(double r) const { return amplitude * std::pow(r, -exponent); }

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values, TailModel tail,
                               double value_at_origin)
    : grid_(std::move(grid)), values_(std::move(values)), tail_(tail),
      value_at_origin_(value_at_origin) {
  if (!grid_) throw DomainError("RadialFunction: null grid");
  if (static_cast<int>(values_.size()) != grid_->size())
    throw DomainError("RadialFunction: size mismatch with grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw NumericalError("RadialFunction: non-finite value");
  if (!(tail_.exponent >= 0.0) || !std::isfinite(tail_.amplitude))
    throw DomainError("RadialFunction: tail exponent must be >= 0");
  const double last = values_.back();
  const double model = tail_(grid_->r_max);
  if (std::abs(model - last) > 0.01 * std::abs(last) && std::abs(model - last) > 1e-300)
    throw DomainError("RadialFunction: tail does not match values at r_max");
}

RadialFunction RadialFunction::with_tail_exponent(GridPtr grid, std::vector<double> values,
                                                  double exponent) {
  const double A = values.back() * std::pow(grid->r_max, exponent);
  const double origin = values.front();
  return RadialFunction(std::move(grid), std::move(values), TailModel{A, exponent}, origin);
}

RadialFunction RadialFunction::sample(GridPtr grid, const std::function<double(double)>& f,
                                      double tail_exponent) {
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->nodes[i]);
  const double A = v.back() * std::pow(grid->r_max, tail_exponent);
  return RadialFunction(std::move(grid), std::move(v), TailModel{A, tail_exponent}, f(0.0));
}

double RadialFunction::at_index(long j) const {
  const long M = size();
  if (j < 0) return values_.front();
  if (j < M) return values_[j];
  return values_.back() * std::exp(-tail_.exponent * (j - (M - 1)) * grid_->h);
}

double RadialFunction::operator()(double r) const {
  const auto& G = *grid_;
  if (r <= G.r_min) return values_.front();
  if (r >= G.r_max) return values_.back() * std::pow(r / G.r_max, -tail_.exponent);
  const double x = std::log(r / G.r_min) / G.h;
  const long j = static_cast<long>(std::floor(x));
  const double t = x - j;
  if (t == 0.0) return values_[j];
  const double fm = at_index(j - 1), f0 = at_index(j), f1 = at_index(j + 1), f2 = at_index(j + 2);
  return -t * (t - 1) * (t - 2) / 6.0 * fm + (t + 1) * (t - 1) * (t - 2) / 2.0 * f0 -
         (t + 1) * t * (t - 2) / 2.0 * f1 + (t + 1) * t * (t - 1) / 6.0 * f2;
}

double RadialFunction::integral() const {
  const auto& G = *grid_;
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) sum += G.weights[i] * values_[i];
  if (values_.back() != 0.0) {
    if (!(tail_.exponent > G.N))
      throw DomainError("RadialFunction::integral: tail not integrable (exponent <= N)");
    sum += values_.back() * std::pow(G.r_max, G.N) / (tail_.exponent - G.N);
  }
  return specfun::sphere_area(G.N) * sum;
}

RadialFunction RadialFunction::pow(double q) const {
  std::vector<double> v(values_.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = std::pow(std::abs(values_[i]), q);
  return RadialFunction(grid_, std::move(v),
                        TailModel{std::pow(std::abs(tail_.amplitude), q), q * tail_.exponent},
                        std::pow(std::abs(value_at_origin_), q));
}

RadialFunction RadialFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return RadialFunction(grid_, std::move(v), TailModel{c * tail_.amplitude, tail_.exponent},
                        c * value_at_origin_);
}

RadialFunction RadialFunction::times(const RadialFunction& other) const {
  if (other.grid_ != grid_) throw DomainError("RadialFunction::times: grids differ");
  std::vector<double> v(values_.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * other.values_[i];
  return RadialFunction(
      grid_, std::move(v),
      TailModel{tail_.amplitude * other.tail_.amplitude, tail_.exponent + other.tail_.exponent},
      value_at_origin_ * other.value_at_origin_);
}

double RadialFunction::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace choquard
