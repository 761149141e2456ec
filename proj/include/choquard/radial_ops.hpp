#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "choquard/kernel.hpp"
#include "choquard/radial_function.hpp"

namespace choquard {

/// Table span in log r used by the operators on a given grid.
double default_tau_span(const RadialGrid& grid);

/// Discrete (-Delta)^s on a radial grid.
///
/// Row i reads C_{N,s} r_i^{-2s} int (u(r_i) - u(r_i e^t)) G(t) dt. Values
/// past r_max come from the power tail, so the column of the last node
/// depends on the tail exponent; it is kept separate as `ghost_column`.
class FracLaplacian {
 public:
  FracLaplacian(GridPtr grid, double s);

  const GridPtr& grid() const { return grid_; }
  double s() const { return s_; }
  const ConvolutionStencil& stencil() const { return st_; }

  /// Everything except the right extension.
  const Eigen::MatrixXd& base_matrix() const { return base_; }
  /// Coefficients of u_{M-1} coming from the extension u ~ r^-omega.
  Eigen::VectorXd ghost_column(double omega) const;
  Eigen::MatrixXd matrix(double omega) const;

  std::vector<double> apply_nodes(const RadialFunction& u) const;
  /// (-Delta)^s u on the grid; tail exponent min(omega + 2s, N + 2s).
  RadialFunction apply(const RadialFunction& u) const;
  /// Off-grid evaluation by resampling u along r e^{m h}.
  double apply_at(const RadialFunction& u, double at) const;

 private:
  GridPtr grid_;
  double s_;
  double cns_;
  ConvolutionStencil st_;
  Eigen::MatrixXd base_;
  Eigen::MatrixXd ghost_;  // M x m_hi, by distance past the last node
  std::vector<double> pref_;
};

/// Discrete Riesz potential I_alpha * g on a radial grid.
class RieszOperator {
 public:
  RieszOperator(GridPtr grid, double alpha);

  const GridPtr& grid() const { return grid_; }
  double alpha() const { return alpha_; }

  const Eigen::MatrixXd& base_matrix() const { return base_; }
  Eigen::VectorXd ghost_column(double omega) const;

  std::vector<double> apply_nodes(const RadialFunction& g) const;
  /// I_alpha * g with tail exponent N - alpha (or omega - alpha for slowly
  /// decaying g).
  RadialFunction apply(const RadialFunction& g) const;
  double apply_at(const RadialFunction& g, double at) const;

 private:
  GridPtr grid_;
  double alpha_;
  double cna_;
  ConvolutionStencil st_;
  Eigen::MatrixXd base_;
  Eigen::MatrixXd ghost_;
  std::vector<double> pref_;
};

/// ((-Delta)^s + mu)^{-1} on a grid, factored once; the tail exponent of the
/// solution enters through a rank-one update.
class Resolvent {
 public:
  Resolvent(std::shared_ptr<const FracLaplacian> op, double mu);

  double mu() const { return mu_; }
  const FracLaplacian& op() const { return *op_; }

  /// Solution with the tail exponent `omega`.
  std::vector<double> solve(const std::vector<double>& rhs, double omega) const;
  /// Tail exponent min(omega_rhs, N + 2s).
  RadialFunction solve(const RadialFunction& rhs) const;

  /// ||(L + mu) w - rhs|| / ||rhs|| in the max norm.
  double relative_residual(const std::vector<double>& w, const std::vector<double>& rhs,
                           double omega) const;

 private:
  std::shared_ptr<const FracLaplacian> op_;
  double mu_;
  double omega_ref_;
  Eigen::VectorXd ghost_ref_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Cached operators, keyed by grid identity and order.
std::shared_ptr<const FracLaplacian> frac_laplacian_operator(const GridPtr& grid, double s);
std::shared_ptr<const RieszOperator> riesz_operator(const GridPtr& grid, double alpha);

double frac_laplacian_radial(const RadialFunction& u, double s, double at);
RadialFunction riesz_convolve_radial(const RadialFunction& g, double alpha);
RadialFunction apply_inverse_operator(const RadialFunction& rhs, double s, double mu);

struct ComparisonResult {
  std::vector<double> residual;
  std::vector<double> ratio;  // residual / (lambda sigma h_theta); NaN if undefined
  bool ratio_defined = true;
};

/// g(r) = (gamma/lambda) (-Delta)^s h_beta + sigma (-Delta)^s h_theta + lambda sigma h_theta,
/// from the closed forms. Throws DomainError on a theta not admissible for beta.
ComparisonResult comparison_residual(int N, double s, double beta, double theta, double gamma,
                                     double lambda, double sigma,
                                     const std::vector<double>& radii);

}  // namespace choquard
