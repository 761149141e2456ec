#pragma once

// Spherical reduction of the kernels |x - y|^p:
//
//     k_p(r, rho) = \int_{S^{N-1}} |r e_1 - rho w|^p dsigma(w)
//
// and its log-radial form G(tau) = e^{N tau} k_p(1, e^tau), in which both the
// fractional Laplacian and the Riesz potential of a radial function become
// one-dimensional convolutions in tau = log r.

#include <vector>

#include "choquard/radial_function.hpp"

namespace choquard {

/// k_p(r, rho). Throws DomainError when r == rho and the integral diverges
/// (p <= 1 - N).
double angular_kernel(double r, double rho, double p, int N);

/// k_p(1, e^{-a}) for a >= 0, accurate as a -> 0 and a -> infinity.
double unit_kernel(double a, double p, int N);

class LogKernel {
 public:
  LogKernel(int N, double p);

  /// G(tau) = e^{N tau} k_p(1, e^tau).
  double operator()(double tau) const;

  /// G(tau) + (-1)^k G(-tau) for tau > 0, without cancellation.
  double paired(double tau, int k) const;

  int N() const { return N_; }
  double p() const { return p_; }

 private:
  int N_;
  double p_;
};

/// Kernel values on grid node pairs, k_p(r_i, r_j) for i != j.
struct KernelCache {
  int N = 3;
  double p = 0.0;
  GridPtr grid;
  std::vector<double> unit;  // k_p(1, e^{-m h}), m = 0 .. M-1
  bool singular_diagonal = false;

  static KernelCache build(GridPtr grid, double p);

  /// Symmetric by construction; throws on a singular diagonal entry.
  double value(int i, int j) const;
};

/// Weights of the log-radial convolution on a grid of log step h.
///
/// For a function sampled at r e^{m h}, m in [m_lo, m_hi], with constant
/// extension to the left of the table and a power tail to the right:
///
///   difference form:  int (u(r) - u(r e^t)) G(t) dt
///                     = c0 u(r) - sum_m w_m u(r e^{m h}) - far terms
///   plain form:       int u(r e^t) G(t) dt = sum_m w_m u(r e^{m h}) + far terms
struct ConvolutionStencil {
  bool difference = true;
  int N = 3;
  double p = 0.0;
  double h = 0.0;
  int m_lo = 0;
  int m_hi = 0;
  std::vector<double> w;
  double c0 = 0.0;
  double tau_left = 0.0;
  double tau_right = 0.0;
  double left_far = 0.0;  // int_{-inf}^{-tau_left} G
  double right_rate = 0.0;  // G ~ |S^{N-1}| e^{right_rate t} as t -> inf

  double weight(int m) const { return w[m - m_lo]; }

  /// int_{tau_right}^inf e^{-omega t} G(t) dt.
  double right_far(double omega) const;

  static ConvolutionStencil build(int N, double p, double h, double tau_span, bool difference);
};

}  // namespace choquard
