#include "choquard/kernel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "choquard/error.hpp"
#include "choquard/specfun.hpp"

namespace choquard {

namespace {

using boost::math::quadrature::gauss;
constexpr double kPi = specfun::kPi;

// k_p(1, t) in R^3 for t = e^{-a} in (0, 1]:
//   2 pi / (t q) [(1+t)^q - (1-t)^q],  q = p + 2,
// written so that neither t -> 0 nor t -> 1 cancels.
double unit_kernel_3d(double a, double p) {
  const double q = p + 2.0;
  const double t = std::exp(-a);
  const double d = -std::expm1(-a);
  if (a == 0.0) {
    if (q > 0.0) return 2.0 * kPi / q * std::pow(2.0, q);
    throw DomainError("angular_kernel: singular at r == rho");
  }
  const double log_d = t < 0.5 ? std::log1p(-t) : std::log(d);
  const double L = std::log1p(t) - log_d;  // log((1+t)/(1-t))
  if (std::abs(q) < 1e-14) return 2.0 * kPi / t * L;
  return 2.0 * kPi / (t * q) * std::exp(q * log_d) * std::expm1(q * L);
}

// Polar-angle quadrature for general N, on subintervals that double in
// length away from the peak of width ~ |1-t| / sqrt(t).
double unit_kernel_general(double a, double p, int N) {
  const double t = std::exp(-a);
  const double d = -std::expm1(-a);
  if (a == 0.0 && p <= 1.0 - N) throw DomainError("angular_kernel: singular at r == rho");
  auto f = [&](double phi) {
    const double sh = std::sin(0.5 * phi);
    const double base = d * d + 4.0 * t * sh * sh;
    double w = std::pow(base, 0.5 * p);
    if (N > 2) w *= std::pow(std::sin(phi), N - 2);
    return w;
  };
  double phi_c = std::max(d / std::sqrt(t), kPi * std::ldexp(1.0, -50));
  double sum = 0.0;
  double lo = 0.0;
  double hi = std::min(phi_c, kPi);
  while (true) {
    sum += gauss<double, 20>::integrate(f, lo, hi);
    if (hi >= kPi) break;
    lo = hi;
    hi = std::min(2.0 * hi, kPi);
  }
  return specfun::sphere_area(N - 1) * sum;
}

}  // namespace

double unit_kernel(double a, double p, int N) {
  if (!(a >= 0.0)) throw DomainError("unit_kernel: a must be >= 0");
  if (N < 2) throw DomainError("unit_kernel: N must be >= 2");
  if (std::isinf(a)) return specfun::sphere_area(N);
  return N == 3 ? unit_kernel_3d(a, p) : unit_kernel_general(a, p, N);
}

double angular_kernel(double r, double rho, double p, int N) {
  if (!(r >= 0.0 && rho >= 0.0)) throw DomainError("angular_kernel: radii must be >= 0");
  const double R = std::max(r, rho);
  const double m = std::min(r, rho);
  if (R == 0.0) throw DomainError("angular_kernel: both radii zero");
  if (m == 0.0) return specfun::sphere_area(N) * std::pow(R, p);
  return std::pow(R, p) * unit_kernel(std::log(R / m), p, N);
}

LogKernel::LogKernel(int N, double p) : N_(N), p_(p) {
  if (N < 2) throw DomainError("LogKernel: N must be >= 2");
}

double LogKernel::operator()(double tau) const {
  const double K = unit_kernel(std::abs(tau), p_, N_);
  return tau <= 0.0 ? std::exp(N_ * tau) * K : std::exp((N_ + p_) * tau) * K;
}

double LogKernel::paired(double tau, int k) const {
  // G(-tau) = e^{-(2N+p) tau} G(tau)
  const double g = (*this)(tau);
  const double e = -(2.0 * N_ + p_) * tau;
  return (k % 2 == 0) ? g * (1.0 + std::exp(e)) : -g * std::expm1(e);
}

KernelCache KernelCache::build(GridPtr grid, double p) {
  KernelCache c;
  c.N = grid->N;
  c.p = p;
  c.grid = grid;
  c.singular_diagonal = p <= 1.0 - grid->N;
  const int M = grid->size();
  c.unit.resize(M);
  c.unit[0] = c.singular_diagonal ? std::numeric_limits<double>::infinity()
                                  : unit_kernel(0.0, p, c.N);
  for (int m = 1; m < M; ++m) c.unit[m] = unit_kernel(m * grid->h, p, c.N);
  return c;
}

double KernelCache::value(int i, int j) const {
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  if (lo == hi && singular_diagonal) throw DomainError("KernelCache: singular diagonal entry");
  return std::pow(grid->nodes[hi], p) * unit[hi - lo];
}

double ConvolutionStencil::right_far(double omega) const {
  if (!(omega > right_rate))
    throw DomainError("convolution tail diverges: decay exponent too small");
  return specfun::sphere_area(N) * std::exp((right_rate - omega) * tau_right) /
         (omega - right_rate);
}

namespace {

// int_0^W tau^k [G(tau) + (-1)^k G(-tau)] dtau, integrable at 0 by pairing.
double window_moment(const LogKernel& G, double W, int k) {
  auto f = [&](double t) { return std::pow(t, k) * G.paired(t, k); };
  double sum = 0.0;
  double hi = W;
  for (int j = 0; j < 40; ++j) {
    const double lo = 0.5 * hi;
    sum += gauss<double, 20>::integrate(f, lo, hi);
    hi = lo;
  }
  // f ~ c t^q on [0, hi]
  const double f1 = f(hi);
  const double f2 = f(0.5 * hi);
  const double q = std::log2(f1 / f2);
  if (std::isfinite(q) && q > -1.0) sum += hi * f1 / (q + 1.0);
  return sum;
}

}  // namespace

ConvolutionStencil ConvolutionStencil::build(int N, double p, double h, double tau_span,
                                             bool difference) {
  if (!(h > 0.0)) throw DomainError("stencil: h must be > 0");
  ConvolutionStencil st;
  st.difference = difference;
  st.N = N;
  st.p = p;
  st.h = h;
  const int nR = static_cast<int>(std::ceil(tau_span / h));
  st.tau_left = st.tau_right = nR * h;
  st.m_lo = -nR - 1;
  st.m_hi = nR + 1;
  st.w.assign(st.m_hi - st.m_lo + 1, 0.0);
  st.right_rate = N + p;
  const LogKernel G(N, p);
  const double area = specfun::sphere_area(N);

  // Window |tau| <= 3h: degree-6 interpolant through offsets -3..3 in x = tau/h.
  constexpr int kW = 3;
  Eigen::Matrix<double, 7, 7> V;
  for (int m = -kW; m <= kW; ++m)
    for (int k = 0; k <= 6; ++k) V(m + kW, k) = std::pow(double(m), k);
  const Eigen::Matrix<double, 7, 7> Vinv = V.inverse();
  const int k_first = difference ? 1 : 0;
  for (int k = k_first; k <= 6; ++k) {
    const double Mk = window_moment(G, kW * h, k) / std::pow(h, k);
    for (int m = -kW; m <= kW; ++m) st.w[m - st.m_lo] += Vinv(k, m + kW) * Mk;
  }

  // Outer cells [m h, (m+1) h]: cubic product integration on nodes m-1..m+2.
  static const auto& xs = gauss<double, 16>::abscissa();
  static const auto& ws = gauss<double, 16>::weights();
  std::vector<double> gx, gw;
  for (size_t i = 0; i < xs.size(); ++i) {
    // abscissae on [-1,1] are stored for the non-negative half
    gx.push_back(0.5 * (1.0 + xs[i]));
    gw.push_back(0.5 * ws[i]);
    if (xs[i] != 0.0) {
      gx.push_back(0.5 * (1.0 - xs[i]));
      gw.push_back(0.5 * ws[i]);
    }
  }
  double cell_total = 0.0;
  auto add_cell = [&](int m) {
    double l[4] = {0, 0, 0, 0};
    for (size_t g = 0; g < gx.size(); ++g) {
      const double x = gx[g];
      const double val = gw[g] * h * G((m + x) * h);
      l[0] += -x * (x - 1) * (x - 2) / 6.0 * val;
      l[1] += (x + 1) * (x - 1) * (x - 2) / 2.0 * val;
      l[2] += -(x + 1) * x * (x - 2) / 2.0 * val;
      l[3] += (x + 1) * x * (x - 1) / 6.0 * val;
    }
    for (int q = 0; q < 4; ++q) {
      st.w[m - 1 + q - st.m_lo] += l[q];
      cell_total += l[q];
    }
  };
  for (int m = kW; m < nR; ++m) add_cell(m);
  for (int m = -nR; m < -kW; ++m) add_cell(m);

  st.left_far = area * std::exp(-N * st.tau_left) / N;
  if (difference) st.c0 = cell_total + st.left_far + st.right_far(0.0);
  return st;
}

}  // namespace choquard
