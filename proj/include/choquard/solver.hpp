#pragma once

#include <functional>
#include <string>
#include <vector>

#include "choquard/radial_function.hpp"

namespace choquard {

/// f and F of the nonlinearity (I_alpha * F(u)) f(u).
///
/// Homogeneous kind: F(t) = k_F t^r, f(t) = k_f t^{r-1} with
///   power convention:  k_F = 1,        k_f = r        (F' = f)
///   sqrt convention:   k_F = 1/sqrt r, k_f = sqrt r   ((I*u^r) u^{r-2} u exactly)
/// General kind: user callables plus the envelope constants
///   |f(t)| <= C_bar t^{r-1},  f(t) >= C_under t^{r-1}  for 0 < t < delta,
/// and f_limit = lim_{t->0} f(t)/t^{r-1}.
struct NonlinearitySpec {
  enum class Kind { homogeneous, general };
  enum class Convention { power, sqrt_r };

  Kind kind = Kind::homogeneous;
  Convention convention = Convention::power;
  double r = 1.7;

  std::function<double(double)> f_fn;
  std::function<double(double)> F_fn;
  double C_bar = 0.0;
  double C_under = 0.0;
  double delta = 1.0;
  double f_limit = 0.0;

  static NonlinearitySpec homogeneous(double r, Convention c = Convention::power);
  static NonlinearitySpec general(double r, std::function<double(double)> f,
                                  std::function<double(double)> F, double C_bar, double C_under,
                                  double delta, double f_limit);

  double f(double t) const;
  double F(double t) const;
  /// f'(t), homogeneous kind only.
  double df(double t) const;

  double k_f() const;  // homogeneous coefficients
  double k_F() const;
  double upper_envelope() const;  // C_bar (k_f for homogeneous)
  double lower_envelope() const;  // C_under
  double limit_ratio() const;     // lim f(t)/t^{r-1}

  /// F(0) = 0, F' = f on a lattice (1e-8), C_under <= C_bar.
  void validate() const;
};

std::string to_string(NonlinearitySpec::Convention c);
NonlinearitySpec::Convention convention_from_string(const std::string& s);

struct ProblemParams {
  int N = 3;
  double s = 0.5;
  double alpha = 2.0;
  double mu = 1.0;
  NonlinearitySpec nonlinearity;

  /// N >= 2, 0 < s < 1, 0 < alpha < N, mu > 0, and for the homogeneous
  /// case (N+alpha)/N <= r <= (N+alpha)/(N-2s) with r > 1.
  void validate() const;
};

struct GridSpec {
  double r_min = 1e-3;
  double r_max = 1e3;
  int nodes = 1200;
};

struct SolverOpts {
  GridSpec grid;
  std::string init_profile = "h_N+2s";  // or "h_beta"
  int max_iter = 5000;
  double damping = 0.5;
  double tolerance = 1e-10;
};

struct Solution {
  Solution(RadialFunction u_, ProblemParams params_)
      : u(std::move(u_)), params(std::move(params_)) {}

  RadialFunction u;
  ProblemParams params;
  double residual_sup = 0.0;  // sup |residual| / ||u||_inf
  double pohozaev_defect = 0.0;
  int iterations = 0;
  double norm_r = 0.0;  // ||u||_r
  double mass_F = 0.0;  // int F(u)
  double multiplier = 0.0;  // fixed-point multiplier of the normalised map
  std::vector<double> trace;  // sup-norm change per iteration
};

/// Positive radial solution by damped, normalised resolvent iteration.
/// Throws ConvergenceError, or NumericalError on collapse / loss of positivity.
Solution solve_ground_state(const ProblemParams& params, const SolverOpts& opts);

/// Same equation solved by Newton's method on the unnormalised problem,
/// started from `initial` with the tail exponent held fixed.
RadialFunction solve_newton(const ProblemParams& params, const RadialFunction& initial,
                            int max_iter = 50, double tolerance = 1e-10);

/// (-Delta)^s u + mu u - (I_alpha * F(u)) f(u) on the grid.
RadialFunction residual(const RadialFunction& u, const ProblemParams& params);
RadialFunction residual(const Solution& sol);

struct PohozaevReport {
  double I_val = 0.0;
  double P_val = 0.0;
  double relative_defect = 0.0;
  double quadratic = 0.0;  // int u (-Delta)^s u
  double mass2 = 0.0;      // int u^2
  double choquard = 0.0;   // int (I_alpha * F(u)) F(u)
  double scale = 0.0;      // sum of |terms| of P
};

PohozaevReport pohozaev_check(const RadialFunction& u, const ProblemParams& params);
PohozaevReport pohozaev_check(const Solution& sol);

/// I(u(./t)) for the dilated function, resampled on the same grid.
double energy_dilated(const RadialFunction& u, const ProblemParams& params, double t);

/// Central difference of t -> I(u(./t)) at t = 1 with step dt.
double dilation_derivative(const RadialFunction& u, const ProblemParams& params,
                           double dt = 0.01);

/// F(u) and f(u) as radial functions; tail exponents r omega and (r-1) omega.
RadialFunction nonlinearity_F(const RadialFunction& u, const NonlinearitySpec& nl);
RadialFunction nonlinearity_f(const RadialFunction& u, const NonlinearitySpec& nl);

/// Tail exponent of the solution implied by the tail of the right-hand side,
/// min{(N - alpha)/(2 - r), N + 2s} for r < 2.
double tail_fixed_point(const ProblemParams& params);

}  // namespace choquard
