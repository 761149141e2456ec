#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choquard/radial_function.hpp"
#include "choquard/solver.hpp"

namespace choquard {

enum class DecayRegime { choquard_dominated, laplacian_dominated, boundary };

std::string to_string(DecayRegime r);

struct DecayPrediction {
  double beta = 0.0;
  DecayRegime regime = DecayRegime::choquard_dominated;
  double r_star = 0.0;
  std::optional<double> sharp_constant;
};

/// r* = (N + alpha + 4s)/(N + 2s).
double threshold_r_star(int N, double s, double alpha);

/// beta = min{(N-alpha)/(2-r), N+2s}; requires (N+alpha)/N <= r < 2.
DecayPrediction predict_decay(const ProblemParams& params);
/// Same, with the sharp constant of the solution when r < r*.
DecayPrediction predict_decay(const Solution& sol);

struct DecayFit {
  double window_lo = 0.0;
  double window_hi = 0.0;
  double fitted_exponent = 0.0;
  double fitted_amplitude = 0.0;
  double rms_log_residual = 0.0;
  int points = 0;
  bool log_model = false;  // u ~ A log(r) r^-omega
};

/// Least squares of log u = log A - omega log r over the nodes in [lo, hi].
/// With `allow_log`, the model A log(r) r^-omega is also fitted and kept
/// when its rms residual is smaller.
DecayFit fit_tail(const RadialFunction& u, double lo, double hi, bool allow_log = false);

/// Default window [r_max/20, r_max/10].
DecayFit fit_tail(const RadialFunction& u);

/// lim u(x)|x|^beta predicted from the solution's own norm. Throws
/// DomainError when r >= r*.
double sharp_constant(const Solution& sol);
/// (C_{N,alpha} k_f k_F ||u||_r^r / mu)^{1/(2-r)}, homogeneous kind.
double sharp_constant_homogeneous(const Solution& sol);
/// (C_{N,alpha} lim f(t)/t^{r-1} int F(u) / mu)^{1/(2-r)}.
double sharp_constant_general(const Solution& sol);

struct BoundConstants {
  double C_upper = 0.0;  // C_{u,kappa}
  double C_lower = 0.0;  // C'_u
  double C_sharp = 0.0;  // NaN when r >= r*
  double kappa = 1.0;
  std::optional<double> kappa_star;  // when C_bar == C_under
};

/// C_{u,kappa} = (2-r)(C kappa |int F|)^{1/(2-r)} / (mu - (r-1)(C_bar/kappa)^{1/(r-1)}).
double upper_constant(double C_na, double r, double mu, double C_bar, double mass_F,
                      double kappa);
/// C'_u = (C_under C int F / mu)^{1/(2-r)}.
double lower_constant(double C_na, double r, double mu, double C_under, double mass_F);
/// kappa* = C_bar / mu^{r-1}, where C_{u,kappa} attains C'_u when C_bar = C_under.
double kappa_star(double r, double mu, double C_bar);

/// Without kappa the raw constant is used, which needs mu > (r-1) C_bar^{1/(r-1)}.
BoundConstants bound_constants(const Solution& sol, std::optional<double> kappa = std::nullopt);

struct ChainRuleReport {
  std::vector<double> radii, lhs, rhs, margin, scale;
  double min_relative_margin = 0.0;
  bool pass = true;
};

/// (-Delta)^s u^theta >= theta u^{theta-1} (-Delta)^s u at each radius, with
/// pass = margin >= -tol * (|lhs| + |rhs| + tiny).
ChainRuleReport verify_chain_rule(const RadialFunction& u, double theta,
                                  const std::vector<double>& radii, double s, double tol = 1e-6);

struct RieszTailReport {
  std::vector<double> radii, D, normalized;
  double sup_D = 0.0;
  double normalized_at_hi = 0.0;  // (I*g)(hi) hi^{N-alpha} / C_{N,alpha} / int g
  bool non_increasing_tail = true;  // over the outer half of the window
};

/// D(r) = |(I*g)(r) - I_alpha(r) int g| / [I_alpha(r)(1/(1+r) + 1/(1+r^{theta-N}))].
RieszTailReport verify_riesz_tail(const RadialFunction& g, double alpha, double theta, double lo,
                                  double hi);
/// With g = F(u) of the solution.
RieszTailReport verify_riesz_tail(const Solution& sol, double theta, double lo, double hi);

}  // namespace choquard
