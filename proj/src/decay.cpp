#include "choquard/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "choquard/error.hpp"
#include "choquard/radial_ops.hpp"
#include "choquard/specfun.hpp"

namespace choquard {

namespace {

constexpr double kEdge = 1e-12;

void check_sublinear(int N, double alpha, double r) {
  const double lo = (N + alpha) / N;
  if (r < lo - kEdge || r >= 2.0)
    throw DomainError("decay: r must lie in [(N+alpha)/N, 2)");
}

}  // namespace

std::string to_string(DecayRegime r) {
  switch (r) {
    case DecayRegime::choquard_dominated:
      return "choquard_dominated";
    case DecayRegime::laplacian_dominated:
      return "laplacian_dominated";
    case DecayRegime::boundary:
      return "boundary";
  }
  return "unknown";
}

double threshold_r_star(int N, double s, double alpha) {
  return (N + alpha + 4.0 * s) / (N + 2.0 * s);
}

DecayPrediction predict_decay(const ProblemParams& p) {
  const double r = p.nonlinearity.r;
  check_sublinear(p.N, p.alpha, r);
  DecayPrediction out;
  out.r_star = threshold_r_star(p.N, p.s, p.alpha);
  const double top = p.N + 2.0 * p.s;
  if (std::abs(r - out.r_star) <= kEdge) {
    out.regime = DecayRegime::boundary;
    out.beta = top;
  } else if (r > out.r_star) {
    out.regime = DecayRegime::laplacian_dominated;
    out.beta = top;
  } else {
    out.regime = DecayRegime::choquard_dominated;
    out.beta = std::abs(r - (p.N + p.alpha) / p.N) <= kEdge
                   ? static_cast<double>(p.N)
                   : std::min((p.N - p.alpha) / (2.0 - r), top);
  }
  return out;
}

DecayPrediction predict_decay(const Solution& sol) {
  DecayPrediction out = predict_decay(sol.params);
  if (out.regime == DecayRegime::choquard_dominated) out.sharp_constant = sharp_constant(sol);
  return out;
}

DecayFit fit_tail(const RadialFunction& u, double lo, double hi, bool allow_log) {
  const auto& G = u.g();
  if (!(lo > 0.0 && hi > lo)) throw DomainError("fit_tail: need 0 < lo < hi");
  if (hi > G.r_max / 10.0 * (1.0 + 1e-12))
    throw DomainError("fit_tail: window must end at or below r_max/10");
  std::vector<double> x, y;
  for (int i = 0; i < u.size(); ++i) {
    const double r = G.nodes[i];
    if (r < lo || r > hi) continue;
    const double v = u.values()[i];
    if (!(v > 0.0)) throw DomainError("fit_tail: non-positive value in the window");
    x.push_back(std::log(r));
    y.push_back(std::log(v));
  }
  const int n = static_cast<int>(x.size());
  if (n < 20) throw DomainError("fit_tail: window holds fewer than 20 nodes");

  // Straight-line least squares in (log r, log u - shift).
  auto fit = [&](const std::vector<double>& yy, double* slope, double* icept) {
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
      mx += x[i];
      my += yy[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (yy[i] - my);
    }
    *slope = sxy / sxx;
    *icept = my - *slope * mx;
    double ss = 0;
    for (int i = 0; i < n; ++i) {
      const double e = yy[i] - (*icept + *slope * x[i]);
      ss += e * e;
    }
    return std::sqrt(ss / n);
  };

  DecayFit out;
  out.window_lo = lo;
  out.window_hi = hi;
  out.points = n;
  double slope, icept;
  out.rms_log_residual = fit(y, &slope, &icept);
  out.fitted_exponent = -slope;
  out.fitted_amplitude = std::exp(icept);

  if (allow_log && lo > 1.0) {
    std::vector<double> y2(n);
    for (int i = 0; i < n; ++i) y2[i] = y[i] - std::log(x[i]);
    double s2, c2;
    const double rms2 = fit(y2, &s2, &c2);
    if (rms2 < out.rms_log_residual) {
      out.rms_log_residual = rms2;
      out.fitted_exponent = -s2;
      out.fitted_amplitude = std::exp(c2);
      out.log_model = true;
    }
  }
  return out;
}

DecayFit fit_tail(const RadialFunction& u) {
  const double rmax = u.g().r_max;
  return fit_tail(u, rmax / 20.0, rmax / 10.0);
}

double sharp_constant_homogeneous(const Solution& sol) {
  const auto& p = sol.params;
  const auto& nl = p.nonlinearity;
  if (nl.kind != NonlinearitySpec::Kind::homogeneous)
    throw DomainError("sharp_constant: homogeneous nonlinearity required");
  const double r = nl.r;
  const double C = specfun::riesz_constant(p.N, p.alpha);
  return std::pow(C * nl.k_f() * nl.k_F() * std::pow(sol.norm_r, r) / p.mu, 1.0 / (2.0 - r));
}

double sharp_constant_general(const Solution& sol) {
  const auto& p = sol.params;
  const double r = p.nonlinearity.r;
  const double C = specfun::riesz_constant(p.N, p.alpha);
  return std::pow(C * p.nonlinearity.limit_ratio() * sol.mass_F / p.mu, 1.0 / (2.0 - r));
}

double sharp_constant(const Solution& sol) {
  const auto pred = predict_decay(sol.params);
  if (pred.regime != DecayRegime::choquard_dominated)
    throw DomainError("sharp_constant: only defined for r < r* (regime " +
                      to_string(pred.regime) + ")");
  return sol.params.nonlinearity.kind == NonlinearitySpec::Kind::homogeneous
             ? sharp_constant_homogeneous(sol)
             : sharp_constant_general(sol);
}

double upper_constant(double C_na, double r, double mu, double C_bar, double mass_F,
                      double kappa) {
  if (!(kappa > 0.0)) throw DomainError("upper_constant: kappa must be > 0");
  const double den = mu - (r - 1.0) * std::pow(C_bar / kappa, 1.0 / (r - 1.0));
  if (!(den > 0.0))
    throw HypothesisError("upper_constant: need mu > (r-1)(C_bar/kappa)^{1/(r-1)}");
  return (2.0 - r) * std::pow(C_na * kappa * std::abs(mass_F), 1.0 / (2.0 - r)) / den;
}

double lower_constant(double C_na, double r, double mu, double C_under, double mass_F) {
  return std::pow(C_under * C_na * mass_F / mu, 1.0 / (2.0 - r));
}

double kappa_star(double r, double mu, double C_bar) { return C_bar / std::pow(mu, r - 1.0); }

BoundConstants bound_constants(const Solution& sol, std::optional<double> kappa) {
  const auto& p = sol.params;
  const auto& nl = p.nonlinearity;
  const double r = nl.r;
  check_sublinear(p.N, p.alpha, r);
  const double C = specfun::riesz_constant(p.N, p.alpha);
  const double Cb = nl.upper_envelope();
  const double Cu = nl.lower_envelope();

  BoundConstants out;
  if (Cb == Cu) out.kappa_star = kappa_star(r, p.mu, Cb);
  out.kappa = kappa.value_or(1.0);
  out.C_upper = upper_constant(C, r, p.mu, Cb, sol.mass_F, out.kappa);
  out.C_lower = lower_constant(C, r, p.mu, Cu, sol.mass_F);
  const auto pred = predict_decay(p);
  out.C_sharp = pred.regime == DecayRegime::choquard_dominated
                    ? sharp_constant(sol)
                    : std::numeric_limits<double>::quiet_NaN();
  return out;
}

ChainRuleReport verify_chain_rule(const RadialFunction& u, double theta,
                                  const std::vector<double>& radii, double s, double tol) {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("chain rule: theta must lie in (0,1)");
  for (double v : u.values())
    if (!(v > 0.0)) throw DomainError("chain rule: u must be strictly positive");
  const auto L = frac_laplacian_operator(u.grid(), s);
  const RadialFunction ut = u.pow(theta);
  ChainRuleReport rep;
  rep.min_relative_margin = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    const double lhs = L->apply_at(ut, r);
    const double rhs = theta * std::pow(u(r), theta - 1.0) * L->apply_at(u, r);
    const double margin = lhs - rhs;
    const double scale = std::abs(lhs) + std::abs(rhs) + std::numeric_limits<double>::min();
    rep.radii.push_back(r);
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.margin.push_back(margin);
    rep.scale.push_back(scale);
    rep.min_relative_margin = std::min(rep.min_relative_margin, margin / scale);
    if (margin < -tol * scale) rep.pass = false;
  }
  return rep;
}

RieszTailReport verify_riesz_tail(const RadialFunction& g, double alpha, double theta, double lo,
                                  double hi) {
  const int N = g.g().N;
  if (!(theta > N && theta <= N + alpha + 1e-12))
    throw DomainError("riesz tail: theta must lie in (N, N+alpha]");
  if (!(lo > 0.0 && hi > lo)) throw DomainError("riesz tail: need 0 < lo < hi");
  const auto R = riesz_operator(g.grid(), alpha);
  const double C = specfun::riesz_constant(N, alpha);
  const double mass = g.integral();
  const std::vector<double> conv = R->apply_nodes(g);
  const auto& G = g.g();

  RieszTailReport rep;
  for (int i = 0; i < g.size(); ++i) {
    const double r = G.nodes[i];
    if (r < lo || r > hi) continue;
    const double I = C * std::pow(r, alpha - N);
    const double bound = I * (1.0 / (1.0 + r) + 1.0 / (1.0 + std::pow(r, theta - N)));
    const double D = std::abs(conv[i] - I * mass) / bound;
    rep.radii.push_back(r);
    rep.D.push_back(D);
    rep.normalized.push_back(conv[i] * std::pow(r, N - alpha) / C);
    rep.sup_D = std::max(rep.sup_D, D);
  }
  rep.normalized_at_hi = R->apply_at(g, hi) * std::pow(hi, N - alpha) / C;
  const size_t n = rep.D.size();
  for (size_t k = n / 2 + 1; k < n; ++k)
    if (rep.D[k] > rep.D[k - 1] * (1.0 + 1e-9)) rep.non_increasing_tail = false;
  return rep;
}

RieszTailReport verify_riesz_tail(const Solution& sol, double theta, double lo, double hi) {
  return verify_riesz_tail(nonlinearity_F(sol.u, sol.params.nonlinearity), sol.params.alpha,
                           theta, lo, hi);
}

}  // namespace choquard
