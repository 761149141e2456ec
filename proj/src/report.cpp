#include "choquard/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "choquard/decay.hpp"
#include "choquard/error.hpp"
#include "choquard/radial_ops.hpp"
#include "choquard/specfun.hpp"

namespace choquard {

Table specfun_table(int N, double s, double beta, const std::vector<double>& radii) {
  const specfun::ProfileParams pp{N, s, beta};
  pp.validate();
  const auto law = specfun::frac_lap_h_asymptotic(pp);
  Table t{{"radius", "h_beta", "fraclap_exact", "fraclap_asymptotic", "ratio"}, {}};
  for (double r : radii) {
    const double exact = specfun::frac_lap_h_exact(r, pp);
    const double model = law.model(r);
    t.add_reals({r, specfun::h_beta_eval(r, beta), exact, model, exact / model});
  }
  return t;
}

std::vector<OracleResult> run_oracle(const OracleConfig& oc, const GridSpec& gs) {
  std::vector<OracleResult> out;
  for (const auto& c : oc.cases) {
    const specfun::ProfileParams pp{c.N, c.s, c.beta};
    pp.validate();
    const auto grid = RadialGrid::logarithmic(c.N, gs.r_min, gs.r_max, gs.nodes);
    const auto u = RadialFunction::sample(
        grid, [&](double r) { return specfun::h_beta_eval(r, c.beta); }, c.beta);
    const auto v = frac_laplacian_operator(grid, c.s)->apply_nodes(u);
    OracleResult res;
    res.params = c;
    for (int i = 0; i < grid->size(); ++i) {
      const double r = grid->nodes[i];
      if (r < oc.r_lo || r > oc.r_hi) continue;
      const double exact = specfun::frac_lap_h_exact(r, pp);
      const double err = std::abs(v[i] - exact) / std::abs(exact);
      ++res.points;
      if (!(err <= res.max_rel_error)) {
        res.max_rel_error = err;
        res.worst_radius = r;
      }
    }
    res.pass = res.points > 0 && res.max_rel_error <= oc.tolerance;
    out.push_back(res);
  }
  return out;
}

Table oracle_table(const std::vector<OracleResult>& results) {
  Table t{{"N", "s", "beta", "points", "max_rel_error", "worst_radius", "status"}, {}};
  for (const auto& r : results)
    t.add({std::to_string(r.params.N), format_real(r.params.s), format_real(r.params.beta),
           std::to_string(r.points), format_real(r.max_rel_error), format_real(r.worst_radius),
           r.pass ? "pass" : "fail"});
  return t;
}

Table solution_table(const Solution& sol, double beta) {
  Table t{{"r", "u", "u_r_beta"}, {}};
  const auto& G = sol.u.g();
  for (int i = 0; i < sol.u.size(); ++i) {
    const double r = G.nodes[i];
    const double u = sol.u.values()[i];
    t.add_reals({r, u, u * std::pow(r, beta)});
  }
  return t;
}

bool DecayReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.status == "fail"; });
}

const Check& DecayReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error("report: no check named '" + name + "'");
}

Table DecayReport::table() const {
  Table t{{"check", "status", "measured", "limit", "detail"}, {}};
  for (const auto& c : checks)
    t.add({c.name, c.status, format_real(c.measured), format_real(c.limit), c.detail});
  return t;
}

nlohmann::json DecayReport::json() const {
  nlohmann::json j = data;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"status", c.status},
                           {"measured", json_real(c.measured)},
                           {"limit", json_real(c.limit)},
                           {"detail", c.detail}});
  j["pass"] = passed();
  return j;
}

namespace {

std::string verdict(bool ok) { return ok ? "pass" : "fail"; }

nlohmann::json reals(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(json_real(x));
  return a;
}

// min and max of u(r) r^beta over the nodes in [lo, hi]
std::pair<double, double> tail_product_range(const RadialFunction& u, double beta, double lo,
                                             double hi) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  const auto& G = u.g();
  for (int i = 0; i < u.size(); ++i) {
    const double r = G.nodes[i];
    if (r < lo || r > hi) continue;
    const double p = u.values()[i] * std::pow(r, beta);
    mn = std::min(mn, p);
    mx = std::max(mx, p);
  }
  return {mn, mx};
}

}  // namespace

DecayReport verify_decay_report(const Solution& sol, const AnalysisConfig& a) {
  DecayReport rep;
  auto& d = rep.data;
  const auto& p = sol.params;
  const auto& nl = p.nonlinearity;
  const double r = nl.r;
  const double NaN = std::numeric_limits<double>::quiet_NaN();
  auto add = [&](std::string name, bool ok, double measured, double limit, std::string detail) {
    rep.checks.push_back({std::move(name), verdict(ok), measured, limit, std::move(detail)});
  };
  auto skip = [&](std::string name, std::string detail) {
    rep.checks.push_back({std::move(name), "skip", NaN, NaN, std::move(detail)});
  };

  d["params"] = {{"N", p.N}, {"s", p.s}, {"alpha", p.alpha}, {"mu", p.mu}, {"r", r}};
  d["solution"] = {{"norm_r", json_real(sol.norm_r)},
                   {"mass_F", json_real(sol.mass_F)},
                   {"iterations", sol.iterations}};

  // prediction
  const DecayPrediction pred = predict_decay(p);
  const bool choquard = pred.regime == DecayRegime::choquard_dominated;
  const double C_sharp = choquard ? sharp_constant(sol) : NaN;
  d["prediction"] = {{"beta", pred.beta},
                     {"regime", to_string(pred.regime)},
                     {"r_star", pred.r_star},
                     {"sharp_constant", json_real(C_sharp)}};

  // solution quality
  const double res = residual(sol).sup_abs() / sol.u.sup_abs();
  add("residual", res <= a.residual_tol, res, a.residual_tol, "sup|residual| / sup u");
  const PohozaevReport ph = pohozaev_check(sol);
  add("pohozaev", ph.relative_defect <= a.pohozaev_tol, ph.relative_defect, a.pohozaev_tol,
      "|P(u)| / sum of |terms|");
  const double dI = dilation_derivative(sol.u, p);
  const double dil = std::abs(dI - ph.P_val) / ph.scale;
  add("dilation_derivative", dil <= a.dilation_tol, dil, a.dilation_tol,
      "|dI(u(./t))/dt - P(u)| / Pohozaev scale");
  d["pohozaev"] = {{"I", ph.I_val},          {"P", ph.P_val},         {"scale", ph.scale},
                   {"quadratic", ph.quadratic}, {"mass2", ph.mass2}, {"choquard", ph.choquard},
                   {"dilation_derivative", dI}};

  // tail exponent
  const DecayFit fit = fit_tail(sol.u, a.fit_lo, a.fit_hi, a.fit_log);
  const double exp_err = std::abs(fit.fitted_exponent - pred.beta) / pred.beta;
  add("tail_exponent", exp_err <= a.exponent_tol, exp_err, a.exponent_tol,
      "|fitted - beta| / beta on the fit window");
  const double barrier = (p.N + 2.0 * p.s) * 1.05;
  add("lower_barrier", fit.fitted_exponent <= barrier, fit.fitted_exponent, barrier,
      "fitted exponent <= 1.05 (N+2s)");
  d["fit"] = {{"window", {fit.window_lo, fit.window_hi}},
              {"fitted_exponent", fit.fitted_exponent},
              {"fitted_amplitude", fit.fitted_amplitude},
              {"rms_log_residual", fit.rms_log_residual},
              {"points", fit.points},
              {"log_model", fit.log_model}};

  // sharp constant
  if (choquard) {
    const auto [mn, mx] = tail_product_range(sol.u, pred.beta, a.fit_lo, a.fit_hi);
    const double dev = std::max(std::abs(mn / C_sharp - 1.0), std::abs(mx / C_sharp - 1.0));
    add("sharp_constant", dev <= a.constant_tol, dev, a.constant_tol,
        "max |u r^beta / C - 1| on the fit window");
    d["tail_product"] = {{"min", mn}, {"max", mx}};
  } else {
    skip("sharp_constant", "no sharp constant for r >= r*");
  }

  // bound constants
  std::optional<double> kappa;
  if (a.kappa == "star")
    kappa = kappa_star(r, p.mu, nl.upper_envelope());
  else if (a.kappa != "none")
    kappa = parse_real(a.kappa);
  nlohmann::json bj;
  try {
    const BoundConstants bc = bound_constants(sol, kappa);
    bj = {{"C_upper", bc.C_upper},
          {"C_lower", bc.C_lower},
          {"C_sharp", json_real(bc.C_sharp)},
          {"kappa", bc.kappa},
          {"kappa_star", bc.kappa_star ? json_real(*bc.kappa_star) : nlohmann::json(nullptr)}};
    if (bc.kappa_star) {
      const double C = specfun::riesz_constant(p.N, p.alpha);
      const double ks = *bc.kappa_star;
      const double at_star = upper_constant(C, r, p.mu, nl.upper_envelope(), sol.mass_F, ks);
      const double gap = std::abs(at_star - bc.C_lower) / bc.C_lower;
      add("kappa_star_equalizes", gap <= 1e-10, gap, 1e-10, "|C_{u,kappa*} - C'_u| / C'_u");
      const double at_ten = upper_constant(C, r, p.mu, nl.upper_envelope(), sol.mass_F, 10 * ks);
      add("kappa_monotone", at_ten > at_star, at_ten / at_star, 1.0,
          "C_{u,10 kappa*} / C_{u,kappa*} > 1");
      double worst = 0.0;
      for (double k : {0.5, 3.0, 10.0, 1e3}) {
        const double moved =
            lower_constant(C, r, p.mu, nl.lower_envelope() / k, k * sol.mass_F);
        worst = std::max(worst, std::abs(moved - bc.C_lower) / bc.C_lower);
      }
      add("kappa_invariance", worst <= 1e-14, worst, 1e-14,
          "C'_u from (f/kappa, kappa F) vs (f, F)");
      bj["C_upper_at_kappa_star"] = at_star;

      if (choquard) {
        const auto [mn, mx] = tail_product_range(sol.u, pred.beta, a.bound_lo, a.bound_hi);
        add("bound_lower", mn >= bc.C_lower * (1.0 - 1e-12), mn / bc.C_lower, 1.0,
            "min u r^beta / C'_u on the bound window");
        const double up = at_star * (1.0 + a.constant_tol);
        add("bound_upper", mx <= up, mx / at_star, 1.0 + a.constant_tol,
            "max u r^beta / C_{u,kappa*} on the bound window");
      } else {
        skip("bound_lower", "bounds are compared with the sharp exponent only for r < r*");
        skip("bound_upper", "bounds are compared with the sharp exponent only for r < r*");
      }
    } else {
      skip("kappa_star_equalizes", "C_bar != C_under");
    }
  } catch (const HypothesisError& e) {
    skip("bound_constants", e.what());
    bj = {{"error", e.what()}};
  }
  d["bounds"] = bj;

  // Riesz tail
  const double theta = a.theta.value_or(p.N + p.alpha);
  const RieszTailReport rt = verify_riesz_tail(sol, theta, a.riesz_lo, a.riesz_hi);
  const double rz = std::abs(rt.normalized_at_hi - sol.mass_F) / sol.mass_F;
  add("riesz_normalized", rz <= a.riesz_tol, rz, a.riesz_tol,
      "|(I*F(u))(hi) hi^{N-alpha} / C_{N,alpha} - int F(u)| / int F(u)");
  add("riesz_tail_bounded", std::isfinite(rt.sup_D) && rt.non_increasing_tail, rt.sup_D, NaN,
      "sup D finite and D non-increasing on the outer half of the window");
  d["riesz"] = {{"theta", theta},
                {"window", {a.riesz_lo, a.riesz_hi}},
                {"sup_D", rt.sup_D},
                {"normalized_at_hi", rt.normalized_at_hi},
                {"radii", reals(rt.radii)},
                {"D", reals(rt.D)}};

  // chain rule
  std::vector<double> thetas{a.chain_rule_theta.value_or(2.0 - r)};
  if (std::abs(thetas[0] - 0.3) > 1e-12) thetas.push_back(0.3);
  d["chain_rule"] = nlohmann::json::array();
  for (double th : thetas) {
    const ChainRuleReport cr =
        verify_chain_rule(sol.u, th, a.chain_rule_radii, p.s, a.chain_rule_tol);
    char label[48];
    std::snprintf(label, sizeof label, "chain_rule_theta_%.6g", th);
    add(label, cr.pass, cr.min_relative_margin,
        -a.chain_rule_tol, "min (lhs - rhs) / (|lhs| + |rhs|)");
    d["chain_rule"].push_back({{"theta", th},
                               {"radii", reals(cr.radii)},
                               {"lhs", reals(cr.lhs)},
                               {"rhs", reals(cr.rhs)},
                               {"margin", reals(cr.margin)}});
  }
  return rep;
}

}  // namespace choquard
