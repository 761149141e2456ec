#include "choquard/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "choquard/error.hpp"
#include "choquard/radial_ops.hpp"
#include "choquard/specfun.hpp"

namespace choquard {

NonlinearitySpec NonlinearitySpec::homogeneous(double r, Convention c) {
  NonlinearitySpec nl;
  nl.kind = Kind::homogeneous;
  nl.convention = c;
  nl.r = r;
  return nl;
}

NonlinearitySpec NonlinearitySpec::general(double r, std::function<double(double)> f,
                                           std::function<double(double)> F, double C_bar,
                                           double C_under, double delta, double f_limit) {
  NonlinearitySpec nl;
  nl.kind = Kind::general;
  nl.r = r;
  nl.f_fn = std::move(f);
  nl.F_fn = std::move(F);
  nl.C_bar = C_bar;
  nl.C_under = C_under;
  nl.delta = delta;
  nl.f_limit = f_limit;
  return nl;
}

double NonlinearitySpec::k_f() const {
  return convention == Convention::power ? r : std::sqrt(r);
}

double NonlinearitySpec::k_F() const {
  return convention == Convention::power ? 1.0 : 1.0 / std::sqrt(r);
}

double NonlinearitySpec::f(double t) const {
  if (kind == Kind::general) return f_fn(t);
  return t > 0.0 ? k_f() * std::pow(t, r - 1.0) : 0.0;
}

double NonlinearitySpec::F(double t) const {
  if (kind == Kind::general) return F_fn(t);
  return t > 0.0 ? k_F() * std::pow(t, r) : 0.0;
}

double NonlinearitySpec::df(double t) const {
  if (kind == Kind::homogeneous) return t > 0.0 ? k_f() * (r - 1.0) * std::pow(t, r - 2.0) : 0.0;
  const double e = 1e-6 * std::max(t, 1e-300);
  return (f_fn(t + e) - f_fn(t - e)) / (2.0 * e);
}

double NonlinearitySpec::upper_envelope() const {
  return kind == Kind::homogeneous ? k_f() : C_bar;
}

double NonlinearitySpec::lower_envelope() const {
  return kind == Kind::homogeneous ? k_f() : C_under;
}

double NonlinearitySpec::limit_ratio() const {
  return kind == Kind::homogeneous ? k_f() : f_limit;
}

void NonlinearitySpec::validate() const {
  if (!(r > 1.0 && r < 3.0)) throw DomainError("nonlinearity: r must lie in (1, 3)");
  if (kind == Kind::homogeneous) return;
  if (!f_fn || !F_fn) throw DomainError("nonlinearity: general kind needs f and F");
  if (std::abs(F_fn(0.0)) > 0.0) throw DomainError("nonlinearity: F(0) must be 0");
  if (!(C_under <= C_bar)) throw DomainError("nonlinearity: need C_under <= C_bar");
  // F' = f by central differences on a lattice in (0, 2]
  for (int k = 1; k <= 20; ++k) {
    const double t = 0.1 * k;
    const double e = 1e-3;
    const double d =
        (F_fn(t - 2 * e) - 8.0 * F_fn(t - e) + 8.0 * F_fn(t + e) - F_fn(t + 2 * e)) / (12.0 * e);
    const double f0 = f_fn(t);
    if (std::abs(d - f0) > 1e-8 * std::max(1.0, std::abs(f0)))
      throw DomainError("nonlinearity: F is not an antiderivative of f");
  }
}

std::string to_string(NonlinearitySpec::Convention c) {
  return c == NonlinearitySpec::Convention::power ? "power" : "sqrt_r";
}

NonlinearitySpec::Convention convention_from_string(const std::string& s) {
  if (s == "power") return NonlinearitySpec::Convention::power;
  if (s == "sqrt_r") return NonlinearitySpec::Convention::sqrt_r;
  throw ConfigError("unknown nonlinearity convention '" + s + "' (power|sqrt_r)");
}

void ProblemParams::validate() const {
  if (N < 2) throw DomainError("problem: N must be >= 2");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("problem: s must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < N)) throw DomainError("problem: alpha must lie in (0,N)");
  if (!(mu > 0.0)) throw DomainError("problem: mu must be > 0");
  nonlinearity.validate();
  if (nonlinearity.kind == NonlinearitySpec::Kind::homogeneous) {
    const double r = nonlinearity.r;
    const double lo = (N + alpha) / N;
    const double hi = N > 2.0 * s ? (N + alpha) / (N - 2.0 * s) : INFINITY;
    if (r < lo - 1e-12 || r > hi + 1e-12)
      throw DomainError("problem: r outside the admissible range [(N+alpha)/N, (N+alpha)/(N-2s)]");
  }
}

RadialFunction nonlinearity_F(const RadialFunction& u, const NonlinearitySpec& nl) {
  if (nl.kind == NonlinearitySpec::Kind::homogeneous) return u.pow(nl.r).scaled(nl.k_F());
  std::vector<double> v(u.size());
  for (int i = 0; i < u.size(); ++i) v[i] = nl.F(u.values()[i]);
  return RadialFunction::with_tail_exponent(u.grid(), std::move(v), nl.r * u.tail().exponent);
}

RadialFunction nonlinearity_f(const RadialFunction& u, const NonlinearitySpec& nl) {
  if (nl.kind == NonlinearitySpec::Kind::homogeneous) return u.pow(nl.r - 1.0).scaled(nl.k_f());
  std::vector<double> v(u.size());
  for (int i = 0; i < u.size(); ++i) v[i] = nl.f(u.values()[i]);
  return RadialFunction::with_tail_exponent(u.grid(), std::move(v),
                                            (nl.r - 1.0) * u.tail().exponent);
}

double tail_fixed_point(const ProblemParams& p) {
  const double r = p.nonlinearity.r;
  const double top = p.N + 2.0 * p.s;
  if (r >= 2.0) return top;
  return std::min((p.N - p.alpha) / (2.0 - r), top);
}

namespace {

// (I_alpha * F(u)) f(u)
RadialFunction choquard_term(const RadialFunction& u, const ProblemParams& p) {
  const auto R = riesz_operator(u.grid(), p.alpha);
  return R->apply(nonlinearity_F(u, p.nonlinearity)).times(nonlinearity_f(u, p.nonlinearity));
}

double min_value(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

RadialFunction initial_guess(const GridPtr& grid, const ProblemParams& p, const SolverOpts& o) {
  double beta = p.N + 2.0 * p.s;
  if (o.init_profile == "h_beta") {
    beta = tail_fixed_point(p);
  } else if (o.init_profile != "h_N+2s") {
    throw ConfigError("unknown init_profile '" + o.init_profile + "' (h_N+2s|h_beta)");
  }
  return RadialFunction::sample(grid, [&](double r) { return specfun::h_beta_eval(r, beta); },
                                beta);
}

RadialFunction combine(const RadialFunction& a, const RadialFunction& b, double theta) {
  std::vector<double> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = (1.0 - theta) * a.values()[i] + theta * b.values()[i];
  const double omega = (1.0 - theta) * a.tail().exponent + theta * b.tail().exponent;
  return RadialFunction::with_tail_exponent(a.grid(), std::move(v), omega);
}

}  // namespace

Solution solve_ground_state(const ProblemParams& params, const SolverOpts& opts) {
  params.validate();
  if (!(opts.damping > 0.0 && opts.damping <= 1.0))
    throw DomainError("solver: damping must lie in (0,1]");
  if (opts.max_iter < 1) throw DomainError("solver: max_iter must be >= 1");
  const auto grid =
      RadialGrid::logarithmic(params.N, opts.grid.r_min, opts.grid.r_max, opts.grid.nodes);
  const Resolvent res(frac_laplacian_operator(grid, params.s), params.mu);
  const bool homogeneous = params.nonlinearity.kind == NonlinearitySpec::Kind::homogeneous;

  RadialFunction v = initial_guess(grid, params, opts);
  Solution sol(v, params);
  double multiplier = 0.0;
  double amplitude = 1.0;
  bool converged = false;
  int k = 0;
  auto T = [&](const RadialFunction& x) { return res.solve(choquard_term(x, params)); };
  for (; k < opts.max_iter; ++k) {
    RadialFunction w = homogeneous ? T(v) : T(v.scaled(amplitude));
    if (!homogeneous) {
      // Amplitude with sup T(A v) = A, by secant iteration in log A.
      double x0 = std::log(amplitude);
      double g0 = std::log(w.sup_abs()) - x0;
      double x1 = x0 + 0.05;
      for (int it = 0; it < 60 && std::abs(g0) > 1e-13; ++it) {
        RadialFunction w1 = T(v.scaled(std::exp(x1)));
        const double g1 = std::log(w1.sup_abs()) - x1;
        const double x2 = g1 == g0 ? x1 : x1 - g1 * (x1 - x0) / (g1 - g0);
        x0 = x1;
        g0 = g1;
        w = std::move(w1);
        x1 = std::clamp(x2, x0 - 2.0, x0 + 2.0);
      }
      if (!std::isfinite(g0)) throw NumericalError("solver: amplitude search failed");
      amplitude = std::exp(x0);
    }
    const double m = w.sup_abs();
    if (!(m >= 1e-12)) throw NumericalError("solver: iterates collapsed to zero");
    if (!(min_value(w.values()) > 0.0))
      throw NumericalError("solver: iterate lost positivity at iteration " + std::to_string(k));
    w = w.scaled(1.0 / m);
    RadialFunction next = combine(v, w, opts.damping);
    next = next.scaled(1.0 / next.sup_abs());
    double change = 0.0;
    for (int i = 0; i < v.size(); ++i)
      change = std::max(change, std::abs(next.values()[i] - v.values()[i]));
    change /= next.sup_abs();
    sol.trace.push_back(change);
    v = std::move(next);
    multiplier = m;
    if (change <= opts.tolerance) {
      converged = true;
      ++k;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("solver: no convergence after " + std::to_string(opts.max_iter) +
                           " iterations");

  if (homogeneous) {
    // T(A v) = A^{2r-1} T(v) = A^{2r-1} m v, so A v is a solution for A^{2r-2} m = 1.
    const RadialFunction w = T(v);
    multiplier = w.sup_abs();
    const double A = std::pow(multiplier, -1.0 / (2.0 * params.nonlinearity.r - 2.0));
    v = w.scaled(A / multiplier);
  } else {
    v = T(v.scaled(amplitude));
  }

  sol.u = v;
  sol.iterations = k;
  sol.multiplier = multiplier;
  const RadialFunction res_fn = residual(v, params);
  sol.residual_sup = res_fn.sup_abs() / v.sup_abs();
  sol.pohozaev_defect = pohozaev_check(v, params).relative_defect;
  const double r = params.nonlinearity.r;
  sol.norm_r = std::pow(v.pow(r).integral(), 1.0 / r);
  sol.mass_F = nonlinearity_F(v, params.nonlinearity).integral();
  return sol;
}

RadialFunction solve_newton(const ProblemParams& params, const RadialFunction& initial,
                            int max_iter, double tolerance) {
  params.validate();
  const auto& grid = initial.grid();
  const int M = grid->size();
  const auto L = frac_laplacian_operator(grid, params.s);
  const auto R = riesz_operator(grid, params.alpha);
  const auto& nl = params.nonlinearity;
  const double omega = initial.tail().exponent;

  Eigen::MatrixXd A = L->matrix(omega);
  A.diagonal().array() += params.mu;
  Eigen::MatrixXd Rm = R->base_matrix();
  Rm.col(M - 1) += R->ghost_column(nl.r * omega);

  Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(initial.values().data(), M);
  auto phi = [&](const Eigen::VectorXd& x, Eigen::VectorXd* conv, Eigen::VectorXd* Fx,
                 Eigen::VectorXd* fx) {
    Fx->resize(M);
    fx->resize(M);
    for (int i = 0; i < M; ++i) {
      (*Fx)(i) = nl.F(x(i));
      (*fx)(i) = nl.f(x(i));
    }
    *conv = Rm * *Fx;
    return Eigen::VectorXd(A * x - fx->cwiseProduct(*conv));
  };

  Eigen::VectorXd conv, Fx, fx;
  Eigen::VectorXd g = phi(u, &conv, &Fx, &fx);
  for (int it = 0; it < max_iter; ++it) {
    const double scale = u.cwiseAbs().maxCoeff();
    if (g.cwiseAbs().maxCoeff() <= tolerance * scale)
      return RadialFunction::with_tail_exponent(grid, std::vector<double>(u.data(), u.data() + M),
                                                omega);
    Eigen::MatrixXd J = A;
    for (int i = 0; i < M; ++i) J(i, i) -= nl.df(u(i)) * conv(i);
    Eigen::MatrixXd B = Rm;
    for (int j = 0; j < M; ++j) B.col(j) *= nl.f(u(j));  // F' = f
    for (int i = 0; i < M; ++i) B.row(i) *= fx(i);
    J -= B;
    const Eigen::VectorXd step = J.partialPivLu().solve(-g);
    double t = 1.0;
    const double g0 = g.cwiseAbs().maxCoeff();
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      Eigen::VectorXd trial = u + t * step;
      if (trial.minCoeff() <= 0.0) continue;
      Eigen::VectorXd c2, F2, f2;
      Eigen::VectorXd g2 = phi(trial, &c2, &F2, &f2);
      if (g2.cwiseAbs().maxCoeff() < g0 || ls == 29) {
        u = trial;
        g = g2;
        conv = c2;
        Fx = F2;
        fx = f2;
        break;
      }
    }
  }
  throw ConvergenceError("newton: no convergence");
}

RadialFunction residual(const RadialFunction& u, const ProblemParams& params) {
  if (u.sup_abs() == 0.0)
    return RadialFunction(u.grid(), std::vector<double>(u.size(), 0.0), TailModel{0.0, 1.0}, 0.0);
  const auto L = frac_laplacian_operator(u.grid(), params.s);
  std::vector<double> out = L->apply_nodes(u);
  const RadialFunction c = choquard_term(u, params);
  for (int i = 0; i < u.size(); ++i) out[i] += params.mu * u.values()[i] - c.values()[i];
  return RadialFunction::with_tail_exponent(u.grid(), std::move(out), u.tail().exponent);
}

RadialFunction residual(const Solution& sol) { return residual(sol.u, sol.params); }

PohozaevReport pohozaev_check(const RadialFunction& u, const ProblemParams& p) {
  PohozaevReport rep;
  if (u.sup_abs() == 0.0) return rep;
  const auto L = frac_laplacian_operator(u.grid(), p.s);
  const auto R = riesz_operator(u.grid(), p.alpha);
  const RadialFunction Fu = nonlinearity_F(u, p.nonlinearity);
  rep.quadratic = u.times(L->apply(u)).integral();
  rep.mass2 = u.times(u).integral();
  rep.choquard = R->apply(Fu).times(Fu).integral();
  const double N = p.N;
  rep.I_val = 0.5 * rep.quadratic + 0.5 * p.mu * rep.mass2 - 0.5 * rep.choquard;
  const double t1 = 0.5 * (N - 2.0 * p.s) * rep.quadratic;
  const double t2 = 0.5 * N * p.mu * rep.mass2;
  const double t3 = 0.5 * (N + p.alpha) * rep.choquard;
  rep.P_val = t1 + t2 - t3;
  rep.scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
  rep.relative_defect = rep.scale > 0.0 ? std::abs(rep.P_val) / rep.scale : 0.0;
  return rep;
}

PohozaevReport pohozaev_check(const Solution& sol) { return pohozaev_check(sol.u, sol.params); }

double energy_dilated(const RadialFunction& u, const ProblemParams& params, double t) {
  if (!(t > 0.0)) throw DomainError("energy_dilated: t must be > 0");
  const auto& G = u.g();
  std::vector<double> v(u.size());
  for (int i = 0; i < u.size(); ++i) v[i] = u(G.nodes[i] / t);
  const RadialFunction ut = RadialFunction::with_tail_exponent(u.grid(), std::move(v),
                                                               u.tail().exponent);
  return pohozaev_check(ut, params).I_val;
}

double dilation_derivative(const RadialFunction& u, const ProblemParams& params, double dt) {
  return (energy_dilated(u, params, 1.0 + dt) - energy_dilated(u, params, 1.0 - dt)) / (2.0 * dt);
}

}  // namespace choquard
