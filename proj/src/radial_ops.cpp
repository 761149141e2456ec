#include "choquard/radial_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "choquard/error.hpp"
#include "choquard/specfun.hpp"

namespace choquard {

double default_tau_span(const RadialGrid& grid) {
  return std::max(20.0, std::log(grid.r_max / grid.r_min) + 1.0);
}

namespace {

// Fills base (M x M) and ghost (M x m_hi) from a stencil; sign = -1 for the
// difference form, +1 for the plain form.
void assemble(const RadialGrid& G, const ConvolutionStencil& st, const std::vector<double>& pref,
              Eigen::MatrixXd& base, Eigen::MatrixXd& ghost) {
  const int M = G.size();
  const double sign = st.difference ? -1.0 : 1.0;
  base.setZero(M, M);
  ghost.setZero(M, st.m_hi);
  for (int i = 0; i < M; ++i) {
    const double pi = pref[i];
    if (st.difference) base(i, i) += st.c0 * pi;
    base(i, 0) += sign * st.left_far * pi;
    for (int m = st.m_lo; m <= st.m_hi; ++m) {
      const double c = sign * st.weight(m) * pi;
      const int j = i + m;
      if (j < 0) {
        base(i, 0) += c;
      } else if (j < M) {
        base(i, j) += c;
      } else {
        ghost(i, j - M) += c;
      }
    }
  }
}

Eigen::VectorXd ghost_vector(const RadialGrid& G, const ConvolutionStencil& st,
                             const std::vector<double>& pref, const Eigen::MatrixXd& ghost,
                             double omega) {
  const int D = static_cast<int>(ghost.cols());
  Eigen::VectorXd e(D);
  for (int d = 0; d < D; ++d) e(d) = std::exp(-omega * (d + 1) * G.h);
  Eigen::VectorXd out = ghost * e;
  const double far = st.right_far(omega);
  const double sign = st.difference ? -1.0 : 1.0;
  for (int i = 0; i < G.size(); ++i)
    out(i) += sign * pref[i] * std::pow(G.r_max / G.nodes[i], omega) * far;
  return out;
}

std::vector<double> apply_with(const Eigen::MatrixXd& base, const Eigen::VectorXd& ghost_col,
                               const RadialFunction& u) {
  const auto& v = u.values();
  Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  Eigen::VectorXd y = base * x + ghost_col * v.back();
  return std::vector<double>(y.data(), y.data() + y.size());
}

// Sum over the stencil of w_m u(at e^{m h}), with the far-right term.
double stencil_sum(const ConvolutionStencil& st, const RadialFunction& u, double at) {
  double sum = 0.0;
  for (int m = st.m_lo; m <= st.m_hi; ++m) sum += st.weight(m) * u(at * std::exp(m * st.h));
  return sum;
}

double far_right_term(const ConvolutionStencil& st, const RadialFunction& u, double at) {
  const auto& G = u.g();
  const double omega = u.tail().exponent;
  return u.values().back() * std::pow(G.r_max / at, omega) * st.right_far(omega);
}

void check_same_step(const RadialGrid& G, const ConvolutionStencil& st) {
  if (std::abs(G.h - st.h) > 1e-14 * st.h) throw DomainError("operator: grid mismatch");
}

}  // namespace

FracLaplacian::FracLaplacian(GridPtr grid, double s) : grid_(std::move(grid)), s_(s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("FracLaplacian: s must lie in (0,1)");
  const auto& G = *grid_;
  cns_ = specfun::frac_laplacian_constant(G.N, s);
  st_ = ConvolutionStencil::build(G.N, -(G.N + 2.0 * s), G.h, default_tau_span(G), true);
  pref_.resize(G.size());
  for (int i = 0; i < G.size(); ++i) pref_[i] = cns_ * std::pow(G.nodes[i], -2.0 * s);
  assemble(G, st_, pref_, base_, ghost_);
}

Eigen::VectorXd FracLaplacian::ghost_column(double omega) const {
  return ghost_vector(*grid_, st_, pref_, ghost_, omega);
}

Eigen::MatrixXd FracLaplacian::matrix(double omega) const {
  Eigen::MatrixXd A = base_;
  A.col(A.cols() - 1) += ghost_column(omega);
  return A;
}

std::vector<double> FracLaplacian::apply_nodes(const RadialFunction& u) const {
  if (u.grid() != grid_) throw DomainError("FracLaplacian: function lives on another grid");
  return apply_with(base_, ghost_column(u.tail().exponent), u);
}

RadialFunction FracLaplacian::apply(const RadialFunction& u) const {
  const double N = grid_->N;
  const double omega = std::min(u.tail().exponent + 2.0 * s_, N + 2.0 * s_);
  return RadialFunction::with_tail_exponent(grid_, apply_nodes(u), omega);
}

double FracLaplacian::apply_at(const RadialFunction& u, double at) const {
  const auto& G = u.g();
  check_same_step(G, st_);
  if (!(at > 0.0 && at <= G.r_max * (1.0 + 1e-12)))
    throw DomainError("frac_laplacian_radial: radius must lie in (0, r_max]");
  const double inner = st_.c0 * u(at) - stencil_sum(st_, u, at) - st_.left_far * u.values().front() -
                       far_right_term(st_, u, at);
  return cns_ * std::pow(at, -2.0 * s_) * inner;
}

RieszOperator::RieszOperator(GridPtr grid, double alpha) : grid_(std::move(grid)), alpha_(alpha) {
  const auto& G = *grid_;
  cna_ = specfun::riesz_constant(G.N, alpha);
  st_ = ConvolutionStencil::build(G.N, alpha - G.N, G.h, default_tau_span(G), false);
  pref_.resize(G.size());
  for (int i = 0; i < G.size(); ++i) pref_[i] = cna_ * std::pow(G.nodes[i], alpha);
  assemble(G, st_, pref_, base_, ghost_);
}

Eigen::VectorXd RieszOperator::ghost_column(double omega) const {
  return ghost_vector(*grid_, st_, pref_, ghost_, omega);
}

std::vector<double> RieszOperator::apply_nodes(const RadialFunction& g) const {
  if (g.grid() != grid_) throw DomainError("RieszOperator: function lives on another grid");
  if (!(g.tail().exponent > alpha_))
    throw DomainError("riesz_convolve_radial: tail exponent must exceed alpha");
  return apply_with(base_, ghost_column(g.tail().exponent), g);
}

RadialFunction RieszOperator::apply(const RadialFunction& g) const {
  const double N = grid_->N;
  const double w = g.tail().exponent;
  const double omega = w > N ? N - alpha_ : w - alpha_;
  return RadialFunction::with_tail_exponent(grid_, apply_nodes(g), omega);
}

double RieszOperator::apply_at(const RadialFunction& g, double at) const {
  const auto& G = g.g();
  check_same_step(G, st_);
  if (!(g.tail().exponent > alpha_))
    throw DomainError("riesz_convolve_radial: tail exponent must exceed alpha");
  if (!(at > 0.0)) throw DomainError("riesz: radius must be > 0");
  const double inner =
      stencil_sum(st_, g, at) + st_.left_far * g.values().front() + far_right_term(st_, g, at);
  return cna_ * std::pow(at, alpha_) * inner;
}

Resolvent::Resolvent(std::shared_ptr<const FracLaplacian> op, double mu)
    : op_(std::move(op)), mu_(mu) {
  if (!(mu > 0.0)) throw DomainError("Resolvent: mu must be > 0");
  const auto& G = *op_->grid();
  omega_ref_ = G.N + 2.0 * op_->s();
  ghost_ref_ = op_->ghost_column(omega_ref_);
  Eigen::MatrixXd A = op_->base_matrix();
  A.diagonal().array() += mu;
  A.col(A.cols() - 1) += ghost_ref_;
  lu_.compute(A);
  if (!(lu_.rcond() > 1e-14)) throw NumericalError("Resolvent: singular operator matrix");
}

std::vector<double> Resolvent::solve(const std::vector<double>& rhs, double omega) const {
  const int M = op_->grid()->size();
  if (static_cast<int>(rhs.size()) != M) throw DomainError("Resolvent: size mismatch");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), M);

  Eigen::VectorXd z;
  const bool update = omega != omega_ref_;
  if (update) z = lu_.solve(op_->ghost_column(omega) - ghost_ref_);
  auto apply_inverse = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd y = lu_.solve(v);
    if (update) y -= z * (y(M - 1) / (1.0 + z(M - 1)));
    return y;
  };

  Eigen::VectorXd y = apply_inverse(b);
  std::vector<double> w(y.data(), y.data() + M);
  double res = relative_residual(w, rhs, omega);
  for (int it = 0; it < 3 && res > 1e-13; ++it) {
    Eigen::VectorXd r = b - (op_->base_matrix() * y + op_->ghost_column(omega) * y(M - 1) + mu_ * y);
    y += apply_inverse(r);
    w.assign(y.data(), y.data() + M);
    res = relative_residual(w, rhs, omega);
  }
  if (!(res <= 1e-10)) throw NumericalError("Resolvent: linear solve residual too large");
  return w;
}

RadialFunction Resolvent::solve(const RadialFunction& rhs) const {
  const auto& G = *op_->grid();
  const double omega = std::min(rhs.tail().exponent, G.N + 2.0 * op_->s());
  return RadialFunction::with_tail_exponent(op_->grid(), solve(rhs.values(), omega), omega);
}

double Resolvent::relative_residual(const std::vector<double>& w, const std::vector<double>& rhs,
                                    double omega) const {
  const int M = static_cast<int>(w.size());
  Eigen::Map<const Eigen::VectorXd> x(w.data(), M), b(rhs.data(), M);
  Eigen::VectorXd r = op_->base_matrix() * x + op_->ghost_column(omega) * x(M - 1) + mu_ * x - b;
  const double nb = b.cwiseAbs().maxCoeff();
  const double nr = r.cwiseAbs().maxCoeff();
  return nb > 0.0 ? nr / nb : nr;
}

namespace {

template <class Op>
struct Cache {
  std::mutex mu;
  std::vector<std::pair<std::pair<GridPtr, double>, std::shared_ptr<const Op>>> items;

  std::shared_ptr<const Op> get(const GridPtr& grid, double param) {
    std::lock_guard<std::mutex> lock(mu);
    for (auto& [key, op] : items)
      if (key.first == grid && key.second == param) return op;
    auto op = std::make_shared<const Op>(grid, param);
    if (items.size() >= 8) items.erase(items.begin());
    items.push_back({{grid, param}, op});
    return op;
  }
};

}  // namespace

std::shared_ptr<const FracLaplacian> frac_laplacian_operator(const GridPtr& grid, double s) {
  static Cache<FracLaplacian> cache;
  return cache.get(grid, s);
}

std::shared_ptr<const RieszOperator> riesz_operator(const GridPtr& grid, double alpha) {
  static Cache<RieszOperator> cache;
  return cache.get(grid, alpha);
}

double frac_laplacian_radial(const RadialFunction& u, double s, double at) {
  return frac_laplacian_operator(u.grid(), s)->apply_at(u, at);
}

RadialFunction riesz_convolve_radial(const RadialFunction& g, double alpha) {
  return riesz_operator(g.grid(), alpha)->apply(g);
}

RadialFunction apply_inverse_operator(const RadialFunction& rhs, double s, double mu) {
  Resolvent R(frac_laplacian_operator(rhs.grid(), s), mu);
  return R.solve(rhs);
}

ComparisonResult comparison_residual(int N, double s, double beta, double theta, double gamma,
                                     double lambda, double sigma,
                                     const std::vector<double>& radii) {
  if (!(gamma > 0.0 && lambda > 0.0)) throw DomainError("comparison: gamma, lambda must be > 0");
  const double Nd = N;
  const double top = Nd + 2.0 * s;
  const double snap = specfun::kRegimeSnap;
  if (!(beta > 0.5 * Nd && beta <= top + snap))
    throw DomainError("comparison: beta must lie in (N/2, N+2s]");
  auto in_open = [](double x, double lo, double hi) { return x > lo && x < hi; };
  bool ok = false;
  if (std::abs(beta - top) <= snap) {
    ok = std::abs(theta - top) <= snap;
  } else if (std::abs(beta - Nd) <= snap || std::abs(beta - (Nd - 2.0 * s)) <= snap) {
    ok = in_open(theta, Nd, top);
  } else if (beta > Nd) {
    ok = in_open(theta, beta, top);
  } else {
    ok = in_open(theta, beta, std::min(Nd, beta + 2.0 * s)) &&
         std::abs(theta - (Nd - 2.0 * s)) > snap;
  }
  if (!ok) throw DomainError("comparison: theta not admissible for this beta");

  const specfun::ProfileParams pb{N, s, beta};
  const specfun::ProfileParams pt{N, s, theta};
  ComparisonResult out;
  out.ratio_defined = sigma != 0.0;
  for (double r : radii) {
    const double hth = specfun::h_beta_eval(r, theta);
    const double g = gamma / lambda * specfun::frac_lap_h_exact(r, pb) +
                     sigma * specfun::frac_lap_h_exact(r, pt) + lambda * sigma * hth;
    out.residual.push_back(g);
    out.ratio.push_back(out.ratio_defined ? g / (lambda * sigma * hth)
                                          : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace choquard
