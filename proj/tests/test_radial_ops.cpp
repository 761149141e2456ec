#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "choquard/error.hpp"
#include "choquard/radial_ops.hpp"
#include "choquard/specfun.hpp"

using namespace choquard;
using specfun::h_beta_eval;

namespace {

RadialFunction profile(const GridPtr& g, double beta) {
  return RadialFunction::sample(g, [beta](double r) { return h_beta_eval(r, beta); }, beta);
}

GridPtr default_grid(int N = 3, int M = 1200) { return RadialGrid::logarithmic(N, 1e-3, 1e3, M); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("radial_ops") {

TEST_CASE("grid invariants") {
  const auto g = default_grid();
  CHECK(g->nodes.front() == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(g->nodes.back() == 1e3);
  for (int i = 1; i < g->size(); ++i) CHECK(g->nodes[i] > g->nodes[i - 1]);
  CHECK(std::all_of(g->weights.begin(), g->weights.end(), [](double w) { return w >= 0.0; }));
  CHECK_THROWS_AS(RadialGrid::logarithmic(3, 1.0, 0.5, 100), DomainError);
}

TEST_CASE("integral of h_4 over R^3 is pi^2") {
  const auto g = default_grid();
  CHECK(profile(g, 4.0).integral() == doctest::Approx(9.86960440108935861883).epsilon(1e-6));
}

TEST_CASE("radial function construction checks") {
  const auto g = RadialGrid::logarithmic(3, 1e-2, 1e2, 100);
  std::vector<double> v(g->size(), 1.0);
  CHECK_THROWS_AS(RadialFunction(g, v, TailModel{1.5, 0.0}, 1.0), DomainError);
  CHECK_THROWS_AS(RadialFunction(g, v, TailModel{1.0, -1.0}, 1.0), DomainError);
  v[4] = NAN;
  CHECK_THROWS(RadialFunction(g, v, TailModel{1.0, 0.0}, 1.0));
}

TEST_CASE("fractional Laplacian of a constant vanishes") {
  const auto g = default_grid();
  const auto c = RadialFunction::sample(g, [](double) { return 2.5; }, 0.0);
  for (double r : {1e-3, 0.1, 1.0, 30.0, 1e3})
    CHECK(std::abs(frac_laplacian_radial(c, 0.5, r)) <= 1e-10);
}

TEST_CASE("exact identity (-Delta)^{1/2} h_2 = 2 h_4") {
  const auto g = default_grid();
  const auto u = profile(g, 2.0);
  for (double r = 0.1; r <= 20.0; r *= 1.3)
    CHECK(rel(frac_laplacian_radial(u, 0.5, r), 2.0 * h_beta_eval(r, 4.0)) <= 1e-3);
}

TEST_CASE("h_3.5 against the hypergeometric closed form") {
  const auto g = default_grid();
  const auto u = profile(g, 3.5);
  for (double r = 0.1; r <= 20.0; r *= 1.3)
    CHECK(rel(frac_laplacian_radial(u, 0.5, r), specfun::frac_lap_h_exact(r, {3, 0.5, 3.5})) <=
          1e-3);
}

TEST_CASE("oracle equivalence on 800 nodes") {
  struct Case {
    int N;
    double s, beta;
  };
  for (const Case c : {Case{3, 0.5, 2}, Case{3, 0.5, 3.5}, Case{2, 0.5, 2.5}, Case{3, 0.25, 3}}) {
    const auto g = default_grid(c.N, 800);
    const auto v = frac_laplacian_operator(g, c.s)->apply_nodes(profile(g, c.beta));
    double worst = 0.0;
    for (int i = 0; i < g->size(); ++i) {
      const double r = g->nodes[i];
      if (r < 0.1 || r > 50.0) continue;
      worst = std::max(worst, rel(v[i], specfun::frac_lap_h_exact(r, {c.N, c.s, c.beta})));
    }
    CAPTURE(c.beta);
    CHECK(worst <= 1e-3);
  }
}

TEST_CASE("linearity of both operators") {
  const auto g = default_grid();
  const auto u = profile(g, 3.2);
  const auto a = frac_laplacian_operator(g, 0.5)->apply_nodes(u);
  const auto b = frac_laplacian_operator(g, 0.5)->apply_nodes(u.scaled(3.0));
  const auto ra = riesz_convolve_radial(u, 2.0);
  const auto rb = riesz_convolve_radial(u.scaled(3.0), 2.0);
  for (int i = 0; i < g->size(); i += 37) {
    // the PV rows cancel large terms, so round-off is amplified at small r
    CHECK(std::abs(b[i] - 3.0 * a[i]) <= 1e-10 * std::abs(3.0 * a[i]));
    CHECK(rb.values()[i] == doctest::Approx(3.0 * ra.values()[i]).epsilon(1e-13));
  }
}

TEST_CASE("Riesz potential: positivity, spot value, tail law") {
  const auto g = default_grid();
  const auto h5 = profile(g, 5.0);
  const auto I = riesz_convolve_radial(h5, 2.0);
  CHECK(*std::min_element(I.values().begin(), I.values().end()) > 0.0);
  // nested 3D quadrature of C_{3,2} int |x-y|^{-1} h_5(y) dy at |x| = 1 (mpmath)
  CHECK(rel(riesz_operator(g, 2.0)->apply_at(h5, 1.0), 0.235702260395515841466948) <= 1e-4);

  const auto h4 = profile(g, 4.0);
  const double norm = riesz_operator(g, 2.0)->apply_at(h4, 100.0) * 100.0 /
                      specfun::riesz_constant(3, 2.0);
  CHECK(rel(norm, h4.integral()) <= 0.05);
}

TEST_CASE("Riesz potential needs a tail exponent above alpha") {
  const auto g = default_grid();
  const auto slow = profile(g, 1.5);
  CHECK_THROWS_AS(riesz_convolve_radial(slow, 2.0), DomainError);
}

TEST_CASE("resolvent round trip and dominant-mu limit") {
  const auto g = default_grid();
  const auto L = frac_laplacian_operator(g, 0.5);
  const double mu = 1.0;
  const Resolvent res(L, mu);
  const auto hb = profile(g, 3.5);
  std::vector<double> rhs = L->apply_nodes(hb);
  for (int i = 0; i < g->size(); ++i) rhs[i] += mu * hb.values()[i];
  const auto w = res.solve(rhs, 3.5);
  double worst = 0.0;
  for (int i = 0; i < g->size(); ++i) worst = std::max(worst, rel(w[i], hb.values()[i]));
  CHECK(worst <= 1e-9);
  CHECK(res.relative_residual(w, rhs, 3.5) <= 1e-10);

  const auto h4 = profile(g, 4.0);
  const auto big = apply_inverse_operator(h4, 0.5, 1e6);
  for (int i = 0; i < g->size(); ++i) CHECK(rel(big.values()[i] * 1e6, h4.values()[i]) <= 1e-3);
}

TEST_CASE("resolvent recovers h_beta from the closed-form forward operator") {
  const auto g = default_grid();
  const specfun::ProfileParams pp{3, 0.5, 3.5};
  const auto rhs = RadialFunction::sample(
      g, [&](double r) { return specfun::frac_lap_h_exact(r, pp) + h_beta_eval(r, 3.5); }, 3.5);
  const auto w = apply_inverse_operator(rhs, 0.5, 1.0);
  for (int i = 0; i < g->size(); ++i) {
    if (g->nodes[i] > 100.0) break;
    CHECK(rel(w.values()[i], h_beta_eval(g->nodes[i], 3.5)) <= 1e-3);
  }
}

TEST_CASE("inverse of a positive right-hand side is positive") {
  const auto g = default_grid();
  const auto w = apply_inverse_operator(profile(g, 4.0), 0.5, 1.0);
  CHECK(*std::min_element(w.values().begin(), w.values().end()) > 0.0);
}

TEST_CASE("comparison residual") {
  const std::vector<double> far{200.0};
  SUBCASE("sigma = 0 leaves the ratio undefined") {
    const auto c = comparison_residual(3, 0.5, 2.6, 2.9, 1.0, 1.0, 0.0, far);
    CHECK_FALSE(c.ratio_defined);
    CHECK(std::isnan(c.ratio[0]));
    CHECK(c.residual[0] == doctest::Approx(specfun::frac_lap_h_exact(200.0, {3, 0.5, 2.6})));
  }
  SUBCASE("ratio to lambda sigma h_theta at r = 200") {
    const auto c = comparison_residual(3, 0.5, 2.6, 2.9, 1.0, 1.0, 1.0, far);
    CHECK(c.ratio_defined);
    CHECK(std::abs(c.ratio[0] - 1.0) <= 0.10);
  }
  SUBCASE("sign follows sigma at large r") {
    const std::vector<double> radii{100.0, 300.0, 1000.0};
    const auto pos = comparison_residual(3, 0.5, 2.6, 2.9, 1.0, 1.0, 1.0, radii);
    const auto neg = comparison_residual(3, 0.5, 2.6, 2.9, 1.0, 1.0, -1.0, radii);
    for (size_t k = 0; k < radii.size(); ++k) {
      CHECK(pos.residual[k] > 0.0);
      CHECK(neg.residual[k] < 0.0);
    }
  }
  SUBCASE("inadmissible parameters") {
    CHECK_THROWS_AS(comparison_residual(3, 0.5, 1.2, 2.9, 1.0, 1.0, 1.0, far), DomainError);
    CHECK_THROWS_AS(comparison_residual(3, 0.5, 2.6, 2.9, 0.0, 1.0, 1.0, far), DomainError);
  }
}

}  // TEST_SUITE
