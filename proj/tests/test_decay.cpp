#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "choquard/decay.hpp"
#include "choquard/error.hpp"
#include "choquard/specfun.hpp"
#include "fixtures.hpp"

using namespace choquard;
using choquard::testing::solved;
using Conv = NonlinearitySpec::Convention;

namespace {

ProblemParams params(double r, Conv c = Conv::sqrt_r, int N = 3, double s = 0.5,
                     double alpha = 2.0) {
  ProblemParams p;
  p.N = N;
  p.s = s;
  p.alpha = alpha;
  p.nonlinearity = NonlinearitySpec::homogeneous(r, c);
  return p;
}

GridPtr grid() { return RadialGrid::logarithmic(3, 1e-3, 1e3, 1200); }

RadialFunction profile(const GridPtr& g, double beta) {
  return RadialFunction::sample(g, [beta](double r) { return specfun::h_beta_eval(r, beta); },
                                beta);
}

// Solution record around an arbitrary positive profile, with measured norms.
Solution wrap(const RadialFunction& u, const ProblemParams& p) {
  Solution sol(u, p);
  sol.norm_r = std::pow(u.pow(p.nonlinearity.r).integral(), 1.0 / p.nonlinearity.r);
  sol.mass_F = nonlinearity_F(u, p.nonlinearity).integral();
  return sol;
}

}  // namespace

TEST_SUITE("decay") {

TEST_CASE("predicted exponent and regime") {
  const auto a = predict_decay(params(1.7));
  CHECK(a.beta == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
  CHECK(a.regime == DecayRegime::choquard_dominated);
  CHECK(a.r_star == doctest::Approx(1.75).epsilon(1e-15));
  CHECK_FALSE(a.sharp_constant.has_value());

  const auto b = predict_decay(params(1.9));
  CHECK(b.beta == 4.0);
  CHECK(b.regime == DecayRegime::laplacian_dominated);

  const auto c = predict_decay(params(1.75));
  CHECK(c.beta == 4.0);
  CHECK(c.regime == DecayRegime::boundary);
  CHECK((3.0 - 2.0) / (2.0 - 1.75) == 4.0);

  CHECK_THROWS_AS(predict_decay(params(1.6)), DomainError);
  CHECK_THROWS_AS(predict_decay(params(2.2)), DomainError);
}

TEST_CASE("beta identities on random admissible parameters") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const int N = 2 + static_cast<int>(U(rng) * 4);
    const double s = 0.05 + 0.9 * U(rng);
    const double alpha = N * (0.05 + 0.9 * U(rng));
    const double lo = (N + alpha) / N;
    const double rs = threshold_r_star(N, s, alpha);
    CAPTURE(N);
    CAPTURE(s);
    CAPTURE(alpha);
    const auto at_lo = predict_decay(params(lo, Conv::power, N, s, alpha));
    CHECK(at_lo.beta == static_cast<double>(N));
    const double r = rs + (2.0 - rs) * U(rng);
    if (r < 2.0) CHECK(predict_decay(params(r, Conv::power, N, s, alpha)).beta == N + 2.0 * s);
    const double q = lo + (2.0 - lo) * U(rng);
    const auto pq = predict_decay(params(q, Conv::power, N, s, alpha));
    CHECK(pq.beta >= N - 1e-12);
    CHECK(pq.beta <= N + 2.0 * s + 1e-12);
    CHECK((pq.regime == DecayRegime::choquard_dominated) == (q < rs - 1e-12));
  }
}

TEST_CASE("tail fit recovers exact models") {
  const auto g = grid();
  const auto pw = RadialFunction::sample(g, [](double r) { return 2.0 * std::pow(r, -3.5); }, 3.5);
  const auto f = fit_tail(pw, 50.0, 100.0);
  CHECK(f.fitted_exponent == doctest::Approx(3.5).epsilon(1e-10));
  CHECK(f.fitted_amplitude == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.rms_log_residual < 1e-12);
  CHECK(f.points >= 20);

  const auto h = fit_tail(profile(g, 10.0 / 3.0));
  CHECK(std::abs(h.fitted_exponent / (10.0 / 3.0) - 1.0) <= 0.01);
  CHECK(h.window_lo == 50.0);
  CHECK(h.window_hi == 100.0);

  const auto lg = RadialFunction::sample(
      g, [](double r) { return r > 1.0 ? 0.5 * std::log(r) * std::pow(r, -3.0) : 0.0; }, 3.0);
  const auto fl = fit_tail(lg, 50.0, 100.0, true);
  CHECK(fl.log_model);
  CHECK(fl.fitted_exponent == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fl.fitted_amplitude == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(fit_tail(pw, 50.0, 100.0, true).log_model);
}

TEST_CASE("tail fit preconditions") {
  const auto g = grid();
  const auto h = profile(g, 4.0);
  CHECK_THROWS_AS(fit_tail(h, 50.0, 200.0), DomainError);  // beyond r_max/10
  CHECK_THROWS_AS(fit_tail(h, 50.0, 52.0), DomainError);   // fewer than 20 nodes
  const auto neg = RadialFunction::sample(g, [](double r) { return 1.0 / (1 + r * r) - 0.001; }, 0.0);
  CHECK_THROWS_AS(fit_tail(neg, 50.0, 100.0), DomainError);
}

TEST_CASE("sharp constant from the solution's own norm") {
  const auto g = grid();
  const auto u = profile(g, 4.0);
  ProblemParams p = params(1.7, Conv::sqrt_r);
  Solution sol = wrap(u, p);

  SUBCASE("mu = C_{N,alpha} ||u||_r^r gives constant 1") {
    sol.params.mu = specfun::riesz_constant(3, 2.0) * std::pow(sol.norm_r, 1.7);
    CHECK(sharp_constant(sol) == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("homogeneous and general paths agree") {
    Solution pw = wrap(u, params(1.7, Conv::power));
    const double a = sharp_constant_homogeneous(pw);
    const double b = sharp_constant_general(pw);
    CHECK(std::abs(a / b - 1.0) <= 1e-12);
    CHECK(std::abs(sharp_constant_homogeneous(sol) / sharp_constant_general(sol) - 1.0) <= 1e-12);
  }
  SUBCASE("no sharp constant at or above r*") {
    CHECK_THROWS_AS(sharp_constant(wrap(u, params(1.9))), DomainError);
    CHECK_THROWS_AS(sharp_constant(wrap(u, params(1.75))), DomainError);
  }
}

TEST_CASE("bound constants and the kappa ledger") {
  const auto g = grid();
  const Solution sol = wrap(profile(g, 4.0), params(1.7));
  const double C = specfun::riesz_constant(3, 2.0);
  const double Cb = sol.params.nonlinearity.upper_envelope();
  const double r = 1.7, mu = 1.0;

  // raw hypothesis mu > (r-1) C_bar^{1/(r-1)} fails for mu = 1
  CHECK(mu <= (r - 1.0) * std::pow(Cb, 1.0 / (r - 1.0)));
  CHECK_THROWS_AS(bound_constants(sol), HypothesisError);

  const double ks = kappa_star(r, mu, Cb);
  const auto bc = bound_constants(sol, ks);
  REQUIRE(bc.kappa_star.has_value());
  CHECK(*bc.kappa_star == ks);
  CHECK(std::abs(bc.C_upper - bc.C_lower) <= 1e-10 * bc.C_lower);
  CHECK(std::abs(bc.C_sharp - bc.C_lower) <= 1e-12 * bc.C_lower);
  CHECK(upper_constant(C, r, mu, Cb, sol.mass_F, 10 * ks) > bc.C_upper);
  CHECK(upper_constant(C, r, mu, Cb, sol.mass_F, 100 * ks) >
        upper_constant(C, r, mu, Cb, sol.mass_F, 10 * ks));
  // (f/kappa, kappa F) leaves C'_u unchanged
  for (double k : {0.25, 2.0, 1024.0})
    CHECK(lower_constant(C, r, mu, Cb / k, k * sol.mass_F) ==
          lower_constant(C, r, mu, Cb, sol.mass_F));
  for (double k : {0.3, 7.0, 1e3})
    CHECK(std::abs(lower_constant(C, r, mu, Cb / k, k * sol.mass_F) /
                       lower_constant(C, r, mu, Cb, sol.mass_F) -
                   1.0) <= 1e-15);
}

TEST_CASE("chain rule on h_4") {
  const auto g = grid();
  const auto h4 = profile(g, 4.0);
  const std::vector<double> radii{0.5, 1.0, 5.0, 20.0};
  const auto rep = verify_chain_rule(h4, 0.3, radii, 0.5);
  CHECK(rep.pass);
  for (double m : rep.margin) CHECK(m > 0.0);

  const auto eq = verify_chain_rule(h4, 1.0 - 1e-9, radii, 0.5);
  for (size_t k = 0; k < radii.size(); ++k)
    CHECK(std::abs(eq.lhs[k] - eq.rhs[k]) <= 1e-6 * std::abs(eq.rhs[k]));
  CHECK_THROWS_AS(verify_chain_rule(h4, 1.5, radii, 0.5), DomainError);
}

TEST_CASE("Riesz tail of a narrow bump") {
  // D(r) ~ mass sigma^2 / r for a Gaussian of width sigma; alpha = 1 since the
  // Newtonian case alpha = 2 has no correction outside the bump
  const auto g = grid();
  const double sigma = 0.05;
  const auto bump = RadialFunction::sample(
      g, [sigma](double r) { return std::exp(-r * r / (2 * sigma * sigma)); }, 30.0);
  const auto rep = verify_riesz_tail(bump, 1.0, 4.0, 1.0, 20.0);
  CHECK(rep.non_increasing_tail);
  CHECK(rep.D.back() <= 0.1 * rep.D.front());
  CHECK(std::abs(rep.normalized_at_hi / bump.integral() - 1.0) <= 1e-4);
  CHECK_THROWS_AS(verify_riesz_tail(bump, 1.0, 3.0, 1.0, 20.0), DomainError);
}

TEST_CASE("end to end at r = 1.7") {
  const Solution& sol = solved(1.7);
  const auto pred = predict_decay(sol);
  REQUIRE(pred.sharp_constant.has_value());
  const auto fit = fit_tail(sol.u, 50.0, 100.0);
  CHECK(std::abs(fit.fitted_exponent / pred.beta - 1.0) <= 0.10);
  CHECK(fit.fitted_exponent <= 4.0 * 1.05);

  const double C = *pred.sharp_constant;
  const auto& G = sol.u.g();
  for (int i = 0; i < sol.u.size(); ++i) {
    const double r = G.nodes[i];
    if (r < 50.0 || r > 100.0) continue;
    CHECK(std::abs(sol.u.values()[i] * std::pow(r, pred.beta) / C - 1.0) <= 0.20);
  }

  SUBCASE("bound ordering on [70, 100]") {
    const auto bc = bound_constants(sol, kappa_star(1.7, 1.0, sol.params.nonlinearity.k_f()));
    for (int i = 0; i < sol.u.size(); ++i) {
      const double r = G.nodes[i];
      if (r < 70.0 || r > 100.0) continue;
      const double prod = sol.u.values()[i] * std::pow(r, pred.beta);
      CHECK(bc.C_lower <= prod);
      CHECK(prod <= bc.C_upper * 1.2);
    }
  }
  SUBCASE("chain rule with theta = 2 - r") {
    const auto rep = verify_chain_rule(sol.u, 2.0 - 1.7, {0.01, 0.1, 1.0, 5.0, 20.0, 100.0, 500.0},
                                       0.5);
    CHECK(rep.pass);
  }
  SUBCASE("Riesz tail") {
    const auto rep = verify_riesz_tail(sol, 5.0, 20.0, 100.0);
    CHECK(std::isfinite(rep.sup_D));
    CHECK(rep.non_increasing_tail);
    CHECK(std::abs(rep.normalized_at_hi / sol.mass_F - 1.0) <= 0.05);
  }
}

TEST_CASE("end to end at r = 1.9") {
  const Solution& sol = solved(1.9);
  const auto pred = predict_decay(sol);
  CHECK(pred.regime == DecayRegime::laplacian_dominated);
  CHECK_FALSE(pred.sharp_constant.has_value());
  const auto fit = fit_tail(sol.u);
  CHECK(std::abs(fit.fitted_exponent / 4.0 - 1.0) <= 0.10);
  CHECK(verify_chain_rule(sol.u, 0.1, {0.1, 1.0, 10.0, 100.0}, 0.5).pass);
}

}  // TEST_SUITE
