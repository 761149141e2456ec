#include "choquard/specfun.hpp"

#include <array>
#include <cmath>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "choquard/error.hpp"

namespace choquard::specfun {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Defining series of 2F1 for |z| <= 2/3.
double series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  int small = 0;
  for (int n = 0; n < 20000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (++small == 2) return sum;
    } else {
      small = 0;
    }
    if (term == 0.0) return sum;
  }
  throw ConvergenceError("hyp2f1: series did not converge");
}

// 1/x connection formula, a - b not an integer.
double connection_generic(double a, double b, double c, double x) {
  const double w = 1.0 / x;
  const double gc = std::tgamma(c);
  const double t1 = gc * std::tgamma(b - a) * rgamma(b) * rgamma(c - a) * std::pow(-x, -a) *
                    series(a, a - c + 1.0, a - b + 1.0, w);
  const double t2 = gc * std::tgamma(a - b) * rgamma(a) * rgamma(c - b) * std::pow(-x, -b) *
                    series(b, b - c + 1.0, b - a + 1.0, w);
  return t1 + t2;
}

// Logarithmic limit of the connection formula when b = a + m, m = 0, 1, 2, ...
double connection_degenerate(double a, int m, double c, double x) {
  const double lz = std::log(-x);
  const double w = 1.0 / x;
  const double pre = std::pow(-x, -a);

  double s1 = 0.0;
  if (m > 0) {
    double poch = 1.0;  // (a)_k
    double wk = 1.0;    // w^k
    double fact_k = 1.0;
    for (int k = 0; k < m; ++k) {
      s1 += poch * std::tgamma(m - k) / fact_k * rgamma(c - a - k) * wk;
      poch *= a + k;
      wk *= w;
      fact_k *= k + 1.0;
    }
    s1 *= rgamma(a + m);
  }

  // w^m (-1)^k w^k, accumulated as a single running factor.
  double factor = std::pow(w, m) * rgamma(a) / std::tgamma(m + 1.0);
  double s2 = 0.0;
  int small = 0;
  for (int k = 0; k < 20000; ++k) {
    const double arg = c - a - k - m;
    const double bracket =
        (lz + boost::math::digamma(k + 1.0) + boost::math::digamma(k + m + 1.0) -
         boost::math::digamma(a + k + m)) *
            rgamma(arg) -
        psi_over_gamma(arg);
    const double term = factor * bracket;
    s2 += term;
    if (std::abs(term) <= 1e-17 * std::abs(s2) && k > 2) {
      if (++small == 2) break;
    } else {
      small = 0;
    }
    factor *= -(a + m + k) / ((k + 1.0) * (k + m + 1.0)) * w;
    if (k == 19999) throw ConvergenceError("hyp2f1: logarithmic series did not converge");
  }
  return std::tgamma(c) * pre * (s1 + s2);
}

}  // namespace

double gamma_real(double x) {
  if (is_nonpositive_integer(x)) throw PoleError("gamma_real: pole at " + std::to_string(x));
  return std::tgamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return std::exp(-std::lgamma(x));
  return 1.0 / std::tgamma(x);
}

double digamma(double x) {
  if (is_nonpositive_integer(x)) throw PoleError("digamma: pole at " + std::to_string(x));
  return boost::math::digamma(x);
}

double psi_over_gamma(double x) {
  if (is_nonpositive_integer(x)) {
    const double n = -x;
    const double sign = (static_cast<long>(n) % 2 == 0) ? -1.0 : 1.0;
    return sign * std::tgamma(n + 1.0);
  }
  return boost::math::digamma(x) * rgamma(x);
}

double hyp2f1(double a, double b, double c, double x) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0))
    throw DomainError("hyp2f1: requires a, b, c > 0");
  if (!(x <= 0.0) || !std::isfinite(x)) throw DomainError("hyp2f1: requires finite x <= 0");
  if (x == 0.0) return 1.0;

  if (x >= -2.0) return std::pow(1.0 - x, -a) * series(a, c - b, c, x / (x - 1.0));

  const double d = a - b;
  const double m = std::round(d);
  const double delta = d - m;
  if (std::abs(delta) <= 1e-12) {
    return m >= 0 ? connection_degenerate(b, static_cast<int>(m), c, x)
                  : connection_degenerate(a, static_cast<int>(-m), c, x);
  }
  if (std::abs(delta) < 1e-4) {
    // Interpolate in b through the degenerate point and generic neighbours.
    const double b0 = a - m;
    const double eps = 2e-3;
    std::array<int, 5> js{-2, -1, 0, 1, 2};
    if (b0 - 2.0 * eps <= 0.0) js = {0, 1, 2, 3, 4};
    std::array<double, 5> f{};
    for (int i = 0; i < 5; ++i) f[i] = hyp2f1(a, b0 + js[i] * eps, c, x);
    const double t = (b - b0) / eps;
    double out = 0.0;
    for (int i = 0; i < 5; ++i) {
      double l = 1.0;
      for (int k = 0; k < 5; ++k)
        if (k != i) l *= (t - js[k]) / double(js[i] - js[k]);
      out += l * f[i];
    }
    return out;
  }
  return connection_generic(a, b, c, x);
}

double sphere_area(int N) {
  if (N < 1) throw DomainError("sphere_area: N must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * N) / std::tgamma(0.5 * N);
}

double riesz_constant(int N, double alpha) {
  if (N < 1 || !(alpha > 0.0 && alpha < N))
    throw DomainError("riesz_constant: requires 0 < alpha < N");
  return std::tgamma(0.5 * (N - alpha)) /
         (std::pow(2.0, alpha) * std::pow(kPi, 0.5 * N) * std::tgamma(0.5 * alpha));
}

double frac_laplacian_constant(int N, double s) {
  if (N < 1 || !(s > 0.0 && s < 1.0))
    throw DomainError("frac_laplacian_constant: requires 0 < s < 1");
  return std::pow(4.0, s) * std::tgamma(0.5 * N + s) /
         (std::pow(kPi, 0.5 * N) * std::abs(std::tgamma(-s)));
}

void ProfileParams::validate() const {
  if (N < 2) throw DomainError("ProfileParams: N must be >= 2");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("ProfileParams: s must lie in (0,1)");
  if (!(beta > 0.0 && beta <= N + 2.0 * s + 1e-12))
    throw DomainError("ProfileParams: beta must lie in (0, N+2s]");
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::above_N: return "above_N";
    case Regime::equal_N: return "equal_N";
    case Regime::between: return "between";
    case Regime::equal_N_minus_2s: return "equal_N_minus_2s";
    case Regime::below_N_minus_2s: return "below_N_minus_2s";
  }
  return "unknown";
}

double AsymptoticLaw::leading(double r) const {
  const double p = constant * std::pow(r, -exponent);
  return has_log_factor ? p * std::log(r) : p;
}

double AsymptoticLaw::model(double r) const {
  switch (regime) {
    case Regime::equal_N:
      return constant * (std::log(r) + log_shift) * std::pow(r, -exponent);
    case Regime::equal_N_minus_2s:
      return constant * h_beta_eval(r, exponent);
    default:
      return constant * std::pow(r, -exponent) +
             subleading_constant * std::pow(r, -subleading_exponent);
  }
}

Regime classify_regime(const ProfileParams& p) {
  const double N = p.N;
  const double b = p.beta;
  if (std::abs(b - N) <= kRegimeSnap) return Regime::equal_N;
  if (std::abs(b - (N - 2.0 * p.s)) <= kRegimeSnap) return Regime::equal_N_minus_2s;
  if (b > N) return Regime::above_N;
  if (b > N - 2.0 * p.s) return Regime::between;
  return Regime::below_N_minus_2s;
}

double h_beta_eval(double r, double beta) { return std::pow(1.0 + r * r, -0.5 * beta); }

double frac_lap_h_prefactor(const ProfileParams& p) {
  p.validate();
  const double N2 = 0.5 * p.N;
  return std::pow(2.0, 2.0 * p.s) * std::tgamma(N2 + p.s) * std::tgamma(0.5 * p.beta + p.s) /
         (std::tgamma(N2) * std::tgamma(0.5 * p.beta));
}

namespace {

// Restrictions under which the large-argument expansion of 2F1(a,b;c;-x^2)
// splits into the five profile regimes.
void check_expansion_restrictions(double a, double b, double c) {
  auto near_int = [](double v) { return std::abs(v - std::round(v)) <= 1e-9; };
  const double ac = a - c;
  if (!(ac > 0.0) || near_int(ac))
    throw DomainError("profile expansion: a - c must be positive and non-integer");
  if (near_int(a - b) && std::round(a - b) < 0)
    throw DomainError("profile expansion: integer a - b must be non-negative");
  const double bc = b - c;
  if (near_int(bc) && bc > 0.5 && std::round(bc) > 1)
    throw DomainError("profile expansion: integer b - c must be 0 or 1");
}

}  // namespace

double frac_lap_h_exact(double r, const ProfileParams& p) {
  if (!(r >= 0.0)) throw DomainError("frac_lap_h_exact: r must be >= 0");
  const double pre = frac_lap_h_prefactor(p);
  const double N2 = 0.5 * p.N;
  return pre * hyp2f1(N2 + p.s, 0.5 * p.beta + p.s, N2, -r * r);
}

AsymptoticLaw frac_lap_h_asymptotic(const ProfileParams& p) {
  p.validate();
  const double N = p.N;
  const double s = p.s;
  const double N2 = 0.5 * N;
  const double b2 = 0.5 * p.beta;
  const double a = N2 + s;
  const double b = b2 + s;
  check_expansion_restrictions(a, b, N2);

  const double four_s = std::pow(2.0, 2.0 * s);
  AsymptoticLaw law;
  law.regime = classify_regime(p);
  switch (law.regime) {
    case Regime::above_N:
      law.exponent = N + 2.0 * s;
      law.constant = four_s * std::tgamma(a) * std::tgamma(b2 - N2) /
                     (std::tgamma(b2) * std::tgamma(-s));
      law.subleading_exponent = p.beta + 2.0 * s;
      law.subleading_constant =
          four_s * std::tgamma(b) * std::tgamma(a - b) * rgamma(N2 - b) / std::tgamma(b2);
      break;
    case Regime::equal_N:
      law.exponent = N + 2.0 * s;
      law.has_log_factor = true;
      law.constant = 2.0 * four_s * std::tgamma(a) / (std::tgamma(N2) * std::tgamma(-s));
      law.log_shift = -0.5772156649015329 - 0.5 * (digamma(a) + digamma(-s));
      break;
    case Regime::equal_N_minus_2s:
      law.exponent = N + 2.0 * s;
      law.constant = four_s * std::tgamma(a) / std::tgamma(N2 - s);
      break;
    case Regime::between:
    case Regime::below_N_minus_2s: {
      law.exponent = p.beta + 2.0 * s;
      law.constant = four_s * std::tgamma(b) * std::tgamma(N2 - b2) /
                     (std::tgamma(b2) * gamma_real(N2 - b2 - s));
      law.subleading_exponent = N + 2.0 * s;
      // Gamma(b - a) has a pole when beta = N - 2k; the correction there is
      // logarithmic and is left out.
      const double ba = b - a;
      law.subleading_constant =
          is_nonpositive_integer(std::round(ba)) && std::abs(ba - std::round(ba)) < 1e-9
              ? 0.0
              : four_s * std::tgamma(a) * std::tgamma(ba) * rgamma(N2 - a) / std::tgamma(b2);
      break;
    }
  }
  return law;
}

}  // namespace choquard::specfun
