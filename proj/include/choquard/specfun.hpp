#pragma once

// Real special functions needed by the fractional Choquard toolkit:
// Gamma and digamma, the Gauss hypergeometric function on (-inf, 0],
// and the closed form of the fractional Laplacian of the profiles
//
//     h_beta(x) = (1 + |x|^2)^(-beta/2)
//
// together with the five asymptotic regimes of (-Delta)^s h_beta.

#include <string_view>

namespace choquard::specfun {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Gamma(x) for real x; throws PoleError at 0, -1, -2, ...
double gamma_real(double x);

/// 1/Gamma(x), equal to zero at the poles of Gamma.
double rgamma(double x);

/// Digamma psi(x); throws PoleError at the poles.
double digamma(double x);

/// psi(x)/Gamma(x), continuous through the poles where it equals (-1)^(n+1) n!.
double psi_over_gamma(double x);

/// Gauss hypergeometric 2F1(a, b; c; x) for a, b, c > 0 and x <= 0.
///
/// Uses the Pfaff-transformed defining series for x >= -2 and the 1/x
/// connection formula below that.  When a - b is an integer the connection
/// formula degenerates; the logarithmic limit form is used instead, and a
/// short interpolation in b bridges the near-degenerate band.
double hyp2f1(double a, double b, double c, double x);

/// Area of the unit sphere S^(N-1) in R^N.
double sphere_area(int N);

/// Normalisation of the Riesz potential I_alpha(x) = C_{N,alpha} |x|^(alpha-N).
double riesz_constant(int N, double alpha);

/// Normalisation C_{N,s} of the singular-integral form of (-Delta)^s.
double frac_laplacian_constant(int N, double s);

struct ProfileParams {
  int N = 3;
  double s = 0.5;
  double beta = 2.0;

  /// Throws DomainError unless N >= 2, 0 < s < 1 and 0 < beta <= N + 2s.
  void validate() const;
};

enum class Regime {
  above_N,           // beta in (N, N+2s]
  equal_N,           // beta == N, logarithmic factor
  between,           // beta in (N-2s, N)
  equal_N_minus_2s,  // beta == N-2s, exact identity
  below_N_minus_2s,  // beta in (0, N-2s)
};

std::string_view to_string(Regime regime);

/// Large-|x| behaviour of (-Delta)^s h_beta.
///
/// The leading law is `constant * r^-exponent` (times log r when
/// has_log_factor).  `model()` adds the next correction available in closed
/// form: the second power of the hypergeometric connection formula, the
/// constant companion `log_shift` of the logarithm in the equal_N case, and
/// the exact identity constant * h_{N+2s} in the equal_N_minus_2s case.
struct AsymptoticLaw {
  Regime regime = Regime::between;
  double exponent = 0.0;
  double constant = 0.0;
  bool has_log_factor = false;

  double log_shift = 0.0;
  double subleading_exponent = 0.0;
  double subleading_constant = 0.0;

  double leading(double r) const;
  double model(double r) const;
};

/// Tolerance used to snap beta onto N or N-2s when classifying regimes.
inline constexpr double kRegimeSnap = 1e-9;

Regime classify_regime(const ProfileParams& p);

double h_beta_eval(double r, double beta);

/// C_{beta,N,s} = 2^{2s} Gamma(N/2+s) Gamma(beta/2+s) / (Gamma(N/2) Gamma(beta/2)).
double frac_lap_h_prefactor(const ProfileParams& p);

/// (-Delta)^s h_beta at radius r, via C_{beta,N,s} 2F1(N/2+s, beta/2+s; N/2; -r^2).
double frac_lap_h_exact(double r, const ProfileParams& p);

AsymptoticLaw frac_lap_h_asymptotic(const ProfileParams& p);

}  // namespace choquard::specfun
