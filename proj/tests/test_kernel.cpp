#include <cmath>

#include "doctest.h"

#include "choquard/error.hpp"
#include "choquard/kernel.hpp"
#include "choquard/radial_function.hpp"
#include "choquard/specfun.hpp"

using namespace choquard;

TEST_SUITE("kernel") {

TEST_CASE("kernel at the origin is the sphere area times rho^p") {
  CHECK(angular_kernel(0.0, 2.0, -1.0, 3) == doctest::Approx(2.0 * specfun::kPi).epsilon(1e-14));
  CHECK(angular_kernel(0.0, 3.0, -0.5, 4) ==
        doctest::Approx(specfun::sphere_area(4) / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("symmetry in the two radii") {
  for (int N : {2, 3, 4, 5})
    for (double p : {-1.0, -3.5, 0.5, -N - 1.0})
      CHECK(angular_kernel(1.3, 0.7, p, N) ==
            doctest::Approx(angular_kernel(0.7, 1.3, p, N)).epsilon(1e-13));
}

TEST_CASE("N = 3 closed form for the Riesz exponent") {
  // 2 pi / (r rho (alpha-1)) [(r+rho)^{alpha-1} - |r-rho|^{alpha-1}] at alpha = 2
  CHECK(angular_kernel(1.0, 2.0, -1.0, 3) == doctest::Approx(2.0 * specfun::kPi).epsilon(1e-14));
}

TEST_CASE("general N against adaptive polar-angle quadrature (mpmath)") {
  CHECK(angular_kernel(1.0, 2.0, -1.0, 4) == doctest::Approx(9.5506929200133878327).epsilon(1e-12));
  CHECK(angular_kernel(0.3, 1.1, -0.5, 2) == doctest::Approx(6.0194766201204300722).epsilon(1e-12));
  CHECK(angular_kernel(0.5, 0.9, -2.5, 5) == doctest::Approx(32.815058804071851361).epsilon(1e-12));
}

TEST_CASE("singular diagonal") {
  CHECK_THROWS_AS(angular_kernel(1.0, 1.0, -4.0, 3), DomainError);
  CHECK_THROWS_AS(angular_kernel(1.0, 1.0, -2.0, 3), DomainError);
  // integrable for p > 1 - N
  CHECK(std::isfinite(angular_kernel(1.0, 1.0, -1.0, 3)));
}

TEST_CASE("log-radial kernel reflection") {
  for (int N : {2, 3, 4}) {
    for (double p : {-1.0, -N - 1.0, -N - 0.5}) {
      const LogKernel G(N, p);
      for (double t : {0.05, 0.4, 2.0, 6.0}) {
        CAPTURE(N);
        CAPTURE(p);
        CAPTURE(t);
        CHECK(G(-t) == doctest::Approx(std::exp(-(2.0 * N + p) * t) * G(t)).epsilon(1e-12));
        CHECK(G(t) == doctest::Approx(std::exp(N * t) * angular_kernel(1.0, std::exp(t), p, N))
                          .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("cached kernel table is symmetric and positive") {
  const auto grid = RadialGrid::logarithmic(3, 1e-2, 1e2, 40);
  for (double p : {-1.0, -4.0}) {
    const KernelCache kc = KernelCache::build(grid, p);
    for (int i = 0; i < grid->size(); ++i)
      for (int j = 0; j < grid->size(); ++j) {
        if (i == j && kc.singular_diagonal) continue;
        CHECK(kc.value(i, j) == kc.value(j, i));
        CHECK(kc.value(i, j) > 0.0);
      }
    if (kc.singular_diagonal) CHECK_THROWS_AS(kc.value(3, 3), DomainError);
  }
}

}  // TEST_SUITE
