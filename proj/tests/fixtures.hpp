#pragma once

#include <map>
#include <utility>

#include "choquard/solver.hpp"

namespace choquard::testing {

/// (N, alpha, s, mu) = (3, 2, 0.5, mu), homogeneous, default grid; cached per process.
inline const Solution& solved(double r, NonlinearitySpec::Convention c =
                                            NonlinearitySpec::Convention::sqrt_r,
                              double mu = 1.0) {
  static std::map<std::tuple<double, int, double>, Solution> cache;
  const auto key = std::make_tuple(r, static_cast<int>(c), mu);
  auto it = cache.find(key);
  if (it == cache.end()) {
    ProblemParams p;
    p.mu = mu;
    p.nonlinearity = NonlinearitySpec::homogeneous(r, c);
    it = cache.emplace(key, solve_ground_state(p, SolverOpts{})).first;
  }
  return it->second;
}

}  // namespace choquard::testing
