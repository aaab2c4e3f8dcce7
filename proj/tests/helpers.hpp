#pragma once

#include <random>
#include <vector>

#include "sgl/core.hpp"

namespace test_helpers {

inline sgl::Matrix random_matrix(int n, int p, std::mt19937_64& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  sgl::Matrix m(n, p);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < p; ++c) m(r, c) = gauss(eng);
  return m;
}

inline sgl::Vector random_vector(int n, std::mt19937_64& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  sgl::Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(eng);
  return v;
}

inline std::vector<int> cyclic_groups(int p, int g) {
  std::vector<int> a(p);
  for (int i = 0; i < p; ++i) a[i] = i % g;
  return a;
}

/// Random dense problem with a sparse planted signal so paths have structure.
inline sgl::ProblemData random_problem(int n, int p, int g,
                                       std::mt19937_64& eng) {
  sgl::Matrix x = random_matrix(n, p, eng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  sgl::Vector beta = sgl::Vector::Zero(p);
  for (int i = 0; i < p; i += 7) beta[i] = gauss(eng);
  sgl::Vector y = x * beta;
  for (int i = 0; i < n; ++i) y[i] += 0.01 * gauss(eng);
  return sgl::ProblemData{std::move(x), std::move(y),
                          sgl::GroupPartition(cyclic_groups(p, g), g)};
}

/// Uniform sample from the Euclidean ball of the given center and radius.
inline sgl::Vector sample_ball(const sgl::Vector& center, double radius,
                               std::mt19937_64& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  sgl::Vector d(center.size());
  for (int i = 0; i < d.size(); ++i) d[i] = gauss(eng);
  const double scale =
      radius * std::pow(unif(eng), 1.0 / static_cast<double>(d.size())) /
      std::max(d.norm(), 1e-300);
  return center + scale * d;
}

}  // namespace test_helpers
