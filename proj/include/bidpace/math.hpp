// Copyright 2025 The bidpace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BIDPACE_MATH_HPP
#define BIDPACE_MATH_HPP

#include <cstdint>
#include <random>

namespace bidpace {

/// Standard normal CDF, accurate to ~1e-15.
double norm_cdf(double x);

/// Inverse of norm_cdf on (0,1). |error| < 1e-10 over the open interval.
double norm_ppf(double p);

/// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double a, double b, double x);

/// CDF of Student's t distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

/// Two-sided critical value: the c > 0 with P(|T| > c) = alpha.
/// Returns +inf for alpha <= 0 and 0 for alpha >= 1.
double student_t_two_sided_critical(double dof, double alpha);

/// Two-sided p-value P(|T| >= |t|) under t_{dof}.
double student_t_two_sided_pvalue(double t, double dof);

/// Deterministic random source. All simulator randomness flows through one
/// instance so a fixed seed reproduces a run bit for bit. Normal deviates
/// use Box-Muller rather than std::normal_distribution, whose output is
/// implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform draw in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double normal();

  double lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * normal());
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bidpace

#endif  // BIDPACE_MATH_HPP
