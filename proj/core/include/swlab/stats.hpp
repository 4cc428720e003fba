// Copyright 2026 The swlab authors
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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swlab/green.hpp"

namespace swlab {

class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  // Sorts; censored observations are carried as a count, not values.
  explicit EmpiricalDistribution(std::vector<double> values, std::size_t censored = 0);

  std::size_t size() const { return values_.size(); }
  std::size_t censored() const { return censored_; }
  double censored_fraction() const;
  const std::vector<double>& values() const { return values_; }
  double survival(double t) const;  // fraction of observations > t
  double mean() const;
  double variance() const;

 private:
  std::vector<double> values_;
  std::size_t censored_ = 0;
};

// Survival S(t) = (1-atom) * exp(-t/theta): pure exponential when atom=0,
// otherwise an atom at zero plus an exponential tail.
struct LimitLaw {
  double atom = 0.0;
  double theta = 1.0;

  double survival(double t) const;
  static LimitLaw exponential(double theta);
  static LimitLaw with_atom(double atom, double theta);
};

// Limit of the rescaled meeting time T_L/(2L)^d. Distant starts: pure
// exponential with mean G^ev_B(0). Coinciding starts: atom 1 - 1/G_B(0)
// (the return probability of the pair's embedded difference chain; the
// even-visit count of that chain is G_B, not G^ev = G_B/2). Fixed x != 0:
// atom G^ev_B(x)/G^ev_B(0); pass the all-time DP sum from the lifted start
// divided by two (equals the continuous-time even constant).
LimitLaw meeting_law_distant(const GreenReport& green);
LimitLaw meeting_law_at_origin(const GreenReport& green);
LimitLaw meeting_law_fixed(const GreenReport& green, double g_even_x);

// Hitting versions carry G_B in place of G^ev_B.
LimitLaw hitting_law_distant(const GreenReport& green);
LimitLaw hitting_law_at_origin(const GreenReport& green);

// sup_t |empirical survival - S(t)|, compared at 0+ and at each sample
// point (exact for a step function against a continuous-with-atom law;
// observations equal to 0.0 carry the atom).
double ks_distance(const EmpiricalDistribution& emp, const LimitLaw& law);

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

// DKW band: eps(N, delta) = sqrt(ln(2/delta) / (2N)).
double dkw_epsilon(std::size_t n, double delta);
// Two-sample rejection threshold c(alpha)*sqrt((n+m)/(n*m)) with
// c(alpha) = sqrt(ln(2/alpha)/2).
double ks_two_sample_threshold(std::size_t n, std::size_t m, double alpha);

// Mean of exp(-lambda * value/scale) over uncensored observations, divided
// by the total count: censored mass contributes 0 (it is an exp(-lambda*T)
// lower bound for T past the horizon).
double empirical_laplace(const EmpiricalDistribution& emp, double lambda, double scale);
std::vector<double> empirical_laplace_curve(const EmpiricalDistribution& emp,
                                            std::span<const double> lambda_grid,
                                            double scale);

// Laplace-transform limits of the rescaled meeting time:
// (g_even_x + 1/lambda - [at_origin]/2) / (G^ev_B(0) + 1/lambda), with
// g_even_x -> 0 for distant starts. The at-origin subtrahend is 1/2, i.e.
// one even-time unit of the pair's difference chain.
double laplace_limit_distant(const GreenReport& green, double lambda);
double laplace_limit_at_origin(const GreenReport& green, double lambda);
double laplace_limit_fixed(const GreenReport& green, double g_even_x, double lambda);

double total_variation(std::span<const double> p, std::span<const double> q);

// Rescaled meeting-time constants on the plain torus, for report
// annotation only: T_L / (C_d * f_d(L)) converges with f=L^2, C=1/12 (d=1);
// f=L^2 log L, C=1/pi (d=2); f=L^d, C=G^ev_{Z^d}(0) (d>=3).
struct TorusReference {
  int d = 1;
  std::string scale;            // formula for f_d(L)
  std::string constant_name;
  std::optional<double> constant;  // numeric where closed-form or standard
};
TorusReference torus_meeting_reference(int d);

}  // namespace swlab
