// Copyright 2026 The copulaboost Authors.
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

// Bivariate parametric copulas: evaluation, conditioning (h-functions),
// Kendall's tau parameterisation, maximum likelihood on mixed
// discrete/continuous pseudo-observations and AIC family selection.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "copulaboost/pit.hpp"

namespace copulaboost::copula {

enum class Family { Independence, Gaussian, Clayton, Gumbel };

std::string_view family_name(Family family);
// Accepts the names produced by family_name (case-insensitive).
Family parse_family(std::string_view name);
int parameter_count(Family family);

std::vector<Family> default_candidates();

// Parameter <-> Kendall's tau. Clayton and Gumbel only cover tau in (0, 1);
// negative dependence is represented by rotating the copula (see below).
double tau_to_parameter(Family family, double tau);
double parameter_to_tau(Family family, double parameter);

// A single-parameter copula, optionally rotated by 90 degrees:
//   C_90(u, v) = v - C(1 - u, v).
class BivariateCopula {
 public:
  BivariateCopula() = default;  // independence
  BivariateCopula(Family family, double parameter, int rotation = 0);

  // Signed tau; tau < 0 selects the 90 degree rotation for Clayton/Gumbel.
  static BivariateCopula from_tau(Family family, double tau);

  Family family() const { return family_; }
  double parameter() const { return parameter_; }
  int rotation() const { return rotation_; }
  int parameter_count() const { return copula::parameter_count(family_); }
  double tau() const;

  double cdf(double u, double v) const;
  double pdf(double u, double v) const;

  // P(U <= u | V = v) = dC(u, v)/dv.
  double cond_first(double u, double v) const;
  // P(V <= v | U = u) = dC(u, v)/du.
  double cond_second(double u, double v) const;

  // Inverses in the conditioned argument: returns u with cond_first(u, v) = w,
  // and v with cond_second(u, v) = w respectively.
  double cond_first_inverse(double w, double v) const;
  double cond_second_inverse(double u, double w) const;

  bool operator==(const BivariateCopula&) const = default;

 private:
  double base_cdf(double a, double b) const;
  double base_pdf(double a, double b) const;
  double base_h(double a, double b) const;  // P(A <= a | B = b)
  double base_h_inverse(double w, double b) const;

  Family family_ = Family::Independence;
  double parameter_ = 0.0;
  int rotation_ = 0;
};

// Spec-level free functions.
double copula_cdf(const BivariateCopula& c, double u, double v);
double copula_pdf(const BivariateCopula& c, double u, double v);

// Conditioning argument of an h-function: a continuous value, or a discrete
// cell (v_minus, v].
struct Conditioning {
  double v = 0.5;
  double v_minus = 0.5;
  bool is_discrete = false;
};

// Conditional distribution of the first copula argument given the second:
// dC(u, v)/dv for continuous conditioning, otherwise the difference quotient
// (C(u, v) - C(u, v_minus)) / (v - v_minus).
double h_function(const BivariateCopula& c, double u_target,
                  const Conditioning& cond);
// Same, for the second argument given the first.
double h_function_second(const BivariateCopula& c, double v_target,
                         const Conditioning& cond);

// Propagate a (possibly discrete) PIT pair through one conditioning step.
// `condition_first` conditions the first copula argument on the second;
// `condition_second` the reverse. Both ends of a discrete target are mapped.
PitPair condition_first(const BivariateCopula& c, const PitPair& target,
                        const PitPair& given);
PitPair condition_second(const BivariateCopula& c, const PitPair& given,
                         const PitPair& target);

// condition_first(c, ., given) with the transforms of the conditioning value
// computed once; for repeated use against a fixed conditioning PIT.
class FirstConditional {
 public:
  FirstConditional(const BivariateCopula& c, const PitPair& given);

  PitPair operator()(const PitPair& target) const;

 private:
  double map(double u) const;
  double base(double a) const;

  BivariateCopula c_;
  PitPair given_;
  double k0_ = 0.0;  // family-specific transforms of the conditioning value
  double k1_ = 0.0;
};

struct PseudoObs {
  double u = 0.5;
  double u_minus = 0.5;
  double v = 0.5;
  double v_minus = 0.5;
  bool u_discrete = false;
  bool v_discrete = false;

  static PseudoObs from(const PitPair& first, const PitPair& second) {
    return {first.u, first.u_minus, second.u, second.u_minus,
            first.is_discrete, second.is_discrete};
  }
};

// Log-likelihood contribution of one observation: density for two continuous
// coordinates, h-difference for mixed, rectangle probability for two discrete.
double pair_log_likelihood(const BivariateCopula& c, const PseudoObs& obs);
double pair_log_likelihood(const BivariateCopula& c,
                           std::span<const PseudoObs> obs);

struct PairFit {
  BivariateCopula copula;
  double log_likelihood = 0.0;
  double aic = 0.0;
  bool converged = true;
  std::string note;  // empty unless something unusual happened
};

inline constexpr std::size_t kMinPairObservations = 10;

// Maximum likelihood for one family, optimising over tau in [-0.95, 0.95].
// For Clayton and Gumbel both the plain and the 90 degree rotated copula are
// fitted and the better one is kept.
PairFit fit_pair(std::span<const PseudoObs> obs, Family family);

// Fits every candidate and returns the one with the smallest AIC. Candidates
// whose fit throws are skipped.
PairFit select_family(std::span<const PseudoObs> obs,
                      std::span<const Family> candidates);

}  // namespace copulaboost::copula
