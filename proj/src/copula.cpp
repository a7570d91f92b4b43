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

#include "copulaboost/copula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "copulaboost/errors.hpp"
#include "copulaboost/special.hpp"

namespace copulaboost::copula {

namespace {

using special::norm_cdf;
using special::norm_quantile;

constexpr double kTauLimit = 0.95;
constexpr double kTauFloor = 1e-5;
constexpr double kLogFloor = -700.0;  // log of a vanishing likelihood term
constexpr double kMinCell = 1e-12;

// log(e^la + e^lb - 1) for la, lb >= 0.
double clayton_log_s(double la, double lb) {
  const double m = std::max(la, lb);
  if (m < 30.0) return std::log1p(std::expm1(la) + std::expm1(lb));
  return m + std::log(std::exp(la - m) + std::exp(lb - m) - std::exp(-m));
}

// (x^t + y^t)^(1/t) without overflow.
double gumbel_a(double x, double y, double theta) {
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  if (hi <= 0.0) return 0.0;
  return hi * std::pow(1.0 + std::pow(lo / hi, theta), 1.0 / theta);
}

double safe_log(double x) {
  return x > 0.0 ? std::max(std::log(x), kLogFloor) : kLogFloor;
}

void check_unit(double u, const char* what) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error(std::string(what) + " outside [0, 1]");
  }
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Independence:
      return "independence";
    case Family::Gaussian:
      return "gaussian";
    case Family::Clayton:
      return "clayton";
    case Family::Gumbel:
      return "gumbel";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  for (Family f : {Family::Independence, Family::Gaussian, Family::Clayton,
                   Family::Gumbel}) {
    if (lower == family_name(f)) return f;
  }
  if (lower == "indep" || lower == "i") return Family::Independence;
  if (lower == "normal" || lower == "n") return Family::Gaussian;
  throw std::invalid_argument("unknown copula family: " + std::string(name));
}

int parameter_count(Family family) {
  return family == Family::Independence ? 0 : 1;
}

std::vector<Family> default_candidates() {
  return {Family::Independence, Family::Gaussian, Family::Clayton,
          Family::Gumbel};
}

double tau_to_parameter(Family family, double tau) {
  switch (family) {
    case Family::Independence:
      return 0.0;
    case Family::Gaussian:
      if (!(tau > -1.0 && tau < 1.0)) {
        throw std::domain_error("gaussian tau must lie in (-1, 1)");
      }
      return std::sin(special::kPi * tau / 2.0);
    case Family::Clayton:
      if (!(tau > 0.0 && tau < 1.0)) {
        throw std::domain_error("clayton tau must lie in (0, 1)");
      }
      return 2.0 * tau / (1.0 - tau);
    case Family::Gumbel:
      if (!(tau >= 0.0 && tau < 1.0)) {
        throw std::domain_error("gumbel tau must lie in [0, 1)");
      }
      return 1.0 / (1.0 - tau);
  }
  return 0.0;
}

double parameter_to_tau(Family family, double parameter) {
  switch (family) {
    case Family::Independence:
      return 0.0;
    case Family::Gaussian:
      if (!(parameter > -1.0 && parameter < 1.0)) {
        throw std::domain_error("gaussian rho must lie in (-1, 1)");
      }
      return 2.0 / special::kPi * std::asin(parameter);
    case Family::Clayton:
      if (!(parameter > 0.0)) {
        throw std::domain_error("clayton theta must be positive");
      }
      return parameter / (parameter + 2.0);
    case Family::Gumbel:
      if (!(parameter >= 1.0)) {
        throw std::domain_error("gumbel theta must be at least 1");
      }
      return 1.0 - 1.0 / parameter;
  }
  return 0.0;
}

BivariateCopula::BivariateCopula(Family family, double parameter, int rotation)
    : family_(family), parameter_(parameter), rotation_(rotation) {
  if (rotation != 0 && rotation != 90) {
    throw std::invalid_argument("rotation must be 0 or 90");
  }
  switch (family) {
    case Family::Independence:
      parameter_ = 0.0;
      rotation_ = 0;
      break;
    case Family::Gaussian:
      if (!(parameter > -1.0 && parameter < 1.0)) {
        throw std::invalid_argument("gaussian rho must lie in (-1, 1)");
      }
      rotation_ = 0;
      break;
    case Family::Clayton:
      if (!(parameter > 0.0 && std::isfinite(parameter))) {
        throw std::invalid_argument("clayton theta must be positive");
      }
      break;
    case Family::Gumbel:
      if (!(parameter >= 1.0 && std::isfinite(parameter))) {
        throw std::invalid_argument("gumbel theta must be at least 1");
      }
      break;
  }
}

BivariateCopula BivariateCopula::from_tau(Family family, double tau) {
  switch (family) {
    case Family::Independence:
      return {};
    case Family::Gaussian:
      return {family, tau_to_parameter(family, tau)};
    case Family::Clayton:
    case Family::Gumbel:
      if (tau == 0.0) {
        return family == Family::Gumbel ? BivariateCopula(family, 1.0)
                                        : BivariateCopula();
      }
      return {family, tau_to_parameter(family, std::fabs(tau)),
              tau < 0.0 ? 90 : 0};
  }
  return {};
}

double BivariateCopula::tau() const {
  const double t = parameter_to_tau(family_, parameter_);
  return rotation_ == 90 ? -t : t;
}

double BivariateCopula::base_cdf(double a, double b) const {
  switch (family_) {
    case Family::Independence:
      return a * b;
    case Family::Gaussian:
      return special::binorm_cdf(norm_quantile(a), norm_quantile(b),
                                 parameter_);
    case Family::Clayton: {
      const double la = -parameter_ * std::log(a);
      const double lb = -parameter_ * std::log(b);
      return std::exp(-clayton_log_s(la, lb) / parameter_);
    }
    case Family::Gumbel:
      return std::exp(-gumbel_a(-std::log(a), -std::log(b), parameter_));
  }
  return 0.0;
}

double BivariateCopula::base_pdf(double a, double b) const {
  switch (family_) {
    case Family::Independence:
      return 1.0;
    case Family::Gaussian: {
      const double x = norm_quantile(a);
      const double y = norm_quantile(b);
      const double r2 = parameter_ * parameter_;
      return std::exp(-(r2 * (x * x + y * y) - 2.0 * parameter_ * x * y) /
                      (2.0 * (1.0 - r2))) /
             std::sqrt(1.0 - r2);
    }
    case Family::Clayton: {
      const double t = parameter_;
      const double la = -t * std::log(a);
      const double lb = -t * std::log(b);
      const double ls = clayton_log_s(la, lb);
      return std::exp(std::log1p(t) + (1.0 + 1.0 / t) * (la + lb) -
                      (1.0 / t + 2.0) * ls);
    }
    case Family::Gumbel: {
      const double t = parameter_;
      const double x = -std::log(a);
      const double y = -std::log(b);
      const double big_a = gumbel_a(x, y, t);
      return std::exp(-big_a + (t - 1.0) * (std::log(x) + std::log(y)) + x +
                      y + (1.0 - 2.0 * t) * std::log(big_a) +
                      std::log(big_a + t - 1.0));
    }
  }
  return 1.0;
}

double BivariateCopula::base_h(double a, double b) const {
  switch (family_) {
    case Family::Independence:
      return a;
    case Family::Gaussian: {
      const double s = std::sqrt(1.0 - parameter_ * parameter_);
      return norm_cdf((norm_quantile(a) - parameter_ * norm_quantile(b)) / s);
    }
    case Family::Clayton: {
      const double t = parameter_;
      const double la = -t * std::log(a);
      const double lb = -t * std::log(b);
      return std::exp((1.0 + 1.0 / t) * (lb - clayton_log_s(la, lb)));
    }
    case Family::Gumbel: {
      const double t = parameter_;
      const double x = -std::log(a);
      const double y = -std::log(b);
      const double big_a = gumbel_a(x, y, t);
      return std::exp(-big_a + (1.0 - t) * std::log(big_a) +
                      (t - 1.0) * std::log(y) + y);
    }
  }
  return a;
}

double BivariateCopula::base_h_inverse(double w, double b) const {
  switch (family_) {
    case Family::Independence:
      return w;
    case Family::Gaussian: {
      const double s = std::sqrt(1.0 - parameter_ * parameter_);
      return norm_cdf(norm_quantile(w) * s + parameter_ * norm_quantile(b));
    }
    case Family::Clayton: {
      const double t = parameter_;
      const double lb = -t * std::log(b);
      const double q = -t / (t + 1.0) * std::log(w);
      const double log_a_pow = lb + std::log(std::expm1(q) + std::exp(-lb));
      return std::exp(-log_a_pow / t);
    }
    case Family::Gumbel: {
      // base_h is increasing in a; bisect on log(a).
      double lo = -745.0;
      double hi = 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(lo));
           ++it) {
        const double mid = 0.5 * (lo + hi);
        if (base_h(std::exp(mid), b) < w) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return std::exp(0.5 * (lo + hi));
    }
  }
  return w;
}

double BivariateCopula::cdf(double u, double v) const {
  check_unit(u, "u");
  check_unit(v, "v");
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return v;
  if (v >= 1.0) return u;
  if (rotation_ == 90) {
    return std::clamp(v - base_cdf(1.0 - u, v), 0.0, std::min(u, v));
  }
  return std::clamp(base_cdf(u, v), 0.0, std::min(u, v));
}

double BivariateCopula::pdf(double u, double v) const {
  check_unit(u, "u");
  check_unit(v, "v");
  u = clamp_unit(u);
  v = clamp_unit(v);
  return rotation_ == 90 ? base_pdf(1.0 - u, v) : base_pdf(u, v);
}

double BivariateCopula::cond_first(double u, double v) const {
  check_unit(u, "u");
  check_unit(v, "v");
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  v = clamp_unit(v);
  const double h = rotation_ == 90 ? 1.0 - base_h(clamp_unit(1.0 - u), v)
                                   : base_h(clamp_unit(u), v);
  return std::clamp(h, 0.0, 1.0);
}

double BivariateCopula::cond_second(double u, double v) const {
  check_unit(u, "u");
  check_unit(v, "v");
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  u = clamp_unit(u);
  const double h = rotation_ == 90 ? base_h(clamp_unit(v), clamp_unit(1.0 - u))
                                   : base_h(clamp_unit(v), u);
  return std::clamp(h, 0.0, 1.0);
}

double BivariateCopula::cond_first_inverse(double w, double v) const {
  w = clamp_unit(w);
  v = clamp_unit(v);
  if (rotation_ == 90) return 1.0 - base_h_inverse(1.0 - w, v);
  return base_h_inverse(w, v);
}

double BivariateCopula::cond_second_inverse(double u, double w) const {
  w = clamp_unit(w);
  u = clamp_unit(u);
  if (rotation_ == 90) return base_h_inverse(w, clamp_unit(1.0 - u));
  return base_h_inverse(w, u);
}

double copula_cdf(const BivariateCopula& c, double u, double v) {
  return c.cdf(u, v);
}

double copula_pdf(const BivariateCopula& c, double u, double v) {
  return c.pdf(u, v);
}

namespace {

// Difference quotient over a discrete cell; cells narrower than kMinCell fall
// back to the derivative, which is the limit of the quotient.
double cell_quotient_first(const BivariateCopula& c, double u, double v,
                           double v_minus) {
  const double width = v - v_minus;
  if (width < kMinCell) return c.cond_first(u, v);
  return std::clamp((c.cdf(u, v) - c.cdf(u, v_minus)) / width, 0.0, 1.0);
}

double cell_quotient_second(const BivariateCopula& c, double u, double u_minus,
                            double v) {
  const double width = u - u_minus;
  if (width < kMinCell) return c.cond_second(u, v);
  return std::clamp((c.cdf(u, v) - c.cdf(u_minus, v)) / width, 0.0, 1.0);
}

}  // namespace

double h_function(const BivariateCopula& c, double u_target,
                  const Conditioning& cond) {
  check_unit(u_target, "u");
  check_unit(cond.v, "v");
  if (!cond.is_discrete) return c.cond_first(u_target, cond.v);
  check_unit(cond.v_minus, "v_minus");
  if (!(cond.v_minus < cond.v)) {
    throw std::invalid_argument("degenerate discrete cell: v_minus >= v");
  }
  return cell_quotient_first(c, u_target, cond.v, cond.v_minus);
}

double h_function_second(const BivariateCopula& c, double v_target,
                         const Conditioning& cond) {
  check_unit(v_target, "v");
  check_unit(cond.v, "u");
  if (!cond.is_discrete) return c.cond_second(cond.v, v_target);
  check_unit(cond.v_minus, "u_minus");
  if (!(cond.v_minus < cond.v)) {
    throw std::invalid_argument("degenerate discrete cell: u_minus >= u");
  }
  return cell_quotient_second(c, cond.v, cond.v_minus, v_target);
}

namespace {

// Results are clamped to the interior, except that exact boundary targets map
// to themselves so that F(0 | .) = 0 and F(1 | .) = 1 survive a recursion.
double settle(double target, double value) {
  return target == 0.0 || target == 1.0 ? target : clamp_unit(value);
}

PitPair finish(const PitPair& target, double u, double u_minus) {
  u = settle(target.u, u);
  if (!target.is_discrete) return PitPair::continuous(u);
  u_minus = std::min(settle(target.u_minus, u_minus), u);
  return PitPair::discrete(u, u_minus);
}

}  // namespace

PitPair condition_first(const BivariateCopula& c, const PitPair& target,
                        const PitPair& given) {
  auto map = [&](double u) {
    return given.is_discrete
               ? cell_quotient_first(c, u, given.u, given.u_minus)
               : c.cond_first(u, given.u);
  };
  const double u = map(target.u);
  const double u_minus = target.is_discrete ? map(target.u_minus) : u;
  return finish(target, u, u_minus);
}

PitPair condition_second(const BivariateCopula& c, const PitPair& given,
                         const PitPair& target) {
  auto map = [&](double v) {
    return given.is_discrete
               ? cell_quotient_second(c, given.u, given.u_minus, v)
               : c.cond_second(given.u, v);
  };
  const double v = map(target.u);
  const double v_minus = target.is_discrete ? map(target.u_minus) : v;
  return finish(target, v, v_minus);
}

FirstConditional::FirstConditional(const BivariateCopula& c, const PitPair& given)
    : c_(c), given_(given) {
  check_unit(given.u, "v");
  if (given.is_discrete) return;
  const double v = clamp_unit(given.u);
  const double t = c.parameter();
  switch (c.family()) {
    case Family::Independence:
      break;
    case Family::Gaussian:
      k0_ = t * norm_quantile(v);
      k1_ = std::sqrt(1.0 - t * t);
      break;
    case Family::Clayton:
      k0_ = -t * std::log(v);
      k1_ = std::expm1(k0_);
      break;
    case Family::Gumbel:
      k0_ = -std::log(v);
      k1_ = (t - 1.0) * std::log(k0_) + k0_;
      break;
  }
}

double FirstConditional::base(double a) const {
  const double t = c_.parameter();
  switch (c_.family()) {
    case Family::Independence:
      return a;
    case Family::Gaussian:
      return norm_cdf((norm_quantile(a) - k0_) / k1_);
    case Family::Clayton: {
      const double la = -t * std::log(a);
      const double ls = std::max(la, k0_) < 30.0 ? std::log1p(std::expm1(la) + k1_)
                                                 : clayton_log_s(la, k0_);
      return std::exp((1.0 + 1.0 / t) * (k0_ - ls));
    }
    case Family::Gumbel: {
      const double big_a = gumbel_a(-std::log(a), k0_, t);
      return std::exp(-big_a + (1.0 - t) * std::log(big_a) + k1_);
    }
  }
  return a;
}

double FirstConditional::map(double u) const {
  if (given_.is_discrete) return cell_quotient_first(c_, u, given_.u, given_.u_minus);
  check_unit(u, "u");
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double h = c_.rotation() == 90 ? 1.0 - base(clamp_unit(1.0 - u)) : base(clamp_unit(u));
  return std::clamp(h, 0.0, 1.0);
}

PitPair FirstConditional::operator()(const PitPair& target) const {
  const double u = map(target.u);
  const double u_minus = target.is_discrete ? map(target.u_minus) : u;
  return finish(target, u, u_minus);
}

double pair_log_likelihood(const BivariateCopula& c, const PseudoObs& o) {
  if (!o.u_discrete && !o.v_discrete) return safe_log(c.pdf(o.u, o.v));
  if (o.u_discrete && !o.v_discrete) {
    return safe_log(c.cond_first(o.u, o.v) - c.cond_first(o.u_minus, o.v));
  }
  if (!o.u_discrete && o.v_discrete) {
    return safe_log(c.cond_second(o.u, o.v) - c.cond_second(o.u, o.v_minus));
  }
  return safe_log(c.cdf(o.u, o.v) - c.cdf(o.u_minus, o.v) -
                  c.cdf(o.u, o.v_minus) + c.cdf(o.u_minus, o.v_minus));
}

double pair_log_likelihood(const BivariateCopula& c,
                           std::span<const PseudoObs> obs) {
  double ll = 0.0;
  for (const auto& o : obs) ll += pair_log_likelihood(c, o);
  return ll;
}

namespace {

bool constant_first(std::span<const PseudoObs> obs) {
  return std::all_of(obs.begin(), obs.end(), [&](const PseudoObs& o) {
    return o.u == obs[0].u && o.u_minus == obs[0].u_minus;
  });
}

bool constant_second(std::span<const PseudoObs> obs) {
  return std::all_of(obs.begin(), obs.end(), [&](const PseudoObs& o) {
    return o.v == obs[0].v && o.v_minus == obs[0].v_minus;
  });
}

struct TauSearch {
  double tau = 0.0;
  double log_likelihood = -std::numeric_limits<double>::infinity();
  bool converged = true;
};

// Maximises the log-likelihood over tau in [lo, hi]; `make` maps tau to a copula.
template <typename Make>
TauSearch maximise_over_tau(std::span<const PseudoObs> obs, double lo,
                            double hi, Make make) {
  auto objective = [&](double tau) {
    const double ll = pair_log_likelihood(make(tau), obs);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
  };
  constexpr int kBits = 28;  // relative tolerance ~1e-8 on tau
  const std::uintmax_t max_iter = 200;
  std::uintmax_t iter = max_iter;
  const auto [tau, neg_ll] =
      boost::math::tools::brent_find_minima(objective, lo, hi, kBits, iter);
  return {tau, -neg_ll, iter < max_iter};
}

PairFit finish_fit(const BivariateCopula& c, double ll, bool converged) {
  PairFit fit;
  fit.copula = c;
  fit.log_likelihood = ll;
  fit.aic = 2.0 * c.parameter_count() - 2.0 * ll;
  fit.converged = converged;
  if (!converged) fit.note = "tau search hit the iteration limit";
  return fit;
}

}  // namespace

PairFit fit_pair(std::span<const PseudoObs> obs, Family family) {
  if (obs.size() < kMinPairObservations) {
    throw std::invalid_argument("fit_pair needs at least 10 observations");
  }
  for (const auto& o : obs) {
    check_unit(o.u, "u");
    check_unit(o.v, "v");
    check_unit(o.u_minus, "u_minus");
    check_unit(o.v_minus, "v_minus");
  }
  if (constant_first(obs) || constant_second(obs)) {
    const BivariateCopula indep;
    PairFit fit = finish_fit(indep, pair_log_likelihood(indep, obs), true);
    fit.note = "constant coordinate; independence used";
    return fit;
  }
  switch (family) {
    case Family::Independence: {
      const BivariateCopula indep;
      return finish_fit(indep, pair_log_likelihood(indep, obs), true);
    }
    case Family::Gaussian: {
      const auto best = maximise_over_tau(
          obs, -kTauLimit, kTauLimit,
          [](double tau) { return BivariateCopula::from_tau(Family::Gaussian, tau); });
      return finish_fit(BivariateCopula::from_tau(Family::Gaussian, best.tau),
                        best.log_likelihood, best.converged);
    }
    case Family::Clayton:
    case Family::Gumbel: {
      const auto plain = maximise_over_tau(
          obs, kTauFloor, kTauLimit,
          [family](double tau) { return BivariateCopula::from_tau(family, tau); });
      const auto rotated = maximise_over_tau(
          obs, kTauFloor, kTauLimit, [family](double tau) {
            return BivariateCopula::from_tau(family, -tau);
          });
      if (rotated.log_likelihood > plain.log_likelihood) {
        return finish_fit(BivariateCopula::from_tau(family, -rotated.tau),
                          rotated.log_likelihood, rotated.converged);
      }
      return finish_fit(BivariateCopula::from_tau(family, plain.tau),
                        plain.log_likelihood, plain.converged);
    }
  }
  throw std::invalid_argument("unknown family");
}

PairFit select_family(std::span<const PseudoObs> obs,
                      std::span<const Family> candidates) {
  if (candidates.empty()) {
    throw std::invalid_argument("select_family needs at least one candidate");
  }
  PairFit best;
  bool have = false;
  std::string failures;
  for (Family f : candidates) {
    try {
      PairFit fit = fit_pair(obs, f);
      if (!have || fit.aic < best.aic) {
        best = std::move(fit);
        have = true;
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      failures += std::string(family_name(f)) + ": " + e.what() + "; ";
    }
  }
  if (!have) throw NumericError("no candidate family could be fitted: " + failures);
  return best;
}

}  // namespace copulaboost::copula
