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

// Univariate and bivariate standard normal distribution functions.

#pragma once

namespace copulaboost::special {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

double norm_pdf(double x);
double norm_cdf(double x);

// Inverse of norm_cdf (Wichura's AS 241, about 1e-16 relative accuracy).
// Returns -inf / +inf at p == 0 / p == 1.
double norm_quantile(double p);

// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho.
// Uses Genz's BVND (Drezner-Wesolowsky with Gauss-Legendre refinement).
double binorm_cdf(double h, double k, double rho);

}  // namespace copulaboost::special
