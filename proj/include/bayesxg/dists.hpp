#pragma once

#include <string>
#include <variant>

#include "bayesxg/rng.hpp"

namespace bayesxg::dists {

struct Normal {
  double mu = 0.0;
  double sigma = 1.0;
};

struct SkewNormal {
  double mu = 0.0;
  double sigma = 1.0;
  double alpha = 0.0;
};

/// Folded standard normal scaled by gamma; support x >= 0.
struct HalfNormal {
  double gamma = 1.0;
};

struct Uniform {
  double a = 0.0;
  double b = 1.0;
};

using PriorDist = std::variant<Normal, SkewNormal, HalfNormal, Uniform>;

/// Throws std::invalid_argument when scale/shape parameters are invalid
/// (sigma <= 0, gamma <= 0, a >= b).
void validate(const PriorDist& dist);

/// Log density at x; -inf outside the support.
double log_pdf(const PriorDist& dist, double x);

/// d/dx log density. x must be strictly inside the support
/// (OutsideSupportError otherwise).
double grad_log_pdf(const PriorDist& dist, double x);

/// d/dscale log density at fixed x: sigma for normal and skew-normal,
/// gamma for half-normal. Uniform has no scale; throws.
double grad_log_pdf_scale(const PriorDist& dist, double x);

double sample(const PriorDist& dist, Rng& rng);

/// Compact text form, e.g. "skew_normal(0,5,-2)"; used in manifests.
std::string describe(const PriorDist& dist);

// Shared numeric kernels.

/// log of the standard normal density.
double log_std_normal_pdf(double z);

/// log Phi(t), stable for large negative t (asymptotic series past -20).
double log_std_normal_cdf(double t);

/// phi(t) / Phi(t); switches to an asymptotic expansion for t < -8 where
/// the direct ratio degenerates to 0/0.
double mills_ratio(double t);

}  // namespace bayesxg::dists
