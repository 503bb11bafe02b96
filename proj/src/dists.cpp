#include "bayesxg/dists.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bayesxg/errors.hpp"

namespace bayesxg::dists {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.9189385332046727417803297364056;  // log(sqrt(2*pi))
constexpr double kLogTwo = 0.6931471805599453094172321214582;

// Asymptotic series for Phi(t) ~ phi(t)/(-t) * S(t), t -> -inf.
// S(t) = 1 - 1/t^2 + 3/t^4 - 15/t^6 + 105/t^8
double tail_series(double t) {
  const double inv2 = 1.0 / (t * t);
  return 1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * 105.0)));
}

}  // namespace

double log_std_normal_pdf(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

double log_std_normal_cdf(double t) {
  if (t > -20.0) {
    return std::log(0.5 * std::erfc(-t * M_SQRT1_2));
  }
  return log_std_normal_pdf(t) - std::log(-t) + std::log(tail_series(t));
}

double mills_ratio(double t) {
  if (t > -8.0) {
    return std::exp(log_std_normal_pdf(t) - log_std_normal_cdf(t));
  }
  return -t / tail_series(t);
}

void validate(const PriorDist& dist) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          if (!(d.sigma > 0.0)) throw std::invalid_argument("normal: sigma must be > 0");
        } else if constexpr (std::is_same_v<T, SkewNormal>) {
          if (!(d.sigma > 0.0)) throw std::invalid_argument("skew_normal: sigma must be > 0");
        } else if constexpr (std::is_same_v<T, HalfNormal>) {
          if (!(d.gamma > 0.0)) throw std::invalid_argument("half_normal: gamma must be > 0");
        } else {
          if (!(d.a < d.b)) throw std::invalid_argument("uniform: requires a < b");
        }
      },
      dist);
}

double log_pdf(const PriorDist& dist, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          const double z = (x - d.mu) / d.sigma;
          return log_std_normal_pdf(z) - std::log(d.sigma);
        } else if constexpr (std::is_same_v<T, SkewNormal>) {
          const double z = (x - d.mu) / d.sigma;
          return kLogTwo + log_std_normal_pdf(z) - std::log(d.sigma) +
                 log_std_normal_cdf(d.alpha * z);
        } else if constexpr (std::is_same_v<T, HalfNormal>) {
          if (x < 0.0) return kNegInf;
          const double z = x / d.gamma;
          return kLogTwo + log_std_normal_pdf(z) - std::log(d.gamma);
        } else {
          if (x < d.a || x > d.b) return kNegInf;
          return -std::log(d.b - d.a);
        }
      },
      dist);
}

double grad_log_pdf(const PriorDist& dist, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return -(x - d.mu) / (d.sigma * d.sigma);
        } else if constexpr (std::is_same_v<T, SkewNormal>) {
          const double z = (x - d.mu) / d.sigma;
          return -z / d.sigma + (d.alpha / d.sigma) * mills_ratio(d.alpha * z);
        } else if constexpr (std::is_same_v<T, HalfNormal>) {
          if (!(x > 0.0)) throw OutsideSupportError("half_normal gradient needs x > 0");
          return -x / (d.gamma * d.gamma);
        } else {
          if (!(x > d.a && x < d.b)) {
            throw OutsideSupportError("uniform gradient needs a < x < b");
          }
          return 0.0;
        }
      },
      dist);
}

double grad_log_pdf_scale(const PriorDist& dist, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          const double z = (x - d.mu) / d.sigma;
          return (z * z - 1.0) / d.sigma;
        } else if constexpr (std::is_same_v<T, SkewNormal>) {
          const double z = (x - d.mu) / d.sigma;
          return (z * z - 1.0) / d.sigma -
                 (d.alpha * z / d.sigma) * mills_ratio(d.alpha * z);
        } else if constexpr (std::is_same_v<T, HalfNormal>) {
          if (x < 0.0) throw OutsideSupportError("half_normal scale gradient needs x >= 0");
          const double z = x / d.gamma;
          return (z * z - 1.0) / d.gamma;
        } else {
          throw std::invalid_argument("uniform distribution has no scale parameter");
        }
      },
      dist);
}

double sample(const PriorDist& dist, Rng& rng) {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return d.mu + d.sigma * rng.normal();
        } else if constexpr (std::is_same_v<T, SkewNormal>) {
          // Conditioning construction: with (X, Y) standard bivariate normal
          // at correlation delta, X | Y > 0 is skew-normal with shape alpha.
          const double delta = d.alpha / std::sqrt(1.0 + d.alpha * d.alpha);
          const double y = rng.normal();
          const double x = delta * y + std::sqrt(1.0 - delta * delta) * rng.normal();
          return d.mu + d.sigma * (y > 0.0 ? x : -x);
        } else if constexpr (std::is_same_v<T, HalfNormal>) {
          return d.gamma * std::fabs(rng.normal());
        } else {
          return rng.uniform(d.a, d.b);
        }
      },
      dist);
}

std::string describe(const PriorDist& dist) {
  std::ostringstream out;
  std::visit(
      [&out](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Normal>) {
          out << "normal(" << d.mu << "," << d.sigma << ")";
        } else if constexpr (std::is_same_v<T, SkewNormal>) {
          out << "skew_normal(" << d.mu << "," << d.sigma << "," << d.alpha << ")";
        } else if constexpr (std::is_same_v<T, HalfNormal>) {
          out << "half_normal(" << d.gamma << ")";
        } else {
          out << "uniform(" << d.a << "," << d.b << ")";
        }
      },
      dist);
  return out.str();
}

}  // namespace bayesxg::dists
