#include "bayesxg/bayes/posterior.hpp"

#include <cmath>

#include "bayesxg/errors.hpp"
#include "bayesxg/glm.hpp"

namespace bayesxg::bayes {

namespace {

double softplus(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double logit(double q) { return std::log(q / (1.0 - q)); }

// Prior gradient contribution for one coefficient; uniform priors are flat
// inside the support (and the interval transform keeps us there).
double prior_grad(const dists::PriorDist& prior, double value) {
  if (std::holds_alternative<dists::Uniform>(prior)) return 0.0;
  return dists::grad_log_pdf(prior, value);
}

}  // namespace

Posterior::Posterior(ModelSpec spec, const features::DesignMatrix& design,
                     Eigen::VectorXd outcomes)
    : spec_(std::move(spec)),
      X_(design.X),
      y_(std::move(outcomes)),
      group_index_(design.group_index) {
  const int p = static_cast<int>(X_.cols());
  if (y_.size() != X_.rows()) {
    throw DimensionMismatchError("outcomes length does not match design rows");
  }
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    if (y_(i) != 0.0 && y_(i) != 1.0) {
      throw DimensionMismatchError("outcomes must be 0/1");
    }
  }
  if (spec_.coef_priors.size() != static_cast<std::size_t>(p)) {
    throw DimensionMismatchError("one prior per design column required");
  }
  dists::validate(spec_.intercept_prior);
  for (const auto& prior : spec_.coef_priors) dists::validate(prior);

  n_coef_ = p + 1;
  names_.push_back("intercept");
  for (const auto& c : design.columns) names_.push_back(c.name);

  if (spec_.grouping != features::Grouping::none) {
    if (group_index_.size() != X_.rows()) {
      throw GroupMismatchError("design has no group index for grouped spec");
    }
    n_groups_ = static_cast<int>(design.group_levels.size());
    if (spec_.group_alpha.size() != static_cast<std::size_t>(n_groups_)) {
      throw DimensionMismatchError("one alpha per group level required");
    }
    for (const auto& level : design.group_levels) names_.push_back("u[" + level + "]");
    names_.push_back("log_sigma_group");
  }

  if (auto* u = std::get_if<dists::Uniform>(&spec_.intercept_prior)) {
    intervals_.push_back({0, u->a, u->b});
  }
  for (int j = 0; j < p; ++j) {
    if (auto* u = std::get_if<dists::Uniform>(&spec_.coef_priors[static_cast<std::size_t>(j)])) {
      intervals_.push_back({j + 1, u->a, u->b});
    }
  }
}

bool Posterior::has_interval(int coef, const IntervalTransform** t) const {
  for (const auto& iv : intervals_) {
    if (iv.coef == coef) {
      *t = &iv;
      return true;
    }
  }
  return false;
}

double Posterior::log_posterior(const Eigen::VectorXd& theta) const {
  if (theta.size() != dim()) {
    throw DimensionMismatchError("theta length does not match parameter count");
  }
  const int p = n_coef_ - 1;
  const double beta0 = theta(0);
  const auto beta = theta.segment(1, p);

  Eigen::VectorXd eta = Eigen::VectorXd::Constant(X_.rows(), beta0) + X_ * beta;
  if (grouped()) {
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      eta(i) += theta(n_coef_ + group_index_(i));
    }
  }
  double lp = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    lp += y_(i) * eta(i) - softplus(eta(i));
  }

  lp += dists::log_pdf(spec_.intercept_prior, beta0);
  for (int j = 0; j < p; ++j) {
    lp += dists::log_pdf(spec_.coef_priors[static_cast<std::size_t>(j)], beta(j));
  }

  if (grouped()) {
    const double log_sigma = theta(dim() - 1);
    const double sigma_g = std::exp(log_sigma);
    for (int k = 0; k < n_groups_; ++k) {
      lp += dists::log_pdf(
          dists::SkewNormal{0.0, sigma_g, spec_.group_alpha[static_cast<std::size_t>(k)]},
          theta(n_coef_ + k));
    }
    lp += dists::log_pdf(dists::HalfNormal{spec_.hyper_scale_gamma}, sigma_g);
    lp += log_sigma;  // change of variable to log space
  }
  return lp;
}

Eigen::VectorXd Posterior::grad_log_posterior(const Eigen::VectorXd& theta) const {
  if (theta.size() != dim()) {
    throw DimensionMismatchError("theta length does not match parameter count");
  }
  const int p = n_coef_ - 1;
  const double beta0 = theta(0);
  const auto beta = theta.segment(1, p);

  Eigen::VectorXd eta = Eigen::VectorXd::Constant(X_.rows(), beta0) + X_ * beta;
  if (grouped()) {
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      eta(i) += theta(n_coef_ + group_index_(i));
    }
  }
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    resid(i) = y_(i) - glm::inverse_logit(eta(i));
  }

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim());
  grad(0) = resid.sum() + dists::grad_log_pdf(spec_.intercept_prior, beta0);
  grad.segment(1, p) = X_.transpose() * resid;
  for (int j = 0; j < p; ++j) {
    grad(1 + j) +=
        dists::grad_log_pdf(spec_.coef_priors[static_cast<std::size_t>(j)], beta(j));
  }

  if (grouped()) {
    const double log_sigma = theta(dim() - 1);
    const double sigma_g = std::exp(log_sigma);
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      grad(n_coef_ + group_index_(i)) += resid(i);
    }
    double scale_grad = 0.0;
    for (int k = 0; k < n_groups_; ++k) {
      const dists::SkewNormal level_prior{
          0.0, sigma_g, spec_.group_alpha[static_cast<std::size_t>(k)]};
      grad(n_coef_ + k) += dists::grad_log_pdf(level_prior, theta(n_coef_ + k));
      scale_grad += dists::grad_log_pdf_scale(level_prior, theta(n_coef_ + k));
    }
    // d/dsigma of the half-normal hyperprior; finite down to sigma_g = 0.
    scale_grad += -sigma_g / (spec_.hyper_scale_gamma * spec_.hyper_scale_gamma);
    grad(dim() - 1) = scale_grad * sigma_g + 1.0;
  }
  return grad;
}

double Posterior::log_density(const Eigen::VectorXd& z, Eigen::VectorXd& grad) const {
  if (z.size() != dim()) {
    throw DimensionMismatchError("z length does not match parameter count");
  }
  const int p = n_coef_ - 1;
  grad.setZero(dim());

  // Coefficients in natural space plus transform bookkeeping.
  Eigen::VectorXd coef(n_coef_);
  Eigen::VectorXd dcoef_dz = Eigen::VectorXd::Ones(n_coef_);
  Eigen::VectorXd jac_grad = Eigen::VectorXd::Zero(n_coef_);
  double log_jacobian = 0.0;
  for (int c = 0; c < n_coef_; ++c) {
    const IntervalTransform* iv = nullptr;
    if (has_interval(c, &iv)) {
      const double q = glm::inverse_logit(z(c));
      coef(c) = iv->a + (iv->b - iv->a) * q;
      dcoef_dz(c) = (iv->b - iv->a) * q * (1.0 - q);
      log_jacobian += std::log(iv->b - iv->a) + std::log(q) + std::log1p(-q);
      jac_grad(c) = 1.0 - 2.0 * q;
    } else {
      coef(c) = z(c);
    }
  }
  const double beta0 = coef(0);
  const auto beta = coef.segment(1, p);

  double sigma_g = 0.0;
  Eigen::VectorXd eta = Eigen::VectorXd::Constant(X_.rows(), beta0) + X_ * beta;
  if (grouped()) {
    sigma_g = std::exp(z(dim() - 1));
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      eta(i) += sigma_g * z(n_coef_ + group_index_(i));
    }
  }

  double lp = 0.0;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    lp += y_(i) * eta(i) - softplus(eta(i));
    resid(i) = y_(i) - glm::inverse_logit(eta(i));
  }

  lp += dists::log_pdf(spec_.intercept_prior, beta0);
  for (int j = 0; j < p; ++j) {
    lp += dists::log_pdf(spec_.coef_priors[static_cast<std::size_t>(j)], coef(1 + j));
  }
  lp += log_jacobian;

  // Likelihood gradient in natural coefficient space.
  Eigen::VectorXd coef_grad(n_coef_);
  coef_grad(0) = resid.sum();
  coef_grad.segment(1, p) = X_.transpose() * resid;
  coef_grad(0) += prior_grad(spec_.intercept_prior, beta0);
  for (int j = 0; j < p; ++j) {
    coef_grad(1 + j) +=
        prior_grad(spec_.coef_priors[static_cast<std::size_t>(j)], coef(1 + j));
  }
  for (int c = 0; c < n_coef_; ++c) {
    grad(c) = coef_grad(c) * dcoef_dz(c) + jac_grad(c);
  }

  if (grouped()) {
    const double log_sigma = z(dim() - 1);
    double group_resid_dot = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      grad(n_coef_ + group_index_(i)) += sigma_g * resid(i);
      group_resid_dot += resid(i) * z(n_coef_ + group_index_(i));
    }
    for (int k = 0; k < n_groups_; ++k) {
      const dists::SkewNormal unit_prior{
          0.0, 1.0, spec_.group_alpha[static_cast<std::size_t>(k)]};
      lp += dists::log_pdf(unit_prior, z(n_coef_ + k));
      grad(n_coef_ + k) += dists::grad_log_pdf(unit_prior, z(n_coef_ + k));
    }
    const dists::HalfNormal hyper{spec_.hyper_scale_gamma};
    lp += dists::log_pdf(hyper, sigma_g) + log_sigma;
    const double hyper_grad =
        -sigma_g / (spec_.hyper_scale_gamma * spec_.hyper_scale_gamma);
    grad(dim() - 1) = sigma_g * group_resid_dot + hyper_grad * sigma_g + 1.0;
  }
  return lp;
}

Eigen::VectorXd Posterior::constrain(const Eigen::VectorXd& z) const {
  Eigen::VectorXd theta = z;
  for (const auto& iv : intervals_) {
    theta(iv.coef) = iv.a + (iv.b - iv.a) * glm::inverse_logit(z(iv.coef));
  }
  if (grouped()) {
    const double sigma_g = std::exp(z(dim() - 1));
    for (int k = 0; k < n_groups_; ++k) {
      theta(n_coef_ + k) = sigma_g * z(n_coef_ + k);
    }
  }
  return theta;
}

Eigen::VectorXd Posterior::unconstrain(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd z = theta;
  for (const auto& iv : intervals_) {
    const double q = (theta(iv.coef) - iv.a) / (iv.b - iv.a);
    z(iv.coef) = logit(q);
  }
  if (grouped()) {
    const double sigma_g = std::exp(theta(dim() - 1));
    for (int k = 0; k < n_groups_; ++k) {
      z(n_coef_ + k) = theta(n_coef_ + k) / sigma_g;
    }
  }
  return z;
}

}  // namespace bayesxg::bayes
