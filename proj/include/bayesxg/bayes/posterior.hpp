#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "bayesxg/bayes/model.hpp"

namespace bayesxg::bayes {

/// Differentiable log density for the sampler, in an unconstrained space.
class Target {
public:
  virtual ~Target() = default;
  virtual int dim() const = 0;
  /// Log density at z; fills grad (same length as z).
  virtual double log_density(const Eigen::VectorXd& z,
                             Eigen::VectorXd& grad) const = 0;
};

/// Log posterior of a hierarchical xG model bound to a design matrix and
/// outcomes.
///
/// Two coordinate systems:
///  - the reported ("natural") parameter vector
///      [beta_0, beta_1..beta_p, u_1..u_K, log_sigma_g]
///    with group offsets u_k given skew-normal(0, sigma_g, alpha_k) priors
///    and sigma_g a half-normal(gamma) hyperprior plus the log-space
///    change-of-variable term. log_posterior / grad_log_posterior work here.
///  - the sampler space: group offsets are non-centered (u = sigma_g * u~)
///    to avoid funnel geometry, and coefficients under bounded uniform
///    priors are logit-interval transformed so Hamiltonian trajectories
///    never leave the support. Jacobian terms are included.
class Posterior : public Target {
public:
  Posterior(ModelSpec spec, const features::DesignMatrix& design,
            Eigen::VectorXd outcomes);

  int dim() const override { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& param_names() const { return names_; }
  int n_coef() const { return n_coef_; }
  int n_groups() const { return n_groups_; }
  bool grouped() const { return n_groups_ > 0; }
  const ModelSpec& spec() const { return spec_; }

  double log_posterior(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd grad_log_posterior(const Eigen::VectorXd& theta) const;

  /// Sampler-space density with analytic gradient (Target interface).
  double log_density(const Eigen::VectorXd& z, Eigen::VectorXd& grad) const override;

  /// Map sampler coordinates to the natural parameter vector and back.
  Eigen::VectorXd constrain(const Eigen::VectorXd& z) const;
  Eigen::VectorXd unconstrain(const Eigen::VectorXd& theta) const;

private:
  ModelSpec spec_;
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  Eigen::VectorXi group_index_;
  std::vector<std::string> names_;
  int n_coef_ = 0;    // intercept + columns
  int n_groups_ = 0;  // K, 0 when ungrouped

  struct IntervalTransform {
    int coef = -1;  // 0 = intercept, 1.. = columns
    double a = 0.0;
    double b = 0.0;
  };
  std::vector<IntervalTransform> intervals_;  // one per uniform-prior coefficient
  bool has_interval(int coef, const IntervalTransform** t) const;
};

}  // namespace bayesxg::bayes
