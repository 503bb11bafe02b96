#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

#include "bayesxg/features.hpp"

namespace bayesxg::glm {

struct Coefficients {
  double intercept = 0.0;
  Eigen::VectorXd betas;            // aligned to DesignMatrix columns
  std::vector<std::string> names;   // column names, same order
  bool converged = false;
  bool separation = false;          // step norms diverged; partial fit
  int iterations = 0;
  double log_likelihood = 0.0;      // unpenalized Bernoulli log-likelihood
};

struct FitOptions {
  double ridge = 1e-6;       // L2 on non-intercept coefficients
  double score_tol = 1e-8;   // max |gradient of penalized log-likelihood|
  double rel_ll_tol = 1e-10;
  int max_iter = 100;
};

/// Newton-Raphson / IRLS maximum likelihood for logistic regression. The
/// intercept is handled internally; `design` carries only the predictors.
/// Outcomes must be 0/1. Throws RankDeficientError when the weighted normal
/// equations are not solvable; quasi-separation is reported through the
/// `separation` / `converged` flags rather than thrown.
Coefficients fit_logistic(const features::DesignMatrix& design,
                          const Eigen::VectorXd& outcomes,
                          const FitOptions& options = {});

/// Inverse-logit predictions, overflow-safe, strictly inside (0, 1).
/// Throws ColumnMismatchError when the design columns do not match the fit.
Eigen::VectorXd predict_proba(const Coefficients& coefs,
                              const features::DesignMatrix& design);

double inverse_logit(double eta);

/// Bernoulli log-likelihood of probabilities p against outcomes y.
double bernoulli_log_likelihood(const Eigen::VectorXd& p,
                                const Eigen::VectorXd& y);

/// Serialize a fit (coefficient names, values, standardization metadata)
/// for reuse by the analysis commands.
void save_coefficients_json(const Coefficients& coefs,
                            const features::DesignMatrix& design,
                            const std::filesystem::path& path);

struct StoredFit {
  Coefficients coefs;
  std::vector<features::Column> columns;  // standardization metadata
};

StoredFit load_coefficients_json(const std::filesystem::path& path);

}  // namespace bayesxg::glm
