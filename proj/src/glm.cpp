#include "bayesxg/glm.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "bayesxg/errors.hpp"

namespace bayesxg::glm {

double inverse_logit(double eta) {
  double p;
  if (eta >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-eta));
  } else {
    const double e = std::exp(eta);
    p = e / (1.0 + e);
  }
  // Keep predictions strictly inside (0, 1).
  const double eps = 1e-300;
  const double one_minus = 1.0 - 1e-16;
  return std::fmin(one_minus, std::fmax(eps, p));
}

double bernoulli_log_likelihood(const Eigen::VectorXd& p,
                                const Eigen::VectorXd& y) {
  if (p.size() != y.size()) {
    throw LengthMismatchError("probability and outcome vectors differ in length");
  }
  double ll = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    ll += y(i) > 0.5 ? std::log(p(i)) : std::log1p(-p(i));
  }
  return ll;
}

Coefficients fit_logistic(const features::DesignMatrix& design,
                          const Eigen::VectorXd& outcomes,
                          const FitOptions& options) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (outcomes.size() != n) {
    throw LengthMismatchError("outcome vector length does not match design rows");
  }
  if (n < p + 1) {
    throw RankDeficientError("fewer rows than coefficients");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (outcomes(i) != 0.0 && outcomes(i) != 1.0) {
      throw std::invalid_argument("outcomes must be 0 or 1");
    }
  }

  // Work with an explicit intercept column in slot 0.
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd prob(n), w(n);

  Coefficients out;
  out.names.reserve(design.columns.size());
  for (const auto& c : design.columns) out.names.push_back(c.name);

  auto penalized_ll = [&](const Eigen::VectorXd& b, const Eigen::VectorXd& e) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      // log-likelihood term via softplus: y*eta - log(1 + exp(eta))
      const double soft = e(i) > 0.0 ? e(i) + std::log1p(std::exp(-e(i)))
                                     : std::log1p(std::exp(e(i)));
      ll += outcomes(i) * e(i) - soft;
    }
    ll -= 0.5 * options.ridge * b.tail(p).squaredNorm();
    return ll;
  };

  double ll_old = penalized_ll(beta, eta);
  // Linear predictors this large carry no curvature; the step sequence is
  // running away along a separating direction.
  const double eta_diverged = 300.0;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    out.iterations = iter;
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = inverse_logit(eta(i));
      w(i) = prob(i) * (1.0 - prob(i));
    }
    Eigen::VectorXd resid = outcomes - prob;

    // Score of the penalized log-likelihood.
    Eigen::VectorXd score(p + 1);
    score(0) = resid.sum();
    score.tail(p) = design.X.transpose() * resid - options.ridge * beta.tail(p);

    if (score.lpNorm<Eigen::Infinity>() < options.score_tol) {
      out.converged = true;
      break;
    }

    // Weighted normal equations over [1 X].
    Eigen::MatrixXd hess(p + 1, p + 1);
    hess(0, 0) = w.sum();
    Eigen::VectorXd xw = design.X.transpose() * w;
    hess.block(1, 0, p, 1) = xw;
    hess.block(0, 1, 1, p) = xw.transpose();
    hess.block(1, 1, p, p) =
        design.X.transpose() * w.asDiagonal() * design.X +
        options.ridge * Eigen::MatrixXd::Identity(p, p);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw RankDeficientError("weighted normal equations are singular");
    }
    Eigen::VectorXd step = ldlt.solve(score);
    if (!step.allFinite()) {
      throw RankDeficientError("non-finite Newton step");
    }

    Eigen::VectorXd beta_new = beta + step;
    Eigen::VectorXd eta_new =
        Eigen::VectorXd::Constant(n, beta_new(0)) + design.X * beta_new.tail(p);
    double ll_new = penalized_ll(beta_new, eta_new);

    // Step-halving keeps Newton monotone on awkward subsets.
    int halvings = 0;
    while (ll_new < ll_old && halvings < 30) {
      step *= 0.5;
      beta_new = beta + step;
      eta_new = Eigen::VectorXd::Constant(n, beta_new(0)) +
                design.X * beta_new.tail(p);
      ll_new = penalized_ll(beta_new, eta_new);
      ++halvings;
    }

    beta = beta_new;
    eta = eta_new;

    if (eta.lpNorm<Eigen::Infinity>() > eta_diverged) {
      out.separation = true;
      out.converged = false;
      break;
    }
    if (std::fabs(ll_new - ll_old) <
        options.rel_ll_tol * (std::fabs(ll_new) + 1.0)) {
      out.converged = true;
      ll_old = ll_new;
      break;
    }
    ll_old = ll_new;
  }

  out.intercept = beta(0);
  out.betas = beta.tail(p);
  for (Eigen::Index i = 0; i < n; ++i) prob(i) = inverse_logit(eta(i));
  out.log_likelihood = bernoulli_log_likelihood(prob, outcomes);
  return out;
}

Eigen::VectorXd predict_proba(const Coefficients& coefs,
                              const features::DesignMatrix& design) {
  if (coefs.betas.size() != design.cols()) {
    throw ColumnMismatchError("coefficient count does not match design columns");
  }
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    if (design.columns[static_cast<std::size_t>(j)].name !=
        coefs.names[static_cast<std::size_t>(j)]) {
      throw ColumnMismatchError("design column order differs from fit: " +
                                design.columns[static_cast<std::size_t>(j)].name);
    }
  }
  Eigen::VectorXd eta =
      Eigen::VectorXd::Constant(design.rows(), coefs.intercept) +
      design.X * coefs.betas;
  Eigen::VectorXd prob(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) prob(i) = inverse_logit(eta(i));
  return prob;
}

void save_coefficients_json(const Coefficients& coefs,
                            const features::DesignMatrix& design,
                            const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["intercept"] = coefs.intercept;
  doc["converged"] = coefs.converged;
  doc["separation"] = coefs.separation;
  doc["iterations"] = coefs.iterations;
  doc["log_likelihood"] = coefs.log_likelihood;
  nlohmann::json cols = nlohmann::json::array();
  for (std::size_t j = 0; j < coefs.names.size(); ++j) {
    const auto& c = design.columns[j];
    cols.push_back({{"name", c.name},
                    {"value", coefs.betas(static_cast<Eigen::Index>(j))},
                    {"continuous", c.continuous},
                    {"mean", c.mean},
                    {"sd", c.sd}});
  }
  doc["coefficients"] = cols;
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << doc.dump(2) << '\n';
}

StoredFit load_coefficients_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed coefficients JSON in " + path.string() + ": " +
                     e.what());
  }
  StoredFit fit;
  try {
    fit.coefs.intercept = doc.at("intercept").get<double>();
    fit.coefs.converged = doc.at("converged").get<bool>();
    fit.coefs.separation = doc.value("separation", false);
    fit.coefs.iterations = doc.value("iterations", 0);
    fit.coefs.log_likelihood = doc.value("log_likelihood", 0.0);
    const auto& cols = doc.at("coefficients");
    fit.coefs.betas.resize(static_cast<Eigen::Index>(cols.size()));
    Eigen::Index j = 0;
    for (const auto& col : cols) {
      fit.coefs.names.push_back(col.at("name").get<std::string>());
      fit.coefs.betas(j++) = col.at("value").get<double>();
      features::Column meta;
      meta.name = fit.coefs.names.back();
      meta.continuous = col.value("continuous", false);
      meta.mean = col.value("mean", 0.0);
      meta.sd = col.value("sd", 1.0);
      fit.columns.push_back(std::move(meta));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad coefficients document " + path.string() + ": " +
                     e.what());
  }
  return fit;
}

}  // namespace bayesxg::glm
