#include "bayesxg/bayes/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "bayesxg/errors.hpp"
#include "bayesxg/glm.hpp"

namespace bayesxg::bayes {

PosteriorSamples fit(const ModelSpec& spec, const features::DesignMatrix& design,
                     const Eigen::VectorXd& outcomes, const SamplerConfig& config) {
  Posterior posterior(spec, design, outcomes);
  return run_hmc(posterior, config, posterior.param_names(),
                 [&posterior](const Eigen::VectorXd& z) {
                   return posterior.constrain(z);
                 });
}

PredictOutput posterior_predict(const PosteriorSamples& samples,
                                const features::DesignMatrix& design,
                                double interval) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (samples.param_names.empty() || samples.param_names.front() != "intercept" ||
      static_cast<Eigen::Index>(samples.param_names.size()) < p + 1) {
    throw ColumnMismatchError("samples do not contain model coefficients");
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (samples.param_names[static_cast<std::size_t>(j + 1)] !=
        design.columns[static_cast<std::size_t>(j)].name) {
      throw ColumnMismatchError(
          "design column does not match fitted parameter: " +
          design.columns[static_cast<std::size_t>(j)].name);
    }
  }

  const Eigen::MatrixXd all = samples.stacked();
  const Eigen::Index n_draws = all.rows();
  const Eigen::RowVectorXd intercept = all.col(0).transpose();
  const Eigen::MatrixXd betas = all.middleCols(1, p).transpose();  // p x D

  // Group offsets by design level; unseen levels predict with zero.
  const Eigen::Index n_levels =
      static_cast<Eigen::Index>(design.group_levels.size());
  Eigen::MatrixXd offsets;
  const bool grouped = design.group_index.size() == n && n_levels > 0;
  if (grouped) {
    offsets.setZero(n_levels, n_draws);
    for (Eigen::Index k = 0; k < n_levels; ++k) {
      const int idx = samples.param_index(
          "u[" + design.group_levels[static_cast<std::size_t>(k)] + "]");
      if (idx >= 0) offsets.row(k) = all.col(idx).transpose();
    }
  }

  PredictOutput out;
  out.mean.setZero(n);
  out.lower.setZero(n);
  out.upper.setZero(n);
  out.draw_mean.setZero(n_draws);

  const double lo_q = (1.0 - interval) / 2.0;
  const double hi_q = 1.0 - lo_q;
  const Eigen::Index block = 512;
  std::vector<double> row(static_cast<std::size_t>(n_draws));

  for (Eigen::Index start = 0; start < n; start += block) {
    const Eigen::Index len = std::min(block, n - start);
    Eigen::MatrixXd eta = design.X.middleRows(start, len) * betas;  // len x D
    eta.rowwise() += intercept;
    if (grouped) {
      for (Eigen::Index i = 0; i < len; ++i) {
        eta.row(i) += offsets.row(design.group_index(start + i));
      }
    }
    for (Eigen::Index i = 0; i < len; ++i) {
      double sum = 0.0;
      for (Eigen::Index d = 0; d < n_draws; ++d) {
        const double prob = glm::inverse_logit(eta(i, d));
        row[static_cast<std::size_t>(d)] = prob;
        sum += prob;
        out.draw_mean(d) += prob;
      }
      out.mean(start + i) = sum / static_cast<double>(n_draws);
      out.lower(start + i) = quantile(row, lo_q);
      out.upper(start + i) = quantile(row, hi_q);
    }
  }
  out.draw_mean /= static_cast<double>(n);
  return out;
}

void save_draws_csv(const PosteriorSamples& samples,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << "chain,draw";
  for (const auto& name : samples.param_names) out << ',' << name;
  out << '\n';
  char buf[40];
  for (int c = 0; c < samples.n_chains(); ++c) {
    const auto& chain = samples.chains[static_cast<std::size_t>(c)];
    for (Eigen::Index d = 0; d < chain.rows(); ++d) {
      out << c << ',' << d;
      for (Eigen::Index j = 0; j < chain.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", chain(d, j));
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

PosteriorSamples load_draws_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty draws CSV");

  PosteriorSamples samples;
  {
    std::stringstream header(line);
    std::string field;
    int idx = 0;
    while (std::getline(header, field, ',')) {
      if (idx >= 2) samples.param_names.push_back(field);
      ++idx;
    }
    if (idx < 3) throw ParseError("draws CSV header too short");
  }

  std::map<int, std::vector<std::vector<double>>> by_chain;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    std::vector<double> values;
    int chain = 0;
    int idx = 0;
    while (std::getline(row, field, ',')) {
      if (idx == 0) {
        chain = std::stoi(field);
      } else if (idx >= 2) {
        values.push_back(std::stod(field));
      }
      ++idx;
    }
    if (values.size() != samples.param_names.size()) {
      throw ParseError("draws CSV row width mismatch");
    }
    by_chain[chain].push_back(std::move(values));
  }
  for (auto& [chain, rows] : by_chain) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(samples.param_names.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
    samples.chains.push_back(std::move(m));
    samples.stats.push_back(ChainStats{});
  }
  samples.draws = samples.retained_per_chain();
  samples.warmup = 0;
  return samples;
}

}  // namespace bayesxg::bayes
