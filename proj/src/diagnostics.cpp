#include "bayesxg/bayes/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bayesxg/errors.hpp"

namespace bayesxg::bayes {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Halved chains: C chains of length n become 2C of length n/2.
std::vector<Eigen::VectorXd> split_chains(const PosteriorSamples& samples,
                                          int param) {
  if (samples.n_chains() < 2) {
    throw InsufficientDrawsError("diagnostics need at least 2 chains");
  }
  if (samples.retained_per_chain() < 100) {
    throw InsufficientDrawsError("diagnostics need at least 100 retained draws");
  }
  if (param < 0 || param >= static_cast<int>(samples.param_names.size())) {
    throw std::out_of_range("parameter index out of range");
  }
  const int half = samples.retained_per_chain() / 2;
  std::vector<Eigen::VectorXd> halves;
  halves.reserve(static_cast<std::size_t>(2 * samples.n_chains()));
  for (const auto& chain : samples.chains) {
    halves.push_back(chain.col(param).head(half));
    halves.push_back(chain.col(param).tail(half));
  }
  return halves;
}

struct Variances {
  double within = 0.0;    // W
  double between = 0.0;   // B
  double var_plus = 0.0;  // marginal posterior variance estimate
  int n = 0;              // per-half-chain length
  int m = 0;              // number of half chains
};

Variances chain_variances(const std::vector<Eigen::VectorXd>& halves) {
  Variances v;
  v.m = static_cast<int>(halves.size());
  v.n = static_cast<int>(halves.front().size());
  Eigen::VectorXd means(v.m);
  double within = 0.0;
  for (int c = 0; c < v.m; ++c) {
    means(c) = halves[static_cast<std::size_t>(c)].mean();
    within += (halves[static_cast<std::size_t>(c)].array() - means(c))
                  .square()
                  .sum() /
              static_cast<double>(v.n - 1);
  }
  v.within = within / v.m;
  const double grand = means.mean();
  v.between = static_cast<double>(v.n) *
              (means.array() - grand).square().sum() /
              static_cast<double>(v.m - 1);
  v.var_plus = (static_cast<double>(v.n - 1) / v.n) * v.within + v.between / v.n;
  return v;
}

}  // namespace

double rhat(const PosteriorSamples& samples, int param) {
  const auto halves = split_chains(samples, param);
  const Variances v = chain_variances(halves);
  if (!(v.within > 0.0) || !std::isfinite(v.within)) return kNaN;
  return std::sqrt(v.var_plus / v.within);
}

double ess(const PosteriorSamples& samples, int param) {
  const auto halves = split_chains(samples, param);
  const Variances v = chain_variances(halves);
  if (!(v.within > 0.0) || !std::isfinite(v.var_plus)) return kNaN;

  const int n = v.n;
  const int m = v.m;

  // Mean autocovariance across chains at each lag (biased 1/n scaling).
  std::vector<Eigen::VectorXd> centered;
  centered.reserve(static_cast<std::size_t>(m));
  for (const auto& h : halves) centered.push_back(h.array() - h.mean());
  auto mean_acov = [&](int lag) {
    double sum = 0.0;
    for (const auto& x : centered) {
      double dot = 0.0;
      for (int i = 0; i + lag < n; ++i) dot += x(i) * x(i + lag);
      sum += dot / n;
    }
    return sum / m;
  };

  // Geyer initial monotone sequence over paired correlations
  // (rho_0 + rho_1), (rho_2 + rho_3), ...: accumulate while positive,
  // enforcing non-increasing pair sums.
  double tau = -1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (int lag = 0; lag + 1 < n; lag += 2) {
    const double rho_even =
        lag == 0 ? 1.0 : 1.0 - (v.within - mean_acov(lag)) / v.var_plus;
    const double rho_odd = 1.0 - (v.within - mean_acov(lag + 1)) / v.var_plus;
    double pair = rho_even + rho_odd;
    if (!(pair > 0.0)) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    tau += 2.0 * pair;
    if (lag > n / 2) break;
  }
  tau = std::max(tau, 0.01);  // antithetic draws can push tau near zero
  return static_cast<double>(m) * n / tau;
}

double rhat(const PosteriorSamples& samples, const std::string& param) {
  return rhat(samples, samples.param_index(param));
}

double ess(const PosteriorSamples& samples, const std::string& param) {
  return ess(samples, samples.param_index(param));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

std::vector<ParamSummary> summarize(const PosteriorSamples& samples) {
  std::vector<ParamSummary> out;
  const Eigen::MatrixXd all = samples.stacked();
  out.reserve(samples.param_names.size());
  for (int j = 0; j < static_cast<int>(samples.param_names.size()); ++j) {
    ParamSummary s;
    s.name = samples.param_names[static_cast<std::size_t>(j)];
    s.mean = all.col(j).mean();
    s.sd = std::sqrt((all.col(j).array() - s.mean).square().sum() /
                     static_cast<double>(all.rows() - 1));
    std::vector<double> col(all.col(j).data(), all.col(j).data() + all.rows());
    s.q05 = quantile(col, 0.05);
    s.q50 = quantile(col, 0.50);
    s.q95 = quantile(col, 0.95);
    s.rhat = rhat(samples, j);
    s.ess = ess(samples, j);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace bayesxg::bayes
