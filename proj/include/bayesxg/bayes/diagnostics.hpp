#pragma once

#include <string>
#include <vector>

#include "bayesxg/bayes/hmc.hpp"

namespace bayesxg::bayes {

/// Split-chain potential scale reduction for one parameter. Returns NaN for
/// degenerate (constant) chains. Throws InsufficientDrawsError below
/// 2 chains or 100 retained draws.
double rhat(const PosteriorSamples& samples, int param);
double rhat(const PosteriorSamples& samples, const std::string& param);

/// Autocorrelation-based effective sample size (split chains, Geyer initial
/// monotone sequence). Same preconditions as rhat.
double ess(const PosteriorSamples& samples, int param);
double ess(const PosteriorSamples& samples, const std::string& param);

struct ParamSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  double rhat = 0.0;
  double ess = 0.0;
};

std::vector<ParamSummary> summarize(const PosteriorSamples& samples);

/// Linear-interpolation quantile of an unsorted copy.
double quantile(std::vector<double> values, double q);

}  // namespace bayesxg::bayes
