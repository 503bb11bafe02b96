#pragma once

#include <filesystem>

#include "bayesxg/bayes/diagnostics.hpp"
#include "bayesxg/bayes/hmc.hpp"
#include "bayesxg/bayes/posterior.hpp"

namespace bayesxg::bayes {

/// Sample the posterior of `spec` bound to `design`/`outcomes`. Draws are
/// reported in natural parameter space (group offsets re-centered,
/// uniform-prior coefficients back-transformed).
PosteriorSamples fit(const ModelSpec& spec, const features::DesignMatrix& design,
                     const Eigen::VectorXd& outcomes, const SamplerConfig& config);

/// Per-shot posterior prediction: mean probability over all retained draws
/// plus a central interval, and the per-draw mean prediction across shots
/// (one value per retained draw, chains stacked in order).
struct PredictOutput {
  Eigen::VectorXd mean;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd draw_mean;
};

/// Group levels present in `design` but absent from the fit predict with a
/// zero offset. Throws ColumnMismatchError when coefficient columns differ.
PredictOutput posterior_predict(const PosteriorSamples& samples,
                                const features::DesignMatrix& design,
                                double interval = 0.90);

/// One row per draw: chain, draw, then every parameter, full precision.
void save_draws_csv(const PosteriorSamples& samples,
                    const std::filesystem::path& path);
PosteriorSamples load_draws_csv(const std::filesystem::path& path);

}  // namespace bayesxg::bayes
