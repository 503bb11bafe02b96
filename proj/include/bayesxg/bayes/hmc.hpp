#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bayesxg/bayes/posterior.hpp"

namespace bayesxg::bayes {

struct SamplerConfig {
  int chains = 4;
  int draws = 1500;   // per chain, warmup included
  int warmup = 250;
  double target_accept = 0.95;
  std::uint64_t seed = 1;
  int max_treedepth = 10;   // dynamic trajectories double up to 2^10 steps
  bool dynamic = true;      // false => fixed-path HMC
  int fixed_path_steps = 32;
  bool parallel_chains = true;
  double init_radius = 2.0;
  double divergence_threshold = 1000.0;  // energy error flagged as divergence
  double max_divergence_rate = 0.05;     // post-warmup rate that trips the flag
};

struct ChainStats {
  double mean_accept = 0.0;  // post-warmup average acceptance statistic
  int divergences = 0;       // post-warmup divergent transitions
  int max_depth_hits = 0;
  double step_size = 0.0;
  std::uint64_t seed = 0;
};

struct PosteriorSamples {
  std::vector<Eigen::MatrixXd> chains;  // retained draws x dim, reported space
  std::vector<std::string> param_names;
  int draws = 0;   // per chain, warmup included
  int warmup = 0;
  std::uint64_t seed = 0;
  std::vector<ChainStats> stats;
  bool divergence_flag = false;

  int n_chains() const { return static_cast<int>(chains.size()); }
  int retained_per_chain() const {
    return chains.empty() ? 0 : static_cast<int>(chains.front().rows());
  }
  double mean_accept() const;
  int total_divergences() const;
  /// All chains stacked, retained draws only.
  Eigen::MatrixXd stacked() const;
  int param_index(const std::string& name) const;  // -1 when absent
};

/// Adaptive Hamiltonian Monte Carlo with dual-averaging step-size
/// adaptation and diagonal mass-matrix estimation during warmup, and
/// dynamic trajectory doubling with divergence detection. Deterministic
/// for a fixed seed, independent of chain scheduling.
///
/// `report` maps a sampler-space point to the reported parameter vector
/// (identity when omitted). Throws NonFiniteGradientError if the target
/// produces a non-finite gradient at a point of finite density.
PosteriorSamples run_hmc(
    const Target& target, const SamplerConfig& config,
    const std::vector<std::string>& param_names = {},
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& report = {});

/// Energy error H(end) - H(start) of one leapfrog trajectory under a unit
/// diagonal metric. Exposes the sampler's integrator for calibration
/// checks; +inf when the trajectory leaves the support.
double leapfrog_energy_error(const Target& target, const Eigen::VectorXd& q0,
                             const Eigen::VectorXd& p0, double step, int n_steps);

/// Wrap a plain callable as a Target (used for test densities).
class FunctionTarget : public Target {
public:
  using Fn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;
  FunctionTarget(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}
  int dim() const override { return dim_; }
  double log_density(const Eigen::VectorXd& z, Eigen::VectorXd& grad) const override {
    return fn_(z, grad);
  }

private:
  int dim_;
  Fn fn_;
};

}  // namespace bayesxg::bayes
