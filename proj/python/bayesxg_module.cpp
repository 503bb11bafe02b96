// Python bindings for the core operations: shot geometry, prior kernels,
// logistic fits, the HMC sampler, and the evaluation metrics.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bayesxg/analysis.hpp"
#include "bayesxg/bayes/diagnostics.hpp"
#include "bayesxg/bayes/fit.hpp"
#include "bayesxg/dists.hpp"
#include "bayesxg/geometry.hpp"
#include "bayesxg/glm.hpp"
#include "bayesxg/shots_csv.hpp"
#include "bayesxg/synth.hpp"

namespace py = pybind11;
using namespace bayesxg;

namespace {

features::DesignMatrix plain_design(const Eigen::MatrixXd& X) {
  features::DesignMatrix design;
  design.X = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    design.columns.push_back({"x" + std::to_string(j),
                              features::Predictor::distance, 0, false, 0.0,
                              1.0});
  }
  return design;
}

bayes::PosteriorSamples samples_from_list(
    const std::vector<Eigen::MatrixXd>& chains) {
  bayes::PosteriorSamples samples;
  if (chains.empty()) throw std::invalid_argument("need at least one chain");
  samples.chains = chains;
  for (Eigen::Index j = 0; j < chains.front().cols(); ++j) {
    samples.param_names.push_back("theta[" + std::to_string(j) + "]");
  }
  samples.stats.assign(chains.size(), bayes::ChainStats{});
  samples.draws = static_cast<int>(chains.front().rows());
  return samples;
}

}  // namespace

PYBIND11_MODULE(_bayesxg, m) {
  m.doc() = "Expected-goals modeling: geometry, priors, logistic fits, and a "
            "dynamic HMC sampler";

  // Shot geometry.
  m.def(
      "distance_to_goal",
      [](double x, double y) { return geom::distance_to_goal({x, y}); },
      py::arg("x"), py::arg("y"));
  m.def(
      "shot_angle", [](double x, double y) { return geom::shot_angle({x, y}); },
      py::arg("x"), py::arg("y"));
  m.def(
      "point_in_shot_triangle",
      [](double px, double py_, double sx, double sy) {
        return geom::point_in_shot_triangle({px, py_}, {sx, sy});
      },
      py::arg("px"), py::arg("py"), py::arg("shot_x"), py::arg("shot_y"));

  // Prior kernels.
  py::class_<dists::Normal>(m, "Normal")
      .def(py::init<double, double>(), py::arg("mu"), py::arg("sigma"));
  py::class_<dists::SkewNormal>(m, "SkewNormal")
      .def(py::init<double, double, double>(), py::arg("mu"), py::arg("sigma"),
           py::arg("alpha"));
  py::class_<dists::HalfNormal>(m, "HalfNormal")
      .def(py::init<double>(), py::arg("gamma"));
  py::class_<dists::Uniform>(m, "Uniform")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"));

  m.def("log_pdf", [](const dists::PriorDist& d, double x) {
    return dists::log_pdf(d, x);
  });
  m.def("grad_log_pdf", [](const dists::PriorDist& d, double x) {
    return dists::grad_log_pdf(d, x);
  });
  m.def(
      "sample",
      [](const dists::PriorDist& d, std::uint64_t seed, int n) {
        Rng rng(seed);
        Eigen::VectorXd out(n);
        for (int i = 0; i < n; ++i) out(i) = dists::sample(d, rng);
        return out;
      },
      py::arg("dist"), py::arg("seed"), py::arg("n") = 1);

  // Frequentist fits on plain matrices.
  m.def(
      "fit_logistic",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double ridge) {
        glm::FitOptions options;
        options.ridge = ridge;
        const auto fit = glm::fit_logistic(plain_design(X), y, options);
        py::dict out;
        out["intercept"] = fit.intercept;
        out["betas"] = fit.betas;
        out["converged"] = fit.converged;
        out["separation"] = fit.separation;
        out["iterations"] = fit.iterations;
        out["log_likelihood"] = fit.log_likelihood;
        return out;
      },
      py::arg("X"), py::arg("y"), py::arg("ridge") = 1e-6);
  m.def(
      "predict_logistic",
      [](double intercept, const Eigen::VectorXd& betas,
         const Eigen::MatrixXd& X) {
        Eigen::VectorXd eta =
            Eigen::VectorXd::Constant(X.rows(), intercept) + X * betas;
        Eigen::VectorXd p(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
          p(i) = glm::inverse_logit(eta(i));
        }
        return p;
      },
      py::arg("intercept"), py::arg("betas"), py::arg("X"));

  // Sampler over a Python log-density callback returning (logp, grad).
  m.def(
      "run_hmc",
      [](int dim,
         const std::function<std::pair<double, Eigen::VectorXd>(
             const Eigen::VectorXd&)>& logp_grad,
         int chains, int draws, int warmup, double target_accept,
         std::uint64_t seed, int max_treedepth) {
        bayes::FunctionTarget target(
            dim, [&](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
              auto [logp, g] = logp_grad(z);
              grad = g;
              return logp;
            });
        bayes::SamplerConfig config;
        config.chains = chains;
        config.draws = draws;
        config.warmup = warmup;
        config.target_accept = target_accept;
        config.seed = seed;
        config.max_treedepth = max_treedepth;
        config.parallel_chains = false;  // callback holds the GIL
        const auto samples = bayes::run_hmc(target, config);
        py::dict out;
        out["chains"] = samples.chains;
        out["mean_accept"] = samples.mean_accept();
        out["divergences"] = samples.total_divergences();
        py::list rhats, esses;
        for (std::size_t j = 0; j < samples.param_names.size(); ++j) {
          rhats.append(bayes::rhat(samples, static_cast<int>(j)));
          esses.append(bayes::ess(samples, static_cast<int>(j)));
        }
        out["rhat"] = rhats;
        out["ess"] = esses;
        return out;
      },
      py::arg("dim"), py::arg("logp_grad"), py::arg("chains") = 4,
      py::arg("draws") = 1500, py::arg("warmup") = 250,
      py::arg("target_accept") = 0.95, py::arg("seed") = 1,
      py::arg("max_treedepth") = 10);

  // Convergence diagnostics over externally produced chains.
  m.def("rhat", [](const std::vector<Eigen::MatrixXd>& chains, int param) {
    return bayes::rhat(samples_from_list(chains), param);
  });
  m.def("ess", [](const std::vector<Eigen::MatrixXd>& chains, int param) {
    return bayes::ess(samples_from_list(chains), param);
  });

  // Metrics.
  m.def("brier", &analysis::brier, py::arg("p"), py::arg("y"));
  m.def(
      "regression_metrics",
      [](const Eigen::VectorXd& pred, const Eigen::VectorXd& reference) {
        const auto metrics = analysis::regression_metrics(pred, reference);
        py::dict out;
        out["rmse"] = metrics.rmse;
        out["mae"] = metrics.mae;
        out["r2"] = metrics.r2;
        return out;
      },
      py::arg("pred"), py::arg("reference"));
  m.def("msd", &analysis::msd, py::arg("pred"), py::arg("reference"));

  // Synthetic shots written in the canonical CSV format.
  m.def(
      "write_synthetic_shots",
      [](const std::string& path, int n, std::uint64_t seed,
         const std::string& model) {
        synth::TruthConfig config;
        config.predictors = features::predictor_set_from_label(model);
        config.n = n;
        config.seed = seed;
        const auto data = synth::generate_shots(config);
        write_shots_csv(data.rows, std::filesystem::path(path));
        return data.outcomes.mean();
      },
      py::arg("path"), py::arg("n"), py::arg("seed") = 1,
      py::arg("model") = "extended");
}
