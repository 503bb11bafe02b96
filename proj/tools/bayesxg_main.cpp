// bayesxg command-line interface: ingest -> features -> fits -> analyses,
// with JSON run manifests and deterministic seeding throughout.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "bayesxg/analysis.hpp"
#include "bayesxg/bayes/diagnostics.hpp"
#include "bayesxg/bayes/fit.hpp"
#include "bayesxg/errors.hpp"
#include "bayesxg/glm.hpp"
#include "bayesxg/ingest.hpp"
#include "bayesxg/shots_csv.hpp"
#include "bayesxg/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bayesxg;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError(path.string());
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001B3ULL;
    }
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << value;
  return out.str();
}

struct SamplerFlags {
  int chains = 4;
  int draws = 1500;
  int warmup = 250;
  double target_accept = 0.95;
  std::uint64_t seed = 1;
  int max_treedepth = 10;
  bool plain_hmc = false;
  int fixed_path_steps = 32;

  void attach(CLI::App* cmd) {
    cmd->add_option("--chains", chains, "Number of chains")->check(CLI::PositiveNumber);
    cmd->add_option("--draws", draws, "Draws per chain, warmup included");
    cmd->add_option("--warmup", warmup, "Warmup draws discarded per chain");
    cmd->add_option("--target-accept", target_accept, "Adaptation target");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--max-treedepth", max_treedepth, "Trajectory doubling cap");
    cmd->add_flag("--plain-hmc", plain_hmc,
                  "Fixed-path HMC instead of dynamic trajectories");
    cmd->add_option("--path-steps", fixed_path_steps,
                    "Leapfrog steps for --plain-hmc");
  }

  bayes::SamplerConfig config() const {
    bayes::SamplerConfig cfg;
    cfg.chains = chains;
    cfg.draws = draws;
    cfg.warmup = warmup;
    cfg.target_accept = target_accept;
    cfg.seed = seed;
    cfg.max_treedepth = max_treedepth;
    cfg.dynamic = !plain_hmc;
    cfg.fixed_path_steps = fixed_path_steps;
    return cfg;
  }

  json to_json() const {
    return {{"chains", chains},
            {"draws", draws},
            {"warmup", warmup},
            {"target_accept", target_accept},
            {"seed", seed},
            {"max_treedepth", max_treedepth},
            {"dynamic", !plain_hmc},
            {"fixed_path_steps", fixed_path_steps}};
  }
};

struct DataFlags {
  std::string csv;
  std::vector<int> competitions;

  void attach(CLI::App* cmd) {
    cmd->add_option("--csv", csv, "Canonical shots CSV")->required();
    cmd->add_option("--competitions", competitions,
                    "Keep only these competition ids")
        ->delimiter(',');
  }

  std::vector<FeatureRow> load() const {
    auto rows = read_shots_csv(fs::path(csv));
    if (!competitions.empty()) {
      const std::set<int> keep(competitions.begin(), competitions.end());
      std::erase_if(rows, [&](const FeatureRow& r) {
        return keep.count(r.competition_id) == 0;
      });
    }
    if (rows.empty()) throw Error("no shots left after filtering");
    return rows;
  }
};

Eigen::VectorXd outcomes_of(const std::vector<FeatureRow>& rows) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = rows[i].outcome_goal ? 1.0 : 0.0;
  }
  return y;
}

Eigen::VectorXd reference_of(const std::vector<FeatureRow>& rows) {
  Eigen::VectorXd ref(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ref(static_cast<Eigen::Index>(i)) = rows[i].statsbomb_xg;
  }
  return ref;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    json config, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    json extra = json::object()) {
  json doc;
  doc["command"] = command;
  doc["config"] = std::move(config);
  json input_list = json::array();
  for (const auto& path : inputs) {
    input_list.push_back({{"path", path}, {"fnv1a64", hex64(fnv1a_file(path))}});
  }
  doc["inputs"] = input_list;
  doc["outputs"] = outputs;
  for (auto& [key, value] : extra.items()) doc[key] = value;
  std::ofstream out(out_dir / "manifest.json");
  out << doc.dump(2) << '\n';
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << std::fixed << std::setprecision(6);
  return out;
}

void write_metrics_csv(const fs::path& path, const Eigen::VectorXd& pred,
                       const Eigen::VectorXd& outcomes,
                       const Eigen::VectorXd& reference) {
  auto out = open_csv(path);
  const auto metrics = analysis::regression_metrics(pred, reference);
  out << "brier,rmse_vs_reference,mae_vs_reference,r2_vs_reference,"
         "msd_vs_reference,reference_brier,n\n";
  out << analysis::brier(pred, outcomes) << ',' << metrics.rmse << ','
      << metrics.mae << ',' << metrics.r2 << ','
      << analysis::msd(pred, reference) << ','
      << analysis::brier(reference, outcomes) << ',' << pred.size() << '\n';
}

void write_sampler_outputs(const fs::path& out_dir,
                           const bayes::PosteriorSamples& samples,
                           const features::DesignMatrix& design,
                           std::vector<std::string>& outputs) {
  bayes::save_draws_csv(samples, out_dir / "draws.csv");
  outputs.push_back("draws.csv");

  {
    auto out = open_csv(out_dir / "posterior_summary.csv");
    out << "parameter,mean,sd,q05,q50,q95,rhat,ess\n";
    for (const auto& s : bayes::summarize(samples)) {
      out << s.name << ',' << s.mean << ',' << s.sd << ',' << s.q05 << ','
          << s.q50 << ',' << s.q95 << ',' << s.rhat << ',' << s.ess << '\n';
    }
    outputs.push_back("posterior_summary.csv");
  }
  {
    const auto pred = bayes::posterior_predict(samples, design);
    auto out = open_csv(out_dir / "predictions.csv");
    out << "index,mean,lower90,upper90\n";
    for (Eigen::Index i = 0; i < pred.mean.size(); ++i) {
      out << i << ',' << pred.mean(i) << ',' << pred.lower(i) << ','
          << pred.upper(i) << '\n';
    }
    outputs.push_back("predictions.csv");
  }
}

json sampler_stats_json(const bayes::PosteriorSamples& samples) {
  json chains = json::array();
  for (const auto& s : samples.stats) {
    chains.push_back({{"mean_accept", s.mean_accept},
                      {"divergences", s.divergences},
                      {"max_depth_hits", s.max_depth_hits},
                      {"step_size", s.step_size}});
  }
  double worst_rhat = 0.0;
  double min_ess = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(samples.param_names.size()); ++j) {
    const double r = bayes::rhat(samples, j);
    if (std::isfinite(r)) worst_rhat = std::max(worst_rhat, r);
    const double e = bayes::ess(samples, j);
    if (std::isfinite(e)) min_ess = std::min(min_ess, e);
  }
  return {{"chains", chains},
          {"mean_accept", samples.mean_accept()},
          {"total_divergences", samples.total_divergences()},
          {"divergence_flag", samples.divergence_flag},
          {"worst_rhat", worst_rhat},
          {"min_ess", std::isfinite(min_ess) ? min_ess : 0.0}};
}

std::vector<FeatureRow> subsample_rows(std::vector<FeatureRow> rows, int n,
                                       std::uint64_t seed) {
  if (n <= 0 || n >= static_cast<int>(rows.size())) return rows;
  Rng rng(seed);
  for (std::size_t i = rows.size(); i > 1; --i) {
    std::swap(rows[i - 1],
              rows[static_cast<std::size_t>(rng.uniform_int(0, i - 1))]);
  }
  rows.resize(static_cast<std::size_t>(n));
  return rows;
}

// Fill fit options from a JSON run configuration; explicitly passed flags
// keep precedence (they are applied by CLI11 after this runs).
struct ConfigFile {
  std::string path;

  json load() const {
    std::ifstream in(path);
    if (!in) throw MissingFileError(path);
    try {
      json doc;
      in >> doc;
      return doc;
    } catch (const json::exception& e) {
      throw ParseError("malformed run configuration " + path + ": " + e.what());
    }
  }
};

// --- subcommand implementations -------------------------------------------

int run_ingest(const std::string& data_dir, const std::vector<int>& competition_ids,
               const std::string& out_dir_raw) {
  const fs::path out_dir(out_dir_raw);
  fs::create_directories(out_dir);

  auto comps = ingest::load_competitions(data_dir);
  std::erase_if(comps,
                [](const CompetitionRef& c) { return c.gender != Gender::male; });
  if (!competition_ids.empty()) {
    const std::set<int> keep(competition_ids.begin(), competition_ids.end());
    std::erase_if(comps, [&](const CompetitionRef& c) {
      return keep.count(c.competition_id) == 0;
    });
  }
  if (comps.empty()) throw Error("no matching men's competitions");

  const auto scan = ingest::scan_events(data_dir, comps);
  ingest::PipelineFlags flags;
  const auto rows = ingest::build_feature_rows(scan, &flags);
  write_shots_csv(rows, out_dir / "shots.csv");

  for (const auto& warning : scan.warnings) std::cerr << "warning: " << warning << '\n';
  std::cerr << "shots kept: " << rows.size()
            << ", skipped (no freeze frame): " << scan.skipped_missing_freeze_frame
            << ", skipped (goal line): " << scan.skipped_goal_line << '\n';

  json config = {{"data_dir", data_dir}, {"competitions", competition_ids}};
  json extra = {{"shots", rows.size()},
                {"events_seen", scan.events_seen},
                {"skipped_missing_freeze_frame", scan.skipped_missing_freeze_frame},
                {"skipped_goal_line", scan.skipped_goal_line},
                {"position_tie_breaks", flags.position_ties},
                {"foot_fallbacks", flags.foot_fallbacks},
                {"keeperless_freeze_frames", flags.keeperless_frames},
                {"warnings", scan.warnings}};
  write_manifest(out_dir, "ingest", config,
                 {(fs::path(data_dir) / "competitions.json").string()},
                 {"shots.csv"}, extra);
  return 0;
}

int run_features(const DataFlags& data, const std::string& out_dir_raw) {
  const fs::path out_dir(out_dir_raw);
  fs::create_directories(out_dir);
  const auto rows = data.load();

  {
    auto out = open_csv(out_dir / "feature_summary.csv");
    out << "variable,count,mean,sd,min,max\n";
    auto emit = [&](const std::string& name, auto getter) {
      double sum = 0.0, sq = 0.0;
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& r : rows) {
        const double v = getter(r);
        sum += v;
        sq += v * v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double n = static_cast<double>(rows.size());
      const double mean = sum / n;
      out << name << ',' << rows.size() << ',' << mean << ','
          << std::sqrt(std::max(0.0, sq / n - mean * mean)) << ',' << lo << ','
          << hi << '\n';
    };
    emit("distance_to_goal", [](const FeatureRow& r) { return r.distance_to_goal; });
    emit("shot_angle", [](const FeatureRow& r) { return r.shot_angle; });
    emit("gk_distance_to_goal",
         [](const FeatureRow& r) { return r.gk_distance_to_goal; });
    emit("players_in_shot_triangle", [](const FeatureRow& r) {
      return static_cast<double>(r.players_in_shot_triangle);
    });
    emit("opponents_in_radius", [](const FeatureRow& r) {
      return static_cast<double>(r.opponents_in_radius);
    });
    emit("goal", [](const FeatureRow& r) { return r.outcome_goal ? 1.0 : 0.0; });
    emit("shot_statsbomb_xg", [](const FeatureRow& r) { return r.statsbomb_xg; });
  }
  {
    auto out = open_csv(out_dir / "level_counts.csv");
    out << "variable,level,count\n";
    std::map<std::string, std::map<std::string, long>> counts;
    for (const auto& r : rows) {
      ++counts["general_position"][to_label(r.general_position)];
      ++counts["body_part"][to_label(r.body_part)];
      ++counts["technique"][to_label(r.technique)];
      ++counts["players_in_shot_triangle"]
              [std::to_string(r.players_in_shot_triangle)];
      ++counts["opponents_in_radius"][std::to_string(r.opponents_in_radius)];
    }
    for (const auto& [variable, levels] : counts) {
      for (const auto& [level, count] : levels) {
        out << variable << ',' << level << ',' << count << '\n';
      }
    }
  }
  {
    auto out = open_csv(out_dir / "design_columns.csv");
    out << "model,column,continuous\n";
    for (auto set :
         {features::PredictorSet::baseline, features::PredictorSet::extended}) {
      const auto design = features::build_design_matrix(rows, set, {});
      for (const auto& c : design.columns) {
        out << features::to_label(set) << ',' << c.name << ','
            << (c.continuous ? 1 : 0) << '\n';
      }
    }
  }
  // Sanity windows on the engineered columns.
  long angle_out = 0, distance_out = 0;
  for (const auto& r : rows) {
    if (r.shot_angle < 0.5 || r.shot_angle > 179.0) ++angle_out;
    if (!(r.distance_to_goal > 0.0 && r.distance_to_goal <= 120.0)) ++distance_out;
  }
  if (angle_out > 0 || distance_out > 0) {
    std::cerr << "warning: " << angle_out << " shots outside the angle window, "
              << distance_out << " outside the distance window\n";
  }
  write_manifest(out_dir, "features",
                 {{"csv", data.csv}, {"competitions", data.competitions}},
                 {data.csv},
                 {"feature_summary.csv", "level_counts.csv", "design_columns.csv"},
                 {{"angle_window_violations", angle_out},
                  {"distance_window_violations", distance_out}});
  return 0;
}

struct ModelFlags {
  std::string model = "extended";
  std::string method = "freq";
  std::string grouping = "none";
  std::vector<std::string> players;
  std::vector<std::string> good_finishers;

  void attach(CLI::App* cmd, bool with_method = true) {
    cmd->add_option("--model", model, "baseline or extended")
        ->check(CLI::IsMember({"baseline", "extended"}));
    if (with_method) {
      cmd->add_option("--method", method, "freq or bayes")
          ->check(CLI::IsMember({"freq", "bayes"}));
    }
    cmd->add_option("--grouping", grouping, "none, position, or player")
        ->check(CLI::IsMember({"none", "position", "player"}));
    cmd->add_option("--players", players, "Selected players for player grouping")
        ->delimiter(',');
    cmd->add_option("--good-finishers", good_finishers,
                    "Players whose group prior skews positive")
        ->delimiter(',');
  }

  features::GroupingSpec grouping_spec() const {
    features::GroupingSpec spec;
    spec.kind = features::grouping_from_label(grouping);
    spec.selected_players = players;
    return spec;
  }
};

int run_fit(const DataFlags& data, const ModelFlags& model,
            const SamplerFlags& sampler, bool sweep,
            const std::string& out_dir_raw) {
  if (model.method == "freq" && model.grouping != "none") {
    std::cerr << "error: --method freq forbids --grouping " << model.grouping
              << '\n';
    return kExitValidation;
  }
  if (model.grouping == "player" && model.players.empty()) {
    std::cerr << "error: --grouping player requires --players\n";
    return kExitValidation;
  }

  const fs::path out_dir(out_dir_raw);
  fs::create_directories(out_dir);
  const auto rows = data.load();
  const auto set = features::predictor_set_from_label(model.model);
  const auto design =
      features::build_design_matrix(rows, set, model.grouping_spec());
  const auto y = outcomes_of(rows);
  const auto reference = reference_of(rows);

  json config = {{"csv", data.csv},
                 {"competitions", data.competitions},
                 {"model", model.model},
                 {"method", model.method},
                 {"grouping", model.grouping},
                 {"players", model.players},
                 {"good_finishers", model.good_finishers}};
  std::vector<std::string> outputs;

  if (model.method == "freq") {
    const auto fit = glm::fit_logistic(design, y);
    if (!fit.converged) {
      std::cerr << (fit.separation ? "error: separation detected\n"
                                   : "error: IRLS did not converge\n");
    }
    glm::save_coefficients_json(fit, design, out_dir / "coefficients.json");
    outputs.push_back("coefficients.json");

    const auto pred = glm::predict_proba(fit, design);
    write_metrics_csv(out_dir / "metrics.csv", pred, y, reference);
    outputs.push_back("metrics.csv");

    {
      auto out = open_csv(out_dir / "predictions.csv");
      out << "index,prediction,goal,statsbomb_xg\n";
      for (Eigen::Index i = 0; i < pred.size(); ++i) {
        out << i << ',' << pred(i) << ',' << y(i) << ',' << reference(i) << '\n';
      }
      outputs.push_back("predictions.csv");
    }
    if (sweep) {
      const auto extended = features::build_design_matrix(
          rows, features::PredictorSet::extended, {});
      const auto points = analysis::feature_count_sweep(extended, y, reference);
      auto out = open_csv(out_dir / "feature_sweep.csv");
      out << "n_columns,last_column,brier,rmse,mae,r2\n";
      for (const auto& pt : points) {
        out << pt.n_columns << ',' << pt.last_column << ',' << pt.brier << ','
            << pt.rmse << ',' << pt.mae << ',' << pt.r2 << '\n';
      }
      outputs.push_back("feature_sweep.csv");
    }
    json extra = {{"converged", fit.converged},
                  {"separation", fit.separation},
                  {"iterations", fit.iterations},
                  {"log_likelihood", fit.log_likelihood}};
    write_manifest(out_dir, "fit", config, {data.csv}, outputs, extra);
    return fit.converged ? 0 : kExitRuntime;
  }

  const auto spec =
      bayes::make_model_spec(design, model.players, model.good_finishers);
  const auto samples = bayes::fit(spec, design, y, sampler.config());
  write_sampler_outputs(out_dir, samples, design, outputs);

  json priors = json::array();
  priors.push_back({{"parameter", "intercept"},
                    {"prior", dists::describe(spec.intercept_prior)}});
  for (std::size_t j = 0; j < spec.coef_priors.size(); ++j) {
    priors.push_back({{"parameter", design.columns[j].name},
                      {"prior", dists::describe(spec.coef_priors[j])}});
  }
  for (std::size_t k = 0; k < spec.group_alpha.size(); ++k) {
    priors.push_back({{"parameter", "u[" + design.group_levels[k] + "]"},
                      {"prior", "skew_normal(0,sigma_group," +
                                    std::to_string(spec.group_alpha[k]) + ")"}});
  }
  json config_full = config;
  config_full["sampler"] = sampler.to_json();
  json extra = {{"sampler_stats", sampler_stats_json(samples)}, {"priors", priors}};
  write_manifest(out_dir, "fit", config_full, {data.csv}, outputs, extra);
  if (samples.divergence_flag) {
    std::cerr << "warning: post-warmup divergence rate above 5%\n";
  }
  return 0;
}

int run_adjustments(const DataFlags& data, const ModelFlags& model,
                    const SamplerFlags& sampler, bool bayes_baseline,
                    const std::string& out_dir_raw, const char* command) {
  if (model.grouping == "none") {
    std::cerr << "error: adjustments need --grouping position or player\n";
    return kExitValidation;
  }
  if (model.grouping == "player" && model.players.empty()) {
    std::cerr << "error: --grouping player requires --players\n";
    return kExitValidation;
  }
  const fs::path out_dir(out_dir_raw);
  fs::create_directories(out_dir);
  const auto rows = data.load();
  const auto set = features::predictor_set_from_label(model.model);
  const auto grouped =
      features::build_design_matrix(rows, set, model.grouping_spec());
  const auto flat = features::build_design_matrix(rows, set, {});
  const auto y = outcomes_of(rows);

  // Single-level baseline prediction: frequentist unless asked otherwise.
  Eigen::VectorXd base_pred;
  if (bayes_baseline) {
    const auto base_spec = bayes::make_model_spec(flat);
    auto cfg = sampler.config();
    cfg.seed = sampler.seed + 500;
    base_pred =
        bayes::posterior_predict(bayes::fit(base_spec, flat, y, cfg), flat).mean;
  } else {
    const auto fit = glm::fit_logistic(flat, y);
    if (!fit.converged) std::cerr << "warning: baseline IRLS not converged\n";
    base_pred = glm::predict_proba(fit, flat);
  }

  const auto spec =
      bayes::make_model_spec(grouped, model.players, model.good_finishers);
  const auto samples = bayes::fit(spec, grouped, y, sampler.config());
  const auto pred = bayes::posterior_predict(samples, grouped);

  Eigen::VectorXd distance(grouped.rows()), angle(grouped.rows());
  for (Eigen::Index i = 0; i < distance.size(); ++i) {
    distance(i) = rows[static_cast<std::size_t>(i)].distance_to_goal;
    angle(i) = rows[static_cast<std::size_t>(i)].shot_angle;
  }
  const auto report =
      analysis::xg_adjustments(pred.mean, base_pred, grouped.group_index,
                               grouped.group_levels, distance, angle);

  std::vector<std::string> outputs;
  {
    auto out = open_csv(out_dir / "adjustments.csv");
    out << "index,player,group,baseline,hierarchical,adjustment\n";
    for (Eigen::Index i = 0; i < report.per_shot.size(); ++i) {
      out << i << ',' << rows[static_cast<std::size_t>(i)].player_name << ','
          << grouped.group_levels[static_cast<std::size_t>(grouped.group_index(i))]
          << ',' << base_pred(i) << ',' << pred.mean(i) << ','
          << report.per_shot(i) << '\n';
    }
    outputs.push_back("adjustments.csv");
  }
  {
    auto out = open_csv(out_dir / "adjustment_groups.csv");
    out << "group,count,mean,q05,q25,q50,q75,q95\n";
    for (const auto& g : report.groups) {
      out << g.level << ',' << g.count << ',' << g.mean << ',' << g.q05 << ','
          << g.q25 << ',' << g.q50 << ',' << g.q75 << ',' << g.q95 << '\n';
    }
    outputs.push_back("adjustment_groups.csv");
  }
  for (const auto& [name, curve] :
       {std::pair{"curve_distance.csv", &report.distance_curve},
        std::pair{"curve_angle.csv", &report.angle_curve}}) {
    auto out = open_csv(out_dir / name);
    out << "group,bin_low,count,mean_adjustment\n";
    for (const auto& pt : *curve) {
      out << pt.level << ',' << pt.bin_low << ',' << pt.count << ','
          << pt.mean_adjustment << '\n';
    }
    outputs.push_back(name);
  }

  json config = {{"csv", data.csv},
                 {"competitions", data.competitions},
                 {"model", model.model},
                 {"grouping", model.grouping},
                 {"players", model.players},
                 {"good_finishers", model.good_finishers},
                 {"bayes_baseline", bayes_baseline},
                 {"sampler", sampler.to_json()}};
  write_manifest(out_dir, command, config, {data.csv}, outputs,
                 {{"sampler_stats", sampler_stats_json(samples)},
                  {"overall_mean_adjustment", report.overall_mean}});
  return 0;
}

int run_validate_bayes(const DataFlags& data, const SamplerFlags& sampler,
                       const std::string& out_dir_raw) {
  const fs::path out_dir(out_dir_raw);
  fs::create_directories(out_dir);
  const auto rows = data.load();
  const auto grouped = features::build_design_matrix(
      rows, features::PredictorSet::baseline, {features::Grouping::position, {}});
  const auto flat =
      features::build_design_matrix(rows, features::PredictorSet::baseline, {});
  const auto y = outcomes_of(rows);

  const auto fit = glm::fit_logistic(flat, y);
  const auto base_pred = glm::predict_proba(fit, flat);

  const auto spec = bayes::make_model_spec(grouped);
  const auto samples = bayes::fit(spec, grouped, y, sampler.config());
  const auto pred = bayes::posterior_predict(samples, grouped);

  const auto theory = analysis::bayes_theorem_adjustment(
      base_pred, grouped.group_index, grouped.group_levels, y);

  Eigen::VectorXd distance(0), angle(0);
  const auto report =
      analysis::xg_adjustments(pred.mean, base_pred, grouped.group_index,
                               grouped.group_levels, distance, angle);

  {
    auto out = open_csv(out_dir / "position_adjustments.csv");
    out << "position,count,mean_model_adjustment,mean_theoretical_adjustment,"
           "difference,lift\n";
    for (std::size_t k = 0; k < report.groups.size(); ++k) {
      const double model_adj = report.groups[k].mean;
      const double theory_adj = theory[k].mean_adjustment;
      out << report.groups[k].level << ',' << report.groups[k].count << ','
          << model_adj << ',' << theory_adj << ',' << (model_adj - theory_adj)
          << ',' << theory[k].lift << '\n';
    }
  }
  json config = {{"csv", data.csv},
                 {"competitions", data.competitions},
                 {"sampler", sampler.to_json()}};
  write_manifest(out_dir, "validate-bayes", config, {data.csv},
                 {"position_adjustments.csv"},
                 {{"sampler_stats", sampler_stats_json(samples)}});
  return 0;
}

int run_players(const DataFlags& data, long min_shots,
                const std::string& out_dir_raw) {
  const fs::path out_dir(out_dir_raw);
  fs::create_directories(out_dir);
  const auto rows = data.load();
  const auto table = analysis::select_players(rows, min_shots);
  {
    auto out = open_csv(out_dir / "conversion.csv");
    out << "player,shots,goals,conversion_rate_percent\n";
    out << std::setprecision(1);
    for (const auto& r : table) {
      out << r.player << ',' << r.shots << ',' << r.goals << ','
          << 100.0 * r.rate << '\n';
    }
  }
  write_manifest(out_dir, "players",
                 {{"csv", data.csv},
                  {"competitions", data.competitions},
                  {"min_shots", min_shots}},
                 {data.csv}, {"conversion.csv"});
  return 0;
}

int run_totals(const DataFlags& data, const ModelFlags& model,
               const SamplerFlags& sampler, const std::string& out_dir_raw) {
  if (model.players.empty()) {
    std::cerr << "error: totals requires --players\n";
    return kExitValidation;
  }
  const fs::path out_dir(out_dir_raw);
  fs::create_directories(out_dir);
  const auto rows = data.load();
  const auto set = features::predictor_set_from_label(model.model);
  const auto grouped = features::build_design_matrix(
      rows, set, {features::Grouping::player, model.players});
  const auto flat = features::build_design_matrix(rows, set, {});
  const auto y = outcomes_of(rows);

  const auto fit = glm::fit_logistic(flat, y);
  const auto base_pred = glm::predict_proba(fit, flat);

  const auto spec =
      bayes::make_model_spec(grouped, model.players, model.good_finishers);
  const auto samples = bayes::fit(spec, grouped, y, sampler.config());
  const auto pred = bayes::posterior_predict(samples, grouped);

  const auto totals = analysis::totals_report(model.players, rows, base_pred,
                                              pred.mean, grouped.group_levels);
  {
    auto out = open_csv(out_dir / "totals.csv");
    out << "player,shots,goals,baseline_xg,adjusted_xg\n";
    for (const auto& t : totals) {
      out << t.player << ',' << t.shots << ',' << t.goals << ','
          << t.baseline_xg << ',' << t.adjusted_xg << '\n';
    }
  }
  json config = {{"csv", data.csv},
                 {"competitions", data.competitions},
                 {"model", model.model},
                 {"players", model.players},
                 {"good_finishers", model.good_finishers},
                 {"sampler", sampler.to_json()}};
  write_manifest(out_dir, "totals", config, {data.csv}, {"totals.csv"},
                 {{"sampler_stats", sampler_stats_json(samples)}});
  return 0;
}

int run_prior_sensitivity(const DataFlags& data, const SamplerFlags& sampler,
                          int subsample, const std::string& out_dir_raw) {
  const fs::path out_dir(out_dir_raw);
  fs::create_directories(out_dir);
  auto rows = data.load();
  rows = subsample_rows(std::move(rows), subsample, sampler.seed);
  const auto design =
      features::build_design_matrix(rows, features::PredictorSet::extended, {});
  const auto y = outcomes_of(rows);

  const auto fit = glm::fit_logistic(design, y);
  const auto reference = glm::predict_proba(fit, design);

  const auto results =
      analysis::prior_sensitivity(design, y, reference, sampler.config());

  std::vector<std::string> outputs;
  {
    auto out = open_csv(out_dir / "sensitivity_summary.csv");
    out << "case,ok,pred_q25,pred_q50,pred_q75,pred_iqr,msd_q25,msd_q50,"
           "msd_q75,msd_iqr,mean_accept,divergences,error\n";
    for (const auto& r : results) {
      out << r.name << ',' << (r.ok ? 1 : 0) << ',' << r.pred_q25 << ','
          << r.pred_q50 << ',' << r.pred_q75 << ',' << r.pred_iqr << ','
          << r.msd_q25 << ',' << r.msd_q50 << ',' << r.msd_q75 << ','
          << r.msd_iqr << ',' << r.mean_accept << ',' << r.divergences << ','
          << r.error << '\n';
    }
    outputs.push_back("sensitivity_summary.csv");
  }
  {
    auto out = open_csv(out_dir / "msd_distribution.csv");
    out << "case,draw,msd\n";
    for (const auto& r : results) {
      if (!r.ok) continue;
      for (Eigen::Index d = 0; d < r.per_draw_msd.size(); ++d) {
        out << r.name << ',' << d << ',' << r.per_draw_msd(d) << '\n';
      }
    }
    outputs.push_back("msd_distribution.csv");
  }
  for (const auto& r : results) {
    if (!r.ok) continue;
    const std::string name = "predictions_" + r.name + ".csv";
    auto out = open_csv(out_dir / name);
    out << "index,mean\n";
    for (Eigen::Index i = 0; i < r.mean_prediction.size(); ++i) {
      out << i << ',' << r.mean_prediction(i) << '\n';
    }
    outputs.push_back(name);
  }

  json config = {{"csv", data.csv},
                 {"competitions", data.competitions},
                 {"subsample", subsample},
                 {"sampler", sampler.to_json()}};
  json case_status = json::array();
  for (const auto& r : results) {
    case_status.push_back({{"case", r.name}, {"ok", r.ok}, {"error", r.error}});
  }
  write_manifest(out_dir, "prior-sensitivity", config, {data.csv}, outputs,
                 {{"cases", case_status}});
  return 0;
}

int run_synth(int n, std::uint64_t seed, const ModelFlags& model,
              const std::vector<double>& offsets, double intercept,
              const std::string& out_dir_raw) {
  const fs::path out_dir(out_dir_raw);
  fs::create_directories(out_dir);
  synth::TruthConfig config;
  config.predictors = features::predictor_set_from_label(model.model);
  config.grouping = model.grouping_spec();
  config.group_offsets = offsets;
  config.intercept = intercept;
  config.n = n;
  config.seed = seed;
  const auto data = synth::generate_shots(config);
  write_shots_csv(data.rows, out_dir / "shots.csv");

  json truth = {{"n", n},
                {"seed", seed},
                {"model", model.model},
                {"grouping", model.grouping},
                {"intercept", intercept},
                {"group_levels", data.design.group_levels},
                {"group_offsets", offsets},
                {"goal_rate", data.outcomes.mean()}};
  std::ofstream(out_dir / "truth.json") << truth.dump(2) << '\n';

  write_manifest(out_dir, "synth",
                 {{"n", n},
                  {"seed", seed},
                  {"model", model.model},
                  {"grouping", model.grouping}},
                 {}, {"shots.csv", "truth.json"});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expected-goals models over StatsBomb open data: frequentist "
               "and hierarchical Bayesian fits with a built-in HMC sampler"};
  app.require_subcommand(1);

  auto* ingest_cmd = app.add_subcommand("ingest", "Extract open-play shots");
  std::string data_dir, out_dir;
  std::vector<int> competition_ids;
  ingest_cmd->add_option("--data-dir", data_dir, "Open-data directory")->required();
  ingest_cmd->add_option("--competitions", competition_ids,
                         "Competition ids to keep")
      ->delimiter(',');
  ingest_cmd->add_option("--out", out_dir, "Output directory")->required();

  auto* features_cmd =
      app.add_subcommand("features", "Summaries of a canonical shots file");
  DataFlags features_data;
  std::string features_out;
  features_data.attach(features_cmd);
  features_cmd->add_option("--out", features_out, "Output directory")->required();

  auto* fit_cmd = app.add_subcommand("fit", "Fit an xG model");
  DataFlags fit_data;
  ModelFlags fit_model;
  SamplerFlags fit_sampler;
  bool fit_sweep = false;
  std::string fit_out;
  std::string fit_config_path;
  fit_data.attach(fit_cmd);
  fit_cmd->get_option("--csv")->required(false);  // may come from --config
  fit_model.attach(fit_cmd);
  fit_sampler.attach(fit_cmd);
  fit_cmd->add_flag("--sweep", fit_sweep,
                    "Also emit the feature-count metric sweep (freq only)");
  fit_cmd->add_option("--config", fit_config_path,
                      "JSON run configuration; explicit flags override it");
  fit_cmd->add_option("--out", fit_out, "Output directory");

  auto* adj_cmd =
      app.add_subcommand("adjustments", "Hierarchical minus baseline xG");
  DataFlags adj_data;
  ModelFlags adj_model;
  SamplerFlags adj_sampler;
  bool adj_bayes_baseline = false;
  std::string adj_out;
  adj_data.attach(adj_cmd);
  adj_model.attach(adj_cmd, false);
  adj_sampler.attach(adj_cmd);
  adj_cmd->add_flag("--bayes-baseline", adj_bayes_baseline,
                    "Use a single-level Bayesian baseline instead of IRLS");
  adj_cmd->add_option("--out", adj_out, "Output directory")->required();

  auto* validate_cmd = app.add_subcommand(
      "validate-bayes",
      "Positional model adjustments vs conditional-probability lifts");
  DataFlags validate_data;
  SamplerFlags validate_sampler;
  std::string validate_out;
  validate_data.attach(validate_cmd);
  validate_sampler.attach(validate_cmd);
  validate_cmd->add_option("--out", validate_out, "Output directory")->required();

  auto* players_cmd =
      app.add_subcommand("players", "Conversion-rate table for player selection");
  DataFlags players_data;
  long min_shots = 50;
  std::string players_out;
  players_data.attach(players_cmd);
  players_cmd->add_option("--min-shots", min_shots, "Minimum shots to qualify");
  players_cmd->add_option("--out", players_out, "Output directory")->required();

  auto* totals_cmd =
      app.add_subcommand("totals", "Goals vs baseline and adjusted xG totals");
  DataFlags totals_data;
  ModelFlags totals_model;
  SamplerFlags totals_sampler;
  std::string totals_out;
  totals_data.attach(totals_cmd);
  totals_model.attach(totals_cmd, false);
  totals_sampler.attach(totals_cmd);
  totals_cmd->add_option("--out", totals_out, "Output directory")->required();

  auto* prior_cmd = app.add_subcommand(
      "prior-sensitivity", "Refit the extended model under six prior sets");
  DataFlags prior_data;
  SamplerFlags prior_sampler;
  int subsample = 0;
  std::string prior_out;
  prior_data.attach(prior_cmd);
  prior_sampler.attach(prior_cmd);
  prior_cmd->add_option("--subsample", subsample,
                        "Deterministic subsample size (0 = all shots)");
  prior_cmd->add_option("--out", prior_out, "Output directory")->required();

  auto* synth_cmd =
      app.add_subcommand("synth", "Generate synthetic shots with known truth");
  ModelFlags synth_model;
  int synth_n = 10000;
  std::uint64_t synth_seed = 1;
  double synth_intercept = -2.0;
  std::vector<double> synth_offsets;
  std::string synth_out;
  synth_model.attach(synth_cmd, false);
  synth_cmd->add_option("--n", synth_n, "Number of shots");
  synth_cmd->add_option("--seed", synth_seed, "Random seed");
  synth_cmd->add_option("--intercept", synth_intercept, "True intercept");
  synth_cmd->add_option("--offsets", synth_offsets,
                        "Logit-scale group offsets, one per level")
      ->delimiter(',');
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the offending flag or the help text
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (app.got_subcommand(ingest_cmd)) {
      return run_ingest(data_dir, competition_ids, out_dir);
    }
    if (app.got_subcommand(features_cmd)) {
      return run_features(features_data, features_out);
    }
    if (app.got_subcommand(fit_cmd)) {
      if (!fit_config_path.empty()) {
        const json doc = ConfigFile{fit_config_path}.load();
        auto absent = [&](const std::string& flag) {
          return fit_cmd->count(flag) == 0;
        };
        if (absent("--csv") && doc.contains("csv")) fit_data.csv = doc["csv"];
        if (absent("--competitions") && doc.contains("competitions")) {
          fit_data.competitions = doc["competitions"].get<std::vector<int>>();
        }
        if (absent("--model") && doc.contains("model")) fit_model.model = doc["model"];
        if (absent("--method") && doc.contains("method")) fit_model.method = doc["method"];
        if (absent("--grouping") && doc.contains("grouping")) {
          fit_model.grouping = doc["grouping"];
        }
        if (absent("--players") && doc.contains("players")) {
          fit_model.players = doc["players"].get<std::vector<std::string>>();
        }
        if (absent("--good-finishers") && doc.contains("good_finishers")) {
          fit_model.good_finishers =
              doc["good_finishers"].get<std::vector<std::string>>();
        }
        if (absent("--chains") && doc.contains("chains")) fit_sampler.chains = doc["chains"];
        if (absent("--draws") && doc.contains("draws")) fit_sampler.draws = doc["draws"];
        if (absent("--warmup") && doc.contains("warmup")) fit_sampler.warmup = doc["warmup"];
        if (absent("--target-accept") && doc.contains("target_accept")) {
          fit_sampler.target_accept = doc["target_accept"];
        }
        if (absent("--seed") && doc.contains("seed")) fit_sampler.seed = doc["seed"];
        if (absent("--max-treedepth") && doc.contains("max_treedepth")) {
          fit_sampler.max_treedepth = doc["max_treedepth"];
        }
        if (absent("--out") && doc.contains("out")) fit_out = doc["out"];
        if (absent("--sweep") && doc.contains("sweep")) fit_sweep = doc["sweep"];
      }
      if (fit_data.csv.empty() || fit_out.empty()) {
        std::cerr << "error: fit needs --csv and --out (flags or --config)\n";
        return kExitValidation;
      }
      return run_fit(fit_data, fit_model, fit_sampler, fit_sweep, fit_out);
    }
    if (app.got_subcommand(adj_cmd)) {
      return run_adjustments(adj_data, adj_model, adj_sampler,
                             adj_bayes_baseline, adj_out, "adjustments");
    }
    if (app.got_subcommand(validate_cmd)) {
      return run_validate_bayes(validate_data, validate_sampler, validate_out);
    }
    if (app.got_subcommand(players_cmd)) {
      return run_players(players_data, min_shots, players_out);
    }
    if (app.got_subcommand(totals_cmd)) {
      return run_totals(totals_data, totals_model, totals_sampler, totals_out);
    }
    if (app.got_subcommand(prior_cmd)) {
      return run_prior_sensitivity(prior_data, prior_sampler, subsample,
                                   prior_out);
    }
    if (app.got_subcommand(synth_cmd)) {
      return run_synth(synth_n, synth_seed, synth_model, synth_offsets,
                       synth_intercept, synth_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}
