#include "bayesxg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "bayesxg/errors.hpp"

namespace bayesxg::analysis {

namespace {

void check_lengths(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const char* what) {
  if (a.size() != b.size()) {
    throw LengthMismatchError(std::string("length mismatch in ") + what);
  }
}

}  // namespace

double brier(const Eigen::VectorXd& p, const Eigen::VectorXd& y) {
  check_lengths(p, y, "brier");
  return (p - y).squaredNorm() / static_cast<double>(p.size());
}

RegressionMetrics regression_metrics(const Eigen::VectorXd& pred,
                                     const Eigen::VectorXd& reference) {
  check_lengths(pred, reference, "regression_metrics");
  RegressionMetrics m;
  const Eigen::VectorXd err = pred - reference;
  m.rmse = std::sqrt(err.squaredNorm() / static_cast<double>(err.size()));
  m.mae = err.cwiseAbs().mean();
  const double ref_mean = reference.mean();
  const double sst = (reference.array() - ref_mean).square().sum();
  m.r2 = sst > 0.0 ? 1.0 - err.squaredNorm() / sst
                   : std::numeric_limits<double>::quiet_NaN();
  return m;
}

double msd(const Eigen::VectorXd& pred, const Eigen::VectorXd& reference) {
  check_lengths(pred, reference, "msd");
  return (pred - reference).mean();
}

AdjustmentReport xg_adjustments(const Eigen::VectorXd& hier_pred,
                                const Eigen::VectorXd& baseline_pred,
                                const Eigen::VectorXi& group_index,
                                const std::vector<std::string>& group_levels,
                                const Eigen::VectorXd& distance,
                                const Eigen::VectorXd& angle) {
  check_lengths(hier_pred, baseline_pred, "xg_adjustments");
  if (group_index.size() != hier_pred.size()) {
    throw GroupMismatchError("group index length does not match predictions");
  }
  const Eigen::Index n = hier_pred.size();
  const int n_levels = static_cast<int>(group_levels.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (group_index(i) < 0 || group_index(i) >= n_levels) {
      throw GroupMismatchError("group index out of range");
    }
  }

  AdjustmentReport report;
  report.per_shot = hier_pred - baseline_pred;
  report.overall_mean = report.per_shot.mean();

  std::vector<std::vector<double>> by_group(static_cast<std::size_t>(n_levels));
  for (Eigen::Index i = 0; i < n; ++i) {
    by_group[static_cast<std::size_t>(group_index(i))].push_back(report.per_shot(i));
  }
  for (int k = 0; k < n_levels; ++k) {
    auto& values = by_group[static_cast<std::size_t>(k)];
    GroupAdjustment g;
    g.level = group_levels[static_cast<std::size_t>(k)];
    g.count = static_cast<long>(values.size());
    if (!values.empty()) {
      double sum = 0.0;
      for (double v : values) sum += v;
      g.mean = sum / static_cast<double>(values.size());
      g.q05 = bayes::quantile(values, 0.05);
      g.q25 = bayes::quantile(values, 0.25);
      g.q50 = bayes::quantile(values, 0.50);
      g.q75 = bayes::quantile(values, 0.75);
      g.q95 = bayes::quantile(values, 0.95);
    }
    report.groups.push_back(std::move(g));
  }

  auto binned = [&](const Eigen::VectorXd& variable, double width) {
    std::map<std::pair<int, long>, std::pair<long, double>> bins;  // (level, bin)
    for (Eigen::Index i = 0; i < n; ++i) {
      const long bin = static_cast<long>(std::floor(variable(i) / width));
      auto& cell = bins[{group_index(i), bin}];
      cell.first += 1;
      cell.second += report.per_shot(i);
    }
    std::vector<BinPoint> curve;
    curve.reserve(bins.size());
    for (const auto& [key, cell] : bins) {
      BinPoint pt;
      pt.level = group_levels[static_cast<std::size_t>(key.first)];
      pt.bin_low = static_cast<double>(key.second) * width;
      pt.count = cell.first;
      pt.mean_adjustment = cell.second / static_cast<double>(cell.first);
      curve.push_back(std::move(pt));
    }
    return curve;
  };
  if (distance.size() == n) report.distance_curve = binned(distance, 5.0);
  if (angle.size() == n) report.angle_curve = binned(angle, 10.0);
  return report;
}

std::vector<TheoreticalAdjustment> bayes_theorem_adjustment(
    const Eigen::VectorXd& baseline_pred, const Eigen::VectorXi& group_index,
    const std::vector<std::string>& group_levels,
    const Eigen::VectorXd& outcomes) {
  check_lengths(baseline_pred, outcomes, "bayes_theorem_adjustment");
  if (group_index.size() != baseline_pred.size()) {
    throw GroupMismatchError("group index length does not match predictions");
  }
  const Eigen::Index n = baseline_pred.size();
  const int n_levels = static_cast<int>(group_levels.size());

  std::vector<long> shots(static_cast<std::size_t>(n_levels), 0);
  std::vector<long> goals(static_cast<std::size_t>(n_levels), 0);
  long total_goals = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(group_index(i));
    ++shots[k];
    if (outcomes(i) > 0.5) {
      ++goals[k];
      ++total_goals;
    }
  }
  if (total_goals == 0) throw EmptyGroupError("no goals in the data");

  std::vector<TheoreticalAdjustment> out;
  out.reserve(static_cast<std::size_t>(n_levels));
  for (int k = 0; k < n_levels; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    if (shots[ks] == 0) {
      throw EmptyGroupError("group has no shots: " + group_levels[ks]);
    }
    TheoreticalAdjustment t;
    t.level = group_levels[ks];
    t.count = shots[ks];
    t.share = static_cast<double>(shots[ks]) / static_cast<double>(n);
    const double p_group_given_goal =
        static_cast<double>(goals[ks]) / static_cast<double>(total_goals);
    t.lift = p_group_given_goal / t.share;
    out.push_back(std::move(t));
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    auto& t = out[static_cast<std::size_t>(group_index(i))];
    const double adjusted =
        std::clamp(baseline_pred(i) * t.lift, 0.0, 1.0);
    t.mean_adjustment += adjusted - baseline_pred(i);
  }
  for (auto& t : out) t.mean_adjustment /= static_cast<double>(t.count);
  return out;
}

std::vector<ConversionRow> select_players(const std::vector<FeatureRow>& rows,
                                          long min_shots) {
  std::unordered_map<std::string, std::pair<long, long>> counts;  // shots, goals
  for (const auto& r : rows) {
    auto& cell = counts[r.player_name];
    ++cell.first;
    if (r.outcome_goal) ++cell.second;
  }
  std::vector<ConversionRow> table;
  for (const auto& [player, cell] : counts) {
    if (cell.first < min_shots) continue;
    ConversionRow row;
    row.player = player;
    row.shots = cell.first;
    row.goals = cell.second;
    row.rate = static_cast<double>(cell.second) / static_cast<double>(cell.first);
    table.push_back(std::move(row));
  }
  std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
    if (a.rate != b.rate) return a.rate > b.rate;
    if (a.shots != b.shots) return a.shots > b.shots;
    return a.player < b.player;
  });
  return table;
}

std::vector<PlayerTotals> totals_report(
    const std::vector<std::string>& players, const std::vector<FeatureRow>& rows,
    const Eigen::VectorXd& baseline_pred, const Eigen::VectorXd& adjusted_pred,
    const std::vector<std::string>& group_levels) {
  check_lengths(baseline_pred, adjusted_pred, "totals_report");
  if (rows.size() != static_cast<std::size_t>(baseline_pred.size())) {
    throw LengthMismatchError("rows and predictions differ in length");
  }
  std::vector<PlayerTotals> out;
  out.reserve(players.size());
  for (const auto& name : players) {
    PlayerTotals totals;
    totals.player = name;
    bool seen = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].player_name != name) continue;
      seen = true;
      ++totals.shots;
      if (rows[i].outcome_goal) ++totals.goals;
      totals.baseline_xg += baseline_pred(static_cast<Eigen::Index>(i));
      totals.adjusted_xg += adjusted_pred(static_cast<Eigen::Index>(i));
    }
    if (!seen &&
        std::find(group_levels.begin(), group_levels.end(), name) ==
            group_levels.end()) {
      throw MissingPlayerError(name);
    }
    out.push_back(std::move(totals));
  }
  return out;
}

std::vector<PriorCaseResult> prior_sensitivity(
    const features::DesignMatrix& design, const Eigen::VectorXd& outcomes,
    const Eigen::VectorXd& reference_pred, const bayes::SamplerConfig& config) {
  const auto cases = bayes::sensitivity_prior_cases(design);
  std::vector<PriorCaseResult> results;
  results.reserve(cases.size());
  for (std::size_t c = 0; c < cases.size(); ++c) {
    PriorCaseResult res;
    res.name = cases[c].name;
    try {
      bayes::ModelSpec spec;
      spec.predictors = features::PredictorSet::extended;
      spec.grouping = features::Grouping::none;
      spec.intercept_prior = cases[c].intercept_prior;
      spec.coef_priors = cases[c].coef_priors;

      bayes::SamplerConfig case_config = config;
      case_config.seed = config.seed + 1000 * (c + 1);  // isolated streams
      const auto samples = bayes::fit(spec, design, outcomes, case_config);
      const auto pred = bayes::posterior_predict(samples, design);

      res.mean_prediction = pred.mean;
      res.per_draw_msd =
          pred.draw_mean.array() - reference_pred.mean();
      std::vector<double> p(pred.mean.data(), pred.mean.data() + pred.mean.size());
      res.pred_q25 = bayes::quantile(p, 0.25);
      res.pred_q50 = bayes::quantile(p, 0.50);
      res.pred_q75 = bayes::quantile(p, 0.75);
      res.pred_iqr = res.pred_q75 - res.pred_q25;
      std::vector<double> m(res.per_draw_msd.data(),
                            res.per_draw_msd.data() + res.per_draw_msd.size());
      res.msd_q25 = bayes::quantile(m, 0.25);
      res.msd_q50 = bayes::quantile(m, 0.50);
      res.msd_q75 = bayes::quantile(m, 0.75);
      res.msd_iqr = res.msd_q75 - res.msd_q25;
      res.mean_accept = samples.mean_accept();
      res.divergences = samples.total_divergences();
      res.ok = true;
    } catch (const std::exception& e) {
      res.ok = false;
      res.error = e.what();
    }
    results.push_back(std::move(res));
  }
  return results;
}

std::vector<SweepPoint> feature_count_sweep(const features::DesignMatrix& extended,
                                            const Eigen::VectorXd& outcomes,
                                            const Eigen::VectorXd& reference) {
  std::vector<SweepPoint> sweep;
  for (Eigen::Index k = 1; k <= extended.cols(); ++k) {
    features::DesignMatrix sub;
    sub.X = extended.X.leftCols(k);
    sub.columns.assign(extended.columns.begin(), extended.columns.begin() + k);
    const auto fit = glm::fit_logistic(sub, outcomes);
    const auto pred = glm::predict_proba(fit, sub);
    SweepPoint pt;
    pt.n_columns = static_cast<int>(k);
    pt.last_column = extended.columns[static_cast<std::size_t>(k - 1)].name;
    pt.brier = brier(pred, outcomes);
    const auto metrics = regression_metrics(pred, reference);
    pt.rmse = metrics.rmse;
    pt.mae = metrics.mae;
    pt.r2 = metrics.r2;
    sweep.push_back(std::move(pt));
  }
  return sweep;
}

}  // namespace bayesxg::analysis
