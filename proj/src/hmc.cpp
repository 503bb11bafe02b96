#include "bayesxg/bayes/hmc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "bayesxg/errors.hpp"
#include "bayesxg/rng.hpp"

namespace bayesxg::bayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

/// Hoffman & Gelman's dual-averaging recursion for the log step size,
/// targeting a fixed acceptance statistic.
class DualAveraging {
public:
  DualAveraging(double eps0, double target) : target_(target) { restart(eps0); }

  void restart(double eps0) {
    mu_ = std::log(10.0 * eps0);
    log_eps_ = std::log(eps0);
    log_eps_bar_ = std::log(eps0);
    h_bar_ = 0.0;
    count_ = 1;
  }

  void observe(double accept) {
    const double frac = 1.0 / (count_ + kT0);
    h_bar_ = (1.0 - frac) * h_bar_ + frac * (target_ - accept);
    log_eps_ = mu_ - std::sqrt(static_cast<double>(count_)) / kGamma * h_bar_;
    const double eta = std::pow(static_cast<double>(count_), -kKappa);
    log_eps_bar_ = eta * log_eps_ + (1.0 - eta) * log_eps_bar_;
    ++count_;
  }

  double current() const { return std::exp(log_eps_); }
  double averaged() const { return std::exp(log_eps_bar_); }

private:
  static constexpr double kGamma = 0.05;
  static constexpr double kT0 = 10.0;
  static constexpr double kKappa = 0.75;
  double target_;
  double mu_ = 0.0;
  double log_eps_ = 0.0;
  double log_eps_bar_ = 0.0;
  double h_bar_ = 0.0;
  int count_ = 1;
};

/// Streaming variance estimate for the diagonal metric.
class Welford {
public:
  void reset(int dim) {
    mean_.setZero(dim);
    m2_.setZero(dim);
    n_ = 0;
  }
  void add(const Eigen::VectorXd& x) {
    ++n_;
    Eigen::VectorXd delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta.cwiseProduct(x - mean_);
  }
  long count() const { return n_; }
  Eigen::VectorXd variance() const {
    return m2_ / static_cast<double>(n_ - 1);
  }

private:
  Eigen::VectorXd mean_, m2_;
  long n_ = 0;
};

struct AdaptSchedule {
  int init_buffer = 75;
  int term_buffer = 50;
  std::vector<int> window_ends;  // warmup iterations at which the metric updates
};

AdaptSchedule make_schedule(int warmup) {
  AdaptSchedule s;
  int init = 75, term = 50, base = 25;
  if (warmup < init + base + term) {
    init = std::max(1, static_cast<int>(0.15 * warmup));
    term = std::max(1, static_cast<int>(0.10 * warmup));
    base = warmup - init - term;
    if (base < 10) {
      // Too short for metric estimation; step-size adaptation only.
      s.init_buffer = warmup;
      s.term_buffer = 0;
      return s;
    }
  }
  s.init_buffer = init;
  s.term_buffer = term;
  const int slow_end = warmup - term;
  int pos = init;
  int size = base;
  while (pos + size <= slow_end) {
    if (pos + size + 2 * size > slow_end) {
      s.window_ends.push_back(slow_end);
      break;
    }
    s.window_ends.push_back(pos + size);
    pos += size;
    size *= 2;
  }
  return s;
}

struct Phase {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  Eigen::VectorXd grad;
  double logp = 0.0;
};

struct SamplePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd grad;
  double logp = 0.0;
};

struct TreeResult {
  Phase minus, plus;
  SamplePoint sample;
  double log_sum_weight = kNegInf;
  double sum_accept = 0.0;
  int n_leapfrog = 0;
  bool ok = false;
  bool divergent = false;
};

struct Transition {
  SamplePoint sample;
  double accept_stat = 0.0;
  bool divergent = false;
  int depth = 0;
};

class ChainSampler {
public:
  ChainSampler(const Target& target, const SamplerConfig& cfg, Rng rng)
      : target_(target), cfg_(cfg), rng_(std::move(rng)) {
    inv_mass_ = Eigen::VectorXd::Ones(target_.dim());
  }

  double eval(const Eigen::VectorXd& q, Eigen::VectorXd& grad) {
    double logp = target_.log_density(q, grad);
    if (std::isnan(logp)) logp = kNegInf;
    if (std::isfinite(logp) && !grad.allFinite()) {
      throw NonFiniteGradientError("non-finite gradient at a finite-density point");
    }
    return logp;
  }

  void initialize() {
    const int d = target_.dim();
    Eigen::VectorXd grad(d);
    for (int attempt = 0; attempt < 100; ++attempt) {
      Eigen::VectorXd q(d);
      for (int j = 0; j < d; ++j) {
        q(j) = rng_.uniform(-cfg_.init_radius, cfg_.init_radius);
      }
      const double logp = eval(q, grad);
      if (std::isfinite(logp)) {
        state_ = {q, grad, logp};
        return;
      }
    }
    throw Error("failed to find a finite-density initial point");
  }

  double kinetic(const Eigen::VectorXd& p) const {
    return 0.5 * p.cwiseProduct(p).dot(inv_mass_);
  }

  void leapfrog(Phase& s, double step) {
    s.p += 0.5 * step * s.grad;
    s.q += step * inv_mass_.cwiseProduct(s.p);
    s.logp = eval(s.q, s.grad);
    s.p += 0.5 * step * s.grad;
  }

  Eigen::VectorXd draw_momentum() {
    Eigen::VectorXd p(target_.dim());
    for (int j = 0; j < target_.dim(); ++j) {
      p(j) = rng_.normal() / std::sqrt(inv_mass_(j));
    }
    return p;
  }

  double joint(const Phase& s) const {
    return std::isfinite(s.logp) ? s.logp - kinetic(s.p) : kNegInf;
  }

  double find_reasonable_step() {
    Phase s0;
    s0.q = state_.q;
    s0.grad = state_.grad;
    s0.logp = state_.logp;
    s0.p = draw_momentum();
    const double joint0 = joint(s0);
    double eps = 1.0;

    auto log_ratio = [&](double step) {
      Phase s = s0;
      leapfrog(s, step);
      const double j1 = joint(s);
      return std::isfinite(j1) ? j1 - joint0 : kNegInf;
    };

    double a = log_ratio(eps);
    const double half = std::log(0.5);
    const int dir = a > half ? 1 : -1;
    for (int iter = 0; iter < 100; ++iter) {
      eps *= dir > 0 ? 2.0 : 0.5;
      if (eps > 1e7 || eps < 1e-10) break;
      a = log_ratio(eps);
      if (dir > 0 && a <= half) break;
      if (dir < 0 && a >= half) break;
    }
    return std::clamp(eps, 1e-10, 1e7);
  }

  bool uturn(const Phase& minus, const Phase& plus) const {
    const Eigen::VectorXd dq = plus.q - minus.q;
    return dq.dot(inv_mass_.cwiseProduct(minus.p)) < 0.0 ||
           dq.dot(inv_mass_.cwiseProduct(plus.p)) < 0.0;
  }

  TreeResult build_tree(int depth, const Phase& from, int dir, double joint0) {
    if (depth == 0) {
      TreeResult leaf;
      Phase s = from;
      leapfrog(s, dir * eps_);
      const double w = joint(s) - joint0;
      leaf.minus = s;
      leaf.plus = s;
      leaf.sample = {s.q, s.grad, s.logp};
      leaf.n_leapfrog = 1;
      if (std::isnan(w)) {
        leaf.log_sum_weight = kNegInf;
        leaf.sum_accept = 0.0;
      } else {
        leaf.log_sum_weight = w;
        leaf.sum_accept = std::min(1.0, std::exp(std::min(0.0, w)));
      }
      leaf.divergent = !(leaf.log_sum_weight > -cfg_.divergence_threshold);
      leaf.ok = !leaf.divergent;
      return leaf;
    }

    TreeResult first = build_tree(depth - 1, from, dir, joint0);
    if (!first.ok) return first;

    TreeResult second =
        build_tree(depth - 1, dir > 0 ? first.plus : first.minus, dir, joint0);

    TreeResult merged;
    merged.minus = dir > 0 ? first.minus : second.minus;
    merged.plus = dir > 0 ? second.plus : first.plus;
    merged.n_leapfrog = first.n_leapfrog + second.n_leapfrog;
    merged.sum_accept = first.sum_accept + second.sum_accept;
    merged.log_sum_weight = log_add_exp(first.log_sum_weight, second.log_sum_weight);
    if (!second.ok) {
      merged.ok = false;
      merged.divergent = second.divergent;
      merged.sample = first.sample;
      return merged;
    }
    // Multinomial choice between the two halves, weighted by their mass.
    const double pick_second = second.log_sum_weight - merged.log_sum_weight;
    merged.sample = std::log(rng_.uniform()) < pick_second ? second.sample
                                                           : first.sample;
    merged.divergent = false;
    merged.ok = !uturn(merged.minus, merged.plus);
    return merged;
  }

  Transition transit_dynamic() {
    Phase init;
    init.q = state_.q;
    init.grad = state_.grad;
    init.logp = state_.logp;
    init.p = draw_momentum();
    const double joint0 = joint(init);

    Phase left = init, right = init;
    SamplePoint sample = state_;
    double log_sum_weight = 0.0;  // the initial point carries weight exp(0)
    double sum_accept = 0.0;
    int n_leapfrog = 0;
    bool divergent = false;
    int depth = 0;

    while (depth < cfg_.max_treedepth) {
      const int dir = rng_.bernoulli(0.5) ? 1 : -1;
      TreeResult tree = build_tree(depth, dir > 0 ? right : left, dir, joint0);
      if (dir > 0) {
        right = tree.plus;
      } else {
        left = tree.minus;
      }
      sum_accept += tree.sum_accept;
      n_leapfrog += tree.n_leapfrog;
      if (!tree.ok) {
        divergent = tree.divergent;
        break;
      }
      // Progressive sampling biased toward the fresh subtree.
      if (std::log(rng_.uniform()) < tree.log_sum_weight - log_sum_weight) {
        sample = tree.sample;
      }
      log_sum_weight = log_add_exp(log_sum_weight, tree.log_sum_weight);
      ++depth;
      if (uturn(left, right)) break;
    }

    state_ = sample;
    Transition out;
    out.sample = sample;
    out.accept_stat = n_leapfrog > 0 ? sum_accept / n_leapfrog : 0.0;
    out.divergent = divergent;
    out.depth = depth;
    return out;
  }

  Transition transit_fixed() {
    Phase s;
    s.q = state_.q;
    s.grad = state_.grad;
    s.logp = state_.logp;
    s.p = draw_momentum();
    const double joint0 = joint(s);
    for (int step = 0; step < cfg_.fixed_path_steps; ++step) {
      leapfrog(s, eps_);
      if (!std::isfinite(s.logp)) break;
    }
    const double w = joint(s) - joint0;
    Transition out;
    out.depth = 0;
    out.accept_stat = std::isnan(w) ? 0.0 : std::min(1.0, std::exp(std::min(0.0, w)));
    out.divergent = !(w > -cfg_.divergence_threshold);
    if (!out.divergent && std::log(rng_.uniform()) < w) {
      state_ = {s.q, s.grad, s.logp};
    }
    out.sample = state_;
    return out;
  }

  Transition transit() { return cfg_.dynamic ? transit_dynamic() : transit_fixed(); }

  void run(Eigen::MatrixXd& draws, ChainStats& stats,
           const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& report) {
    initialize();
    eps_ = find_reasonable_step();
    DualAveraging da(eps_, cfg_.target_accept);
    const AdaptSchedule schedule = make_schedule(cfg_.warmup);
    Welford welford;
    welford.reset(target_.dim());
    std::size_t next_window = 0;

    const int retained = cfg_.draws - cfg_.warmup;
    double accept_sum = 0.0;

    for (int it = 0; it < cfg_.draws; ++it) {
      const Transition t = transit();
      if (it < cfg_.warmup) {
        da.observe(t.accept_stat);
        eps_ = std::clamp(da.current(), 1e-10, 1e7);
        const bool in_slow = it >= schedule.init_buffer &&
                             it < cfg_.warmup - schedule.term_buffer;
        if (in_slow) welford.add(state_.q);
        if (next_window < schedule.window_ends.size() &&
            it + 1 == schedule.window_ends[next_window]) {
          if (welford.count() > 2) {
            const double n = static_cast<double>(welford.count());
            const double shrink = n / (n + 5.0);
            inv_mass_ = shrink * welford.variance().array() +
                        1e-3 * (1.0 - shrink);
          }
          welford.reset(target_.dim());
          eps_ = find_reasonable_step();
          da.restart(eps_);
          ++next_window;
        }
        if (it + 1 == cfg_.warmup) eps_ = std::clamp(da.averaged(), 1e-10, 1e7);
      } else {
        const int row = it - cfg_.warmup;
        draws.row(row) = report ? report(state_.q).transpose() : state_.q.transpose();
        accept_sum += t.accept_stat;
        if (t.divergent) ++stats.divergences;
        if (t.depth >= cfg_.max_treedepth) ++stats.max_depth_hits;
      }
    }
    stats.mean_accept = retained > 0 ? accept_sum / retained : 0.0;
    stats.step_size = eps_;
  }

private:
  const Target& target_;
  const SamplerConfig& cfg_;
  Rng rng_;
  Eigen::VectorXd inv_mass_;
  double eps_ = 1.0;
  SamplePoint state_;
};

}  // namespace

double leapfrog_energy_error(const Target& target, const Eigen::VectorXd& q0,
                             const Eigen::VectorXd& p0, double step, int n_steps) {
  Eigen::VectorXd q = q0;
  Eigen::VectorXd p = p0;
  Eigen::VectorXd grad(q.size());
  double logp = target.log_density(q, grad);
  const double h0 = -logp + 0.5 * p.squaredNorm();
  for (int i = 0; i < n_steps; ++i) {
    p += 0.5 * step * grad;
    q += step * p;
    logp = target.log_density(q, grad);
    if (!std::isfinite(logp)) return std::numeric_limits<double>::infinity();
    p += 0.5 * step * grad;
  }
  return (-logp + 0.5 * p.squaredNorm()) - h0;
}

double PosteriorSamples::mean_accept() const {
  if (stats.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : stats) sum += s.mean_accept;
  return sum / static_cast<double>(stats.size());
}

int PosteriorSamples::total_divergences() const {
  int sum = 0;
  for (const auto& s : stats) sum += s.divergences;
  return sum;
}

Eigen::MatrixXd PosteriorSamples::stacked() const {
  if (chains.empty()) return {};
  const Eigen::Index per = chains.front().rows();
  const Eigen::Index dim = chains.front().cols();
  Eigen::MatrixXd all(per * static_cast<Eigen::Index>(chains.size()), dim);
  for (std::size_t c = 0; c < chains.size(); ++c) {
    all.middleRows(static_cast<Eigen::Index>(c) * per, per) = chains[c];
  }
  return all;
}

int PosteriorSamples::param_index(const std::string& name) const {
  for (std::size_t j = 0; j < param_names.size(); ++j) {
    if (param_names[j] == name) return static_cast<int>(j);
  }
  return -1;
}

PosteriorSamples run_hmc(
    const Target& target, const SamplerConfig& config,
    const std::vector<std::string>& param_names,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& report) {
  if (config.chains < 1) throw std::invalid_argument("chains must be >= 1");
  if (config.warmup < 0 || config.warmup >= config.draws) {
    throw std::invalid_argument("need 0 <= warmup < draws");
  }

  const int retained = config.draws - config.warmup;
  const int dim_report =
      report ? static_cast<int>(report(Eigen::VectorXd::Zero(target.dim())).size())
             : target.dim();

  PosteriorSamples out;
  out.param_names = param_names;
  if (out.param_names.empty()) {
    for (int j = 0; j < dim_report; ++j) {
      out.param_names.push_back("theta[" + std::to_string(j) + "]");
    }
  }
  out.draws = config.draws;
  out.warmup = config.warmup;
  out.seed = config.seed;
  out.chains.assign(static_cast<std::size_t>(config.chains),
                    Eigen::MatrixXd(retained, dim_report));
  out.stats.assign(static_cast<std::size_t>(config.chains), ChainStats{});

  std::vector<std::exception_ptr> failures(
      static_cast<std::size_t>(config.chains));
  auto run_chain = [&](int c) {
    try {
      Rng rng = Rng::for_chain(config.seed, static_cast<std::uint64_t>(c));
      out.stats[static_cast<std::size_t>(c)].seed = config.seed;
      ChainSampler sampler(target, config, std::move(rng));
      sampler.run(out.chains[static_cast<std::size_t>(c)],
                  out.stats[static_cast<std::size_t>(c)], report);
    } catch (...) {
      failures[static_cast<std::size_t>(c)] = std::current_exception();
    }
  };

  const unsigned hardware = std::thread::hardware_concurrency();
  if (config.parallel_chains && hardware > 1 && config.chains > 1) {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(config.chains));
    for (int c = 0; c < config.chains; ++c) threads.emplace_back(run_chain, c);
    for (auto& t : threads) t.join();
  } else {
    for (int c = 0; c < config.chains; ++c) run_chain(c);
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  const long total_retained = static_cast<long>(retained) * config.chains;
  out.divergence_flag =
      total_retained > 0 &&
      static_cast<double>(out.total_divergences()) >
          config.max_divergence_rate * static_cast<double>(total_retained);
  return out;
}

}  // namespace bayesxg::bayes
