#ifndef SLGH_OPTIMIZERS_HPP
#define SLGH_OPTIMIZERS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slgh/core.hpp"
#include "slgh/objectives.hpp"
#include "slgh/smoothing.hpp"

namespace slgh {

enum class Algorithm { SLGH, ZOSLGH, ZOSLGH_ERR, GRADOPT, GD, SGD, ZOGD, ZOSGD };
enum class OracleOrder { First, Zeroth };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::SLGH: return "SLGH";
    case Algorithm::ZOSLGH: return "ZOSLGH";
    case Algorithm::ZOSLGH_ERR: return "ZOSLGH_ERR";
    case Algorithm::GRADOPT: return "GRADOPT";
    case Algorithm::GD: return "GD";
    case Algorithm::SGD: return "SGD";
    case Algorithm::ZOGD: return "ZOGD";
    case Algorithm::ZOSGD: return "ZOSGD";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::SLGH, Algorithm::ZOSLGH, Algorithm::ZOSLGH_ERR, Algorithm::GRADOPT,
                 Algorithm::GD, Algorithm::SGD, Algorithm::ZOGD, Algorithm::ZOSGD}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

/// Algorithms whose x-step only uses function values.
inline OracleOrder natural_order(Algorithm a) {
  switch (a) {
    case Algorithm::ZOSLGH:
    case Algorithm::ZOSLGH_ERR:
    case Algorithm::ZOGD:
    case Algorithm::ZOSGD:
      return OracleOrder::Zeroth;
    default:
      return OracleOrder::First;
  }
}

// --------------------------------------------------------------------------
// Smoothing-parameter schedules.

/// t <- gamma t.
struct FixedRatio {
  double gamma = 0.999;
  double eps_prime = 1e-8;  // run floor
};

/// t <- max(min(t - eta g_t, gamma t), eps').
struct DerivativeClamp {
  double eta = 0.01;
  double gamma = 0.999;
  double eps_prime = 1e-8;
};

using TUpdateRule = std::variant<FixedRatio, DerivativeClamp>;

inline double rule_gamma(const TUpdateRule& r) {
  return std::visit([](const auto& v) { return v.gamma; }, r);
}
inline double rule_eps_prime(const TUpdateRule& r) {
  return std::visit([](const auto& v) { return v.eps_prime; }, r);
}
inline bool uses_derivative(const TUpdateRule& r) {
  return std::holds_alternative<DerivativeClamp>(r);
}

/// One smoothing-parameter update. `floor` overrides the rule's eps' (the
/// error-tolerant variant floors at sqrt(nu)). gamma = 1 is accepted so that
/// the fixed-t baselines are a special case.
inline double update_t(double t, const TUpdateRule& rule, std::optional<double> g_t = std::nullopt,
                       std::optional<double> floor = std::nullopt) {
  const double lo = floor.value_or(rule_eps_prime(rule));
  if (const auto* fr = std::get_if<FixedRatio>(&rule)) {
    if (g_t) throw ArgumentError("update_t: fixed-ratio rule takes no derivative");
    return std::max(fr->gamma * t, lo);
  }
  const auto& dc = std::get<DerivativeClamp>(rule);
  if (!g_t) throw ArgumentError("update_t: derivative rule needs g_t");
  return std::max(std::min(t - dc.eta * *g_t, dc.gamma * t), lo);
}

inline void validate_rule(const TUpdateRule& rule) {
  const double gamma = rule_gamma(rule);
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0,1]");
  if (!(rule_eps_prime(rule) > 0.0)) throw ConfigError("eps_prime must be > 0");
  if (const auto* dc = std::get_if<DerivativeClamp>(&rule); dc && !(dc->eta > 0.0)) {
    throw ConfigError("eta must be > 0");
  }
}

// --------------------------------------------------------------------------
// Run configuration and trace.

/// GradOpt inner-loop termination: leave the inner loop once the change in
/// the (estimated) smoothed value has been <= eps0 on n0 iterations.
struct InnerStop {
  int n0 = 50;
  double eps0 = 1e-3;
};

struct RunConfig {
  Algorithm algorithm = Algorithm::GD;
  OracleOrder oracle_order = OracleOrder::First;
  bool stochastic = false;
  Vector x0;
  double t1 = 0.0;
  int iterations = 1;  // T
  double beta = 1e-3;
  TUpdateRule t_rule = FixedRatio{};
  std::size_t minibatch = 1;
  std::optional<double> fixed_t;
  std::optional<double> nu;
  std::optional<InnerStop> inner_stop;
  std::optional<double> l1;  // overrides the objective's L1 metadata
  std::uint64_t seed = 0;
};

struct IterationRecord {
  int k = 0;
  Vector x;
  double t = 0.0;
  double f_true = 0.0;         // f(x), the underlying objective, never F
  double grad_est_norm = 0.0;  // norm of the x-step direction computed at x_k
  std::uint64_t evals = 0;     // oracle queries spent before this record
};

enum class ReportPolicy { Final, ArgminF, ArgminGradNorm };

struct ReportedIterates {
  Vector final;
  Vector argmin_f;
  Vector argmin_gradnorm;
};

/// Records hold T + 1 entries, k = 0..T. The last record carries the
/// gradient norm of the underlying objective at x_T (analytic when available,
/// central differences otherwise), since no further step is taken there.
struct RunTrace {
  RunConfig config;
  std::vector<IterationRecord> records;
  ReportedIterates reported;
};

// --------------------------------------------------------------------------

namespace detail {

inline double fd_gradient_norm(const std::function<double(const Vector&)>& f, const Vector& x) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g.norm();
}

inline double true_gradient_norm(const Objective& obj, const Vector& x) {
  if (obj.has_gradient() && !obj.true_value) return obj.gradient(x).norm();
  return fd_gradient_norm([&obj](const Vector& p) { return obj.eval_true(p); }, x);
}

/// Wraps the objective's oracles so every query is counted.
class CountingOracle {
public:
  explicit CountingOracle(const Objective& obj) : obj_(obj) {}

  double value(const Vector& x) {
    ++count_;
    return obj_.value(x);
  }
  double value(const Vector& x, const Vector* xi) {
    if (!xi) return value(x);
    ++count_;
    return obj_.stochastic->value(x, *xi);
  }
  Vector gradient(const Vector& x, const Vector* xi) {
    ++count_;
    return xi ? obj_.stochastic->gradient(x, *xi) : obj_.gradient(x);
  }
  double smoothed_value(const Vector& x, double t, const Vector* xi) {
    ++count_;
    return xi ? obj_.stochastic->smoothed->value_t(x, t, *xi) : obj_.smoothed->value_t(x, t);
  }
  Vector smoothed_gradient(const Vector& x, double t, const Vector* xi) {
    ++count_;
    return xi ? obj_.stochastic->smoothed->grad_t(x, t, *xi) : obj_.smoothed->grad_t(x, t);
  }
  double smoothed_dt(const Vector& x, double t, const Vector* xi) {
    ++count_;
    return xi ? obj_.stochastic->smoothed->dt(x, t, *xi) : obj_.smoothed->dt(x, t);
  }

  std::uint64_t count() const noexcept { return count_; }

private:
  const Objective& obj_;
  std::uint64_t count_ = 0;
};

class TraceBuilder {
public:
  TraceBuilder(const Objective& obj, const RunConfig& cfg) : obj_(obj) {
    trace_.config = cfg;
    trace_.records.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  }

  void push(int k, const Vector& x, double t, double grad_norm, std::uint64_t evals) {
    if (!x.allFinite()) throw DivergenceError("iterate became non-finite at k=" + std::to_string(k), k);
    const double f = obj_.eval_true(x);
    if (!std::isfinite(f)) {
      throw DivergenceError("objective value became non-finite at k=" + std::to_string(k), k);
    }
    trace_.records.push_back(IterationRecord{k, x, t, f, grad_norm, evals});
  }

  void push_final(int k, const Vector& x, double t, std::uint64_t evals) {
    if (!x.allFinite()) throw DivergenceError("iterate became non-finite at k=" + std::to_string(k), k);
    push(k, x, t, true_gradient_norm(obj_, x), evals);
  }

  RunTrace finish(bool zeroth_order);

private:
  const Objective& obj_;
  RunTrace trace_;
};

struct ZoBatch {
  Vector grad;
  double fx = 0.0;
  double mean_perturbed = 0.0;  // (1/M) sum f(x + t u_i)
};

/// Minibatch of two-point estimators sharing one evaluation of f(x).
inline ZoBatch zo_minibatch(CountingOracle& oracle, const Vector& x, double t, std::size_t m,
                            GaussianStream& dirs, const Vector* xi) {
  ZoBatch b;
  b.fx = oracle.value(x, xi);
  b.grad = Vector::Zero(x.size());
  for (std::size_t i = 0; i < m; ++i) {
    const Vector u = dirs.next(x.size());
    const double fu = oracle.value(x + t * u, xi);
    b.grad += zo_grad_from_values(b.fx, fu, t, u);
    b.mean_perturbed += fu;
  }
  b.grad /= static_cast<double>(m);
  b.mean_perturbed /= static_cast<double>(m);
  return b;
}

inline double stein_minibatch(CountingOracle& oracle, const Vector& x, double fx, double t,
                              std::size_t m, GaussianStream& dirs, const Vector* xi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vector v = dirs.next(x.size());
    acc += zo_t_derivative_from_values(fx, oracle.value(x + t * v, xi), t, v);
  }
  return acc / static_cast<double>(m);
}

inline void check_common(const Objective& obj, const RunConfig& cfg) {
  if (cfg.x0.size() != obj.dim) {
    throw ConfigError("x0 has dimension " + std::to_string(cfg.x0.size()) + ", objective '" +
                      obj.name + "' expects " + std::to_string(obj.dim));
  }
  if (cfg.iterations < 0) throw ConfigError("iteration budget T must be >= 0");
  if (!(cfg.beta > 0.0)) throw ConfigError("step size beta must be > 0");
  if (cfg.minibatch == 0) throw ConfigError("minibatch must be positive");
  validate_rule(cfg.t_rule);
}

inline void check_stochastic(const Objective& obj) {
  if (!obj.stochastic) {
    throw ConfigError("stochastic run requested but '" + obj.name + "' has no stochastic oracle");
  }
}

}  // namespace detail

/// Picks one iterate from a trace. For zeroth-order traces pass the objective
/// so that ArgminGradNorm can use central-difference gradient norms of f;
/// otherwise the recorded estimator norms are used.
inline Vector select_reported_iterate(const RunTrace& trace, ReportPolicy policy,
                                      const Objective* zeroth_order_objective = nullptr) {
  const auto& rs = trace.records;
  if (rs.empty()) throw ArgumentError("select_reported_iterate: empty trace");
  switch (policy) {
    case ReportPolicy::Final:
      return rs.back().x;
    case ReportPolicy::ArgminF: {
      auto it = std::min_element(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
        return a.f_true < b.f_true;
      });
      return it->x;
    }
    case ReportPolicy::ArgminGradNorm:
    default: {
      std::size_t best = 0;
      double best_norm = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const double n = zeroth_order_objective
                             ? detail::true_gradient_norm(*zeroth_order_objective, rs[i].x)
                             : rs[i].grad_est_norm;
        if (n < best_norm) {
          best_norm = n;
          best = i;
        }
      }
      return rs[best].x;
    }
  }
}

inline RunTrace detail::TraceBuilder::finish(bool zeroth_order) {
  const Objective* zo = zeroth_order ? &obj_ : nullptr;
  trace_.reported.final = select_reported_iterate(trace_, ReportPolicy::Final);
  trace_.reported.argmin_f = select_reported_iterate(trace_, ReportPolicy::ArgminF);
  trace_.reported.argmin_gradnorm = select_reported_iterate(trace_, ReportPolicy::ArgminGradNorm, zo);
  return std::move(trace_);
}

// --------------------------------------------------------------------------
// First-order single-loop homotopy (deterministic or stochastic).

/// Joint descent on F(x, t): x <- x - beta G_x, then the t-update. G_x is the
/// closed-form smoothed gradient when available, otherwise the Monte-Carlo
/// mean of grad f(x + t u_i) over `minibatch` draws. The derivative rule uses
/// the analytic dF/dt of a closed form, else the Stein estimator mean.
/// t1 = 0 pins t at zero (plain gradient descent).
inline RunTrace slgh_run(const Objective& obj, const RunConfig& cfg) {
  detail::check_common(obj, cfg);
  if (!(cfg.t1 >= 0.0)) throw ConfigError("t1 must be >= 0");
  const bool stochastic = cfg.stochastic;
  if (stochastic) detail::check_stochastic(obj);
  const bool closed = stochastic ? obj.stochastic && obj.stochastic->smoothed.has_value()
                                 : obj.smoothed.has_value();
  const bool has_grad = stochastic ? static_cast<bool>(obj.stochastic->gradient) : obj.has_gradient();
  if (!closed && !has_grad) {
    throw ConfigError("SLGH needs a smoothed gradient: '" + obj.name +
                      "' has neither a closed form nor an analytic gradient");
  }
  const bool derivative = uses_derivative(cfg.t_rule);
  const bool pinned = cfg.t1 == 0.0;

  GaussianStream dirs(cfg.seed, kDirectionStream);
  GaussianStream tdirs(cfg.seed, kTDerivStream);
  GaussianStream noise(cfg.seed, kNoiseStream);
  detail::CountingOracle oracle(obj);
  detail::TraceBuilder tb(obj, cfg);

  Vector x = cfg.x0;
  double t = cfg.t1;
  for (int k = 0; k < cfg.iterations; ++k) {
    std::optional<Vector> xi_storage;
    if (stochastic) xi_storage = obj.stochastic->sample(noise);
    const Vector* xi = xi_storage ? &*xi_storage : nullptr;
    const std::uint64_t evals_before = oracle.count();

    Vector gx;
    if (closed) {
      gx = oracle.smoothed_gradient(x, t, xi);
    } else if (t == 0.0) {
      gx = oracle.gradient(x, xi);
    } else {
      gx = Vector::Zero(obj.dim);
      for (std::size_t i = 0; i < cfg.minibatch; ++i) gx += oracle.gradient(x + t * dirs.next(obj.dim), xi);
      gx /= static_cast<double>(cfg.minibatch);
    }

    std::optional<double> gt;
    if (derivative && !pinned) {
      if (closed) {
        gt = oracle.smoothed_dt(x, t, xi);
      } else {
        const double fx = oracle.value(x, xi);
        gt = detail::stein_minibatch(oracle, x, fx, t, cfg.minibatch, tdirs, xi);
      }
    }

    tb.push(k, x, t, gx.norm(), evals_before);
    x -= cfg.beta * gx;
    if (!pinned) t = update_t(t, cfg.t_rule, gt);
  }
  tb.push_final(cfg.iterations, x, t, oracle.count());
  return tb.finish(false);
}

// --------------------------------------------------------------------------
// Zeroth-order single loop.

namespace detail {

struct ZoLoopOptions {
  bool update_t = true;
  double floor = 1e-8;
  std::function<double(int, double)> step;  // (k, t) -> beta_k
};

inline RunTrace zo_loop(const Objective& obj, const RunConfig& cfg, bool stochastic,
                        const ZoLoopOptions& opt) {
  if (!(cfg.t1 > 0.0)) throw ConfigError("zeroth-order runs need t1 > 0");
  if (stochastic) check_stochastic(obj);
  const bool derivative = opt.update_t && uses_derivative(cfg.t_rule);

  GaussianStream dirs(cfg.seed, kDirectionStream);
  GaussianStream tdirs(cfg.seed, kTDerivStream);
  GaussianStream noise(cfg.seed, kNoiseStream);
  CountingOracle oracle(obj);
  TraceBuilder tb(obj, cfg);

  Vector x = cfg.x0;
  double t = cfg.t1;
  for (int k = 0; k < cfg.iterations; ++k) {
    std::optional<Vector> xi_storage;
    if (stochastic) xi_storage = obj.stochastic->sample(noise);
    const Vector* xi = xi_storage ? &*xi_storage : nullptr;
    const std::uint64_t evals_before = oracle.count();

    const ZoBatch batch = zo_minibatch(oracle, x, t, cfg.minibatch, dirs, xi);
    std::optional<double> gt;
    if (derivative) gt = stein_minibatch(oracle, x, batch.fx, t, cfg.minibatch, tdirs, xi);

    tb.push(k, x, t, batch.grad.norm(), evals_before);
    x -= opt.step(k, t) * batch.grad;
    if (opt.update_t) t = update_t(t, cfg.t_rule, gt, opt.floor);
  }
  tb.push_final(cfg.iterations, x, t, oracle.count());
  return tb.finish(true);
}

}  // namespace detail

/// Zeroth-order single-loop homotopy. Each iteration averages `minibatch`
/// two-point estimators for the x-step and, for the derivative rule,
/// `minibatch` Stein estimators for the t-step. t never drops below eps'.
inline RunTrace zoslgh_run(const Objective& obj, const RunConfig& cfg) {
  detail::check_common(obj, cfg);
  detail::ZoLoopOptions opt;
  opt.floor = rule_eps_prime(cfg.t_rule);
  opt.step = [beta = cfg.beta](int, double) { return beta; };
  return detail::zo_loop(obj, cfg, cfg.stochastic, opt);
}

/// Step size of the error-tolerant variant: 1 / (16 (d + 4) L1(t)) with
/// L1(t) = L1 + 2 nu / t^2; capped at 1 / sqrt(T (d + 4)) when stochastic.
inline double error_tolerant_step(int dim, double l1, double nu, double t, int iterations,
                                  bool stochastic) {
  const double d4 = static_cast<double>(dim) + 4.0;
  double beta = 1.0 / (16.0 * d4 * (l1 + 2.0 * nu / (t * t)));
  if (stochastic) beta = std::min(beta, 1.0 / std::sqrt(static_cast<double>(iterations) * d4));
  return beta;
}

/// Zeroth-order homotopy on an error-contaminated objective. The t floor is
/// sqrt(nu) (eps' when nu = 0) and cfg.beta is replaced by the step schedule
/// above, with L1 taken from cfg.l1 or the objective's metadata.
inline RunTrace zoslgh_error_run(const Objective& obj, const RunConfig& cfg) {
  detail::check_common(obj, cfg);
  if (!cfg.nu) throw ConfigError("ZOSLGH_ERR needs the error level nu");
  if (!(*cfg.nu >= 0.0)) throw ConfigError("nu must be >= 0");
  const std::optional<double> l1 = cfg.l1 ? cfg.l1 : obj.grad_lipschitz_l1;
  if (!l1) throw ConfigError("ZOSLGH_ERR needs L1 (set l1 or use an objective with L1 metadata)");
  const double nu = *cfg.nu;
  detail::ZoLoopOptions opt;
  opt.floor = nu > 0.0 ? std::sqrt(nu) : rule_eps_prime(cfg.t_rule);
  opt.step = [dim = obj.dim, l1 = *l1, nu, T = cfg.iterations, s = cfg.stochastic](int, double t) {
    return error_tolerant_step(dim, l1, nu, t, T, s);
  };
  return detail::zo_loop(obj, cfg, cfg.stochastic, opt);
}

// --------------------------------------------------------------------------
// Double-loop GradOpt.

/// Outer loop t <- max(gamma t, eps'), inner loop of gradient steps at fixed
/// t. The inner loop ends once |F(x_{k+1}, t) - F(x_k, t)| <= eps0 has held
/// n0 times (not necessarily consecutively). For zeroth order the smoothed
/// values are the minibatch means (1/M) sum f(x_k + t u_i) already spent on
/// the gradient estimator, so consecutive iterations compare independent
/// samples. All inner iterations share the global budget T.
inline RunTrace gradopt_run(const Objective& obj, const RunConfig& cfg) {
  detail::check_common(obj, cfg);
  if (!cfg.inner_stop) throw ConfigError("GRADOPT needs inner_stop (n0, eps0)");
  const InnerStop stop = *cfg.inner_stop;
  if (stop.n0 <= 0) throw ConfigError("inner_stop.n0 must be positive");
  if (!(stop.eps0 >= 0.0)) throw ConfigError("inner_stop.eps0 must be >= 0");
  if (!(cfg.t1 > 0.0)) throw ConfigError("GRADOPT needs t1 > 0");
  const double gamma = rule_gamma(cfg.t_rule);
  const double floor = rule_eps_prime(cfg.t_rule);
  const bool stochastic = cfg.stochastic;
  if (stochastic) detail::check_stochastic(obj);
  const bool zeroth = cfg.oracle_order == OracleOrder::Zeroth;

  GaussianStream dirs(cfg.seed, kDirectionStream);
  GaussianStream noise(cfg.seed, kNoiseStream);
  detail::CountingOracle oracle(obj);
  detail::TraceBuilder tb(obj, cfg);

  const bool closed = stochastic ? obj.stochastic->smoothed.has_value() : obj.smoothed.has_value();
  if (!zeroth && !closed) {
    const bool has_grad =
        stochastic ? static_cast<bool>(obj.stochastic->gradient) : obj.has_gradient();
    if (!has_grad) throw ConfigError("first-order GRADOPT needs a gradient or closed form");
  }

  Vector x = cfg.x0;
  double t = cfg.t1;
  int hits = 0;
  double previous = 0.0;  // smoothed value at x_k for the current t
  bool have_previous = false;

  for (int k = 0; k < cfg.iterations; ++k) {
    std::optional<Vector> xi_storage;
    if (stochastic) xi_storage = obj.stochastic->sample(noise);
    const Vector* xi = xi_storage ? &*xi_storage : nullptr;
    const std::uint64_t evals_before = oracle.count();

    Vector gx;
    bool leave_inner = false;
    if (zeroth) {
      const detail::ZoBatch batch = detail::zo_minibatch(oracle, x, t, cfg.minibatch, dirs, xi);
      if (have_previous && std::abs(batch.mean_perturbed - previous) <= stop.eps0) ++hits;
      previous = batch.mean_perturbed;
      have_previous = true;
      gx = batch.grad;
      tb.push(k, x, t, gx.norm(), evals_before);
      x -= cfg.beta * gx;
    } else {
      auto smoothed_value = [&](const Vector& p) {
        if (closed) return oracle.smoothed_value(p, t, xi);
        double s = 0.0;
        for (std::size_t i = 0; i < cfg.minibatch; ++i) s += oracle.value(p + t * dirs.next(obj.dim), xi);
        return s / static_cast<double>(cfg.minibatch);
      };
      if (closed) {
        gx = oracle.smoothed_gradient(x, t, xi);
      } else {
        gx = Vector::Zero(obj.dim);
        for (std::size_t i = 0; i < cfg.minibatch; ++i) gx += oracle.gradient(x + t * dirs.next(obj.dim), xi);
        gx /= static_cast<double>(cfg.minibatch);
      }
      // Stochastic values depend on xi_k, so nothing is cached across iterations.
      const double f_here = (have_previous && !stochastic) ? previous : smoothed_value(x);
      tb.push(k, x, t, gx.norm(), evals_before);
      x -= cfg.beta * gx;
      const double f_next = smoothed_value(x);
      if (std::abs(f_next - f_here) <= stop.eps0) ++hits;
      previous = f_next;
      have_previous = true;
    }
    if (hits >= stop.n0) leave_inner = true;
    if (leave_inner) {
      t = std::max(gamma * t, floor);
      hits = 0;
      have_previous = false;
    }
  }
  tb.push_final(cfg.iterations, x, t, oracle.count());
  return tb.finish(zeroth);
}

// --------------------------------------------------------------------------
// Fixed-t baselines.

/// GD: x <- x - beta grad f. SGD: the stochastic gradient grad f(x; xi_k).
/// ZOGD / ZOSGD: minibatch two-point estimator at fixed t. ZOSGD queries the
/// stochastic oracle when the objective has one (or cfg.stochastic is set)
/// and otherwise coincides with ZOGD.
inline RunTrace baseline_run(const Objective& obj, const RunConfig& cfg) {
  detail::check_common(obj, cfg);
  switch (cfg.algorithm) {
    case Algorithm::GD:
    case Algorithm::SGD: {
      const bool stochastic = cfg.algorithm == Algorithm::SGD;
      if (stochastic) {
        detail::check_stochastic(obj);
        if (!obj.stochastic->gradient) throw ConfigError("SGD needs a stochastic gradient");
      } else if (!obj.has_gradient()) {
        throw ConfigError("GD needs an analytic gradient for '" + obj.name + "'");
      }
      GaussianStream noise(cfg.seed, kNoiseStream);
      detail::CountingOracle oracle(obj);
      detail::TraceBuilder tb(obj, cfg);
      const double t = cfg.fixed_t.value_or(0.0);
      Vector x = cfg.x0;
      for (int k = 0; k < cfg.iterations; ++k) {
        std::optional<Vector> xi_storage;
        if (stochastic) xi_storage = obj.stochastic->sample(noise);
        const std::uint64_t evals_before = oracle.count();
        const Vector g = oracle.gradient(x, xi_storage ? &*xi_storage : nullptr);
        tb.push(k, x, t, g.norm(), evals_before);
        x -= cfg.beta * g;
      }
      tb.push_final(cfg.iterations, x, t, oracle.count());
      return tb.finish(false);
    }
    case Algorithm::ZOGD:
    case Algorithm::ZOSGD: {
      if (!cfg.fixed_t || !(*cfg.fixed_t > 0.0)) {
        throw ConfigError(std::string(to_string(cfg.algorithm)) + " needs fixed_t > 0");
      }
      RunConfig local = cfg;
      local.t1 = *cfg.fixed_t;
      const bool stochastic =
          cfg.stochastic || (cfg.algorithm == Algorithm::ZOSGD && obj.stochastic.has_value());
      detail::ZoLoopOptions opt;
      opt.update_t = false;
      opt.step = [beta = cfg.beta](int, double) { return beta; };
      RunTrace trace = detail::zo_loop(obj, local, stochastic, opt);
      trace.config = cfg;
      return trace;
    }
    default:
      throw ConfigError("baseline_run: not a baseline algorithm");
  }
}

/// Dispatches on cfg.algorithm.
inline RunTrace run(const Objective& obj, const RunConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::SLGH:
      if (cfg.oracle_order != OracleOrder::First) {
        throw ConfigError("SLGH is first-order; use ZOSLGH for zeroth order");
      }
      return slgh_run(obj, cfg);
    case Algorithm::ZOSLGH:
      return zoslgh_run(obj, cfg);
    case Algorithm::ZOSLGH_ERR:
      return zoslgh_error_run(obj, cfg);
    case Algorithm::GRADOPT:
      return gradopt_run(obj, cfg);
    default:
      return baseline_run(obj, cfg);
  }
}

}  // namespace slgh

#endif  // SLGH_OPTIMIZERS_HPP
