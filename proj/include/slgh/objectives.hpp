#ifndef SLGH_OBJECTIVES_HPP
#define SLGH_OBJECTIVES_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "slgh/core.hpp"

namespace slgh {

using ValueFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

/// Closed-form Gaussian smoothing F(x, t) = E_u f(x + t u), u ~ N(0, I),
/// together with its partial derivatives in x and in t.
struct ClosedFormSmoothing {
  std::function<double(const Vector&, double)> value_t;
  std::function<Vector(const Vector&, double)> grad_t;
  std::function<double(const Vector&, double)> dt;
};

/// Same as ClosedFormSmoothing for one noise realization f(.; xi).
struct StochasticSmoothing {
  std::function<double(const Vector&, double, const Vector&)> value_t;
  std::function<Vector(const Vector&, double, const Vector&)> grad_t;
  std::function<double(const Vector&, double, const Vector&)> dt;
};

/// Stochastic access f(x; xi). The noise sample is always an explicit
/// argument; `sample` draws one from a caller-owned stream.
struct StochasticOracle {
  std::function<Vector(GaussianStream&)> sample;
  std::function<double(const Vector&, const Vector&)> value;
  std::function<Vector(const Vector&, const Vector&)> gradient;  // may be empty
  std::optional<StochasticSmoothing> smoothed;
};

struct KnownOptimum {
  Vector point;
  double value;
};

/// A white- or black-box objective on R^dim.
///
/// `value` is what optimizers may query. `true_value`, when set, is the
/// underlying objective used for reporting (it differs from `value` for
/// error-contaminated wrappers). Objectives are immutable once built and may
/// be shared across threads.
struct Objective {
  std::string name;
  int dim = 0;
  ValueFn value;
  GradientFn gradient;  // empty when unavailable
  std::optional<ClosedFormSmoothing> smoothed;
  std::optional<StochasticOracle> stochastic;
  ValueFn true_value;  // empty -> value
  std::optional<double> lipschitz_l0;
  std::optional<double> grad_lipschitz_l1;
  std::optional<KnownOptimum> known_optimum;

  bool has_gradient() const { return static_cast<bool>(gradient); }
  double eval_true(const Vector& x) const { return true_value ? true_value(x) : value(x); }
};

// --------------------------------------------------------------------------
// Test functions (all two-dimensional).

namespace functions {

inline double ackley(const Vector& p) {
  const double x = p[0], y = p[1];
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return -20.0 * std::exp(-0.2 * std::sqrt(0.5 * (x * x + y * y))) -
         std::exp(0.5 * (std::cos(two_pi * x) + std::cos(two_pi * y))) + std::numbers::e + 20.0;
}

// Not differentiable at the origin; the subgradient 0 is returned there.
inline Vector ackley_gradient(const Vector& p) {
  const double x = p[0], y = p[1];
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Vector g = Vector::Zero(2);
  const double r = std::sqrt(0.5 * (x * x + y * y));
  if (r > 0.0) {
    const double a = 20.0 * 0.2 * std::exp(-0.2 * r) * 0.5 / r;
    g[0] += a * x;
    g[1] += a * y;
  }
  const double b = std::exp(0.5 * (std::cos(two_pi * x) + std::cos(two_pi * y))) * 0.5 * two_pi;
  g[0] += b * std::sin(two_pi * x);
  g[1] += b * std::sin(two_pi * y);
  return g;
}

inline double rosenbrock(const Vector& p) {
  const double x = p[0], y = p[1];
  return 100.0 * (y - x * x) * (y - x * x) + (1.0 - x) * (1.0 - x);
}

inline Vector rosenbrock_gradient(const Vector& p) {
  const double x = p[0], y = p[1];
  Vector g(2);
  g << -400.0 * x * (y - x * x) - 2.0 * (1.0 - x), 200.0 * (y - x * x);
  return g;
}

inline double himmelblau(const Vector& p) {
  const double x = p[0], y = p[1];
  const double a = x * x + y - 11.0, b = x + y * y - 7.0;
  return a * a + b * b;
}

inline Vector himmelblau_gradient(const Vector& p) {
  const double x = p[0], y = p[1];
  const double a = x * x + y - 11.0, b = x + y * y - 7.0;
  Vector g(2);
  g << 4.0 * x * a + 2.0 * b, 2.0 * a + 4.0 * y * b;
  return g;
}

// Piecewise toy function with a narrow hole near (10, 0). x = 0 belongs to
// the x >= 0 branch; both branches agree there.
inline double toy(const Vector& p) {
  const double x = p[0], y = p[1];
  const double bowl = x >= 0.0 ? x * x : x * x / 50.0;
  return bowl - 150.0 * std::pow(1.1, -((x - 10.0) * (x - 10.0) + y * y));
}

inline Vector toy_gradient(const Vector& p) {
  const double x = p[0], y = p[1];
  const double hole = 150.0 * std::pow(1.1, -((x - 10.0) * (x - 10.0) + y * y));
  const double log_base = std::log(1.1);
  Vector g(2);
  g[0] = (x >= 0.0 ? 2.0 * x : x / 25.0) + hole * log_base * 2.0 * (x - 10.0);
  g[1] = hole * log_base * 2.0 * y;
  return g;
}

// Smoothed polynomials. Derivatives are differentiated by hand from value_t.

inline double rosenbrock_value_t(const Vector& p, double t) {
  const double x = p[0], y = p[1], t2 = t * t;
  return 100.0 * x * x * x * x + (-200.0 * y + 600.0 * t2 + 1.0) * x * x - 2.0 * x +
         100.0 * y * y - 200.0 * t2 * y + (300.0 * t2 * t2 + 101.0 * t2 + 1.0);
}

inline Vector rosenbrock_grad_t(const Vector& p, double t) {
  const double x = p[0], y = p[1], t2 = t * t;
  Vector g(2);
  g << 400.0 * x * x * x + 2.0 * (-200.0 * y + 600.0 * t2 + 1.0) * x - 2.0,
      -200.0 * x * x + 200.0 * y - 200.0 * t2;
  return g;
}

inline double rosenbrock_dt(const Vector& p, double t) {
  const double x = p[0], y = p[1];
  return 1200.0 * t * x * x - 400.0 * t * y + 1200.0 * t * t * t + 202.0 * t;
}

inline double himmelblau_value_t(const Vector& p, double t) {
  const double x = p[0], y = p[1], t2 = t * t;
  return x * x * x * x + (2.0 * y + 6.0 * t2 - 21.0) * x * x + (2.0 * y * y + 2.0 * t2 - 14.0) * x +
         y * y * y * y + (6.0 * t2 - 13.0) * y * y + (2.0 * t2 - 22.0) * y +
         (6.0 * t2 * t2 - 34.0 * t2 + 170.0);
}

inline Vector himmelblau_grad_t(const Vector& p, double t) {
  const double x = p[0], y = p[1], t2 = t * t;
  Vector g(2);
  g << 4.0 * x * x * x + 2.0 * (2.0 * y + 6.0 * t2 - 21.0) * x + (2.0 * y * y + 2.0 * t2 - 14.0),
      2.0 * x * x + 4.0 * x * y + 4.0 * y * y * y + 2.0 * (6.0 * t2 - 13.0) * y + (2.0 * t2 - 22.0);
  return g;
}

inline double himmelblau_dt(const Vector& p, double t) {
  const double x = p[0], y = p[1];
  return 12.0 * t * x * x + 4.0 * t * x + 12.0 * t * y * y + 4.0 * t * y + 24.0 * t * t * t -
         68.0 * t;
}

}  // namespace functions

namespace detail {

inline void require_dim(const Vector& p, int dim, std::string_view what) {
  if (p.size() != dim) {
    throw ArgumentError(std::string(what) + ": expected dimension " + std::to_string(dim) +
                        ", got " + std::to_string(p.size()));
  }
}

inline Vector point2(double x, double y) {
  Vector p(2);
  p << x, y;
  return p;
}

}  // namespace detail

/// Names accepted by eval_test_function and make_objective.
inline const std::vector<std::string>& test_function_names() {
  static const std::vector<std::string> names{"ackley", "rosenbrock", "himmelblau", "toy"};
  return names;
}

inline double eval_test_function(std::string_view name, const Vector& p) {
  detail::require_dim(p, 2, name);
  if (name == "ackley") return functions::ackley(p);
  if (name == "rosenbrock") return functions::rosenbrock(p);
  if (name == "himmelblau") return functions::himmelblau(p);
  if (name == "toy") return functions::toy(p);
  throw ArgumentError("unknown test function '" + std::string(name) + "'");
}

inline ClosedFormSmoothing closed_form_smoothing(std::string_view name) {
  auto wrap = [name](auto fn) {
    return [fn, name = std::string(name)](const Vector& p, double t) {
      detail::require_dim(p, 2, name);
      return fn(p, t);
    };
  };
  if (name == "rosenbrock") {
    return {wrap(functions::rosenbrock_value_t), wrap(functions::rosenbrock_grad_t),
            wrap(functions::rosenbrock_dt)};
  }
  if (name == "himmelblau") {
    return {wrap(functions::himmelblau_value_t), wrap(functions::himmelblau_grad_t),
            wrap(functions::himmelblau_dt)};
  }
  throw ArgumentError("no closed-form smoothing for '" + std::string(name) + "'");
}

/// f(x) = 0.5 |x|^2 in `dim` dimensions; F(x, t) = 0.5 |x|^2 + 0.5 dim t^2.
inline Objective make_quadratic(int dim) {
  if (dim <= 0) throw ArgumentError("quadratic: dimension must be positive");
  Objective obj;
  obj.name = "quadratic";
  obj.dim = dim;
  obj.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  obj.gradient = [](const Vector& x) -> Vector { return x; };
  const double d = dim;
  obj.smoothed = ClosedFormSmoothing{
      [d](const Vector& x, double t) { return 0.5 * x.squaredNorm() + 0.5 * d * t * t; },
      [](const Vector& x, double) -> Vector { return x; },
      [d](const Vector&, double t) { return d * t; }};
  obj.grad_lipschitz_l1 = 1.0;
  obj.known_optimum = KnownOptimum{Vector::Zero(dim), 0.0};
  return obj;
}

/// Builds one of the registered objectives. Test functions are 2-D and ignore
/// `dim` unless it disagrees, in which case an ArgumentError is thrown.
inline Objective make_objective(std::string_view name, int dim = 2) {
  if (name == "quadratic") return make_quadratic(dim);
  if (dim != 2) {
    throw ArgumentError("objective '" + std::string(name) + "' is two-dimensional");
  }
  Objective obj;
  obj.name = std::string(name);
  obj.dim = 2;
  if (name == "ackley") {
    obj.value = functions::ackley;
    obj.gradient = functions::ackley_gradient;
    obj.known_optimum = KnownOptimum{detail::point2(0.0, 0.0), 0.0};
  } else if (name == "rosenbrock") {
    obj.value = functions::rosenbrock;
    obj.gradient = functions::rosenbrock_gradient;
    obj.smoothed = closed_form_smoothing("rosenbrock");
    // Spectral norm of the Hessian at (1, 1). That is also its maximum along
    // the valley floor y = x^2, |x| <= 1; the function is not globally smooth.
    obj.grad_lipschitz_l1 = 1001.6006392325123;
    obj.known_optimum = KnownOptimum{detail::point2(1.0, 1.0), 0.0};
  } else if (name == "himmelblau") {
    obj.value = functions::himmelblau;
    obj.gradient = functions::himmelblau_gradient;
    obj.smoothed = closed_form_smoothing("himmelblau");
    obj.known_optimum = KnownOptimum{detail::point2(3.0, 2.0), 0.0};
  } else if (name == "toy") {
    obj.value = functions::toy;
    obj.gradient = functions::toy_gradient;
    const Vector star = detail::point2(9.318700599752428, 0.0);
    obj.known_optimum = KnownOptimum{star, functions::toy(star)};
  } else {
    throw ArgumentError("unknown objective '" + std::string(name) + "'");
  }
  return obj;
}

inline std::vector<std::string> registered_objectives() {
  auto names = test_function_names();
  names.emplace_back("quadratic");
  return names;
}

// --------------------------------------------------------------------------
// Error-contaminated access f'(x) = f(x) + e(x), |e| <= nu.

struct SinusoidalRipple {
  double nu = 0.0;
  double omega = 1.0;
};

/// Piecewise-constant error on a grid of cell size delta; discontinuous.
struct HashedGrid {
  double nu = 0.0;
  double delta = 1.0;
};

using ErrorScheme = std::variant<SinusoidalRipple, HashedGrid>;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stable hash of the delta-quantized coordinates, mapped to [0, 1).
inline double grid_hash_unit(const Vector& x, double delta) {
  std::uint64_t h = 0x243f6a8885a308d3ull;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double q = std::floor(x[i] / delta);
    const auto cell = static_cast<std::int64_t>(std::clamp(q, -9.0e18, 9.0e18));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(cell));
  }
  return static_cast<double>(h >> 11) * 0x1p-53;
}

}  // namespace detail

/// The error term e(x) of a scheme. Deterministic in x.
inline std::function<double(const Vector&)> error_term(const ErrorScheme& scheme) {
  return std::visit(
      [](const auto& s) -> std::function<double(const Vector&)> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, SinusoidalRipple>) {
          return [nu = s.nu, omega = s.omega](const Vector& x) {
            return nu * std::sin(omega * x.sum());
          };
        } else {
          return [nu = s.nu, delta = s.delta](const Vector& x) {
            return nu * (2.0 * detail::grid_hash_unit(x, delta) - 1.0);
          };
        }
      },
      scheme);
}

inline double error_level(const ErrorScheme& scheme) {
  return std::visit([](const auto& s) { return s.nu; }, scheme);
}

/// Wraps `base` so that `value` returns f(x) + e(x). Gradients and closed
/// forms are dropped (the accessible function need not be differentiable);
/// `true_value` and Lipschitz metadata keep describing the base objective.
inline Objective make_errored_objective(const Objective& base, const ErrorScheme& scheme) {
  const double nu = error_level(scheme);
  if (!(nu >= 0.0)) throw ArgumentError("error amplitude nu must be >= 0");
  if (const auto* grid = std::get_if<HashedGrid>(&scheme); grid && !(grid->delta > 0.0)) {
    throw ArgumentError("hashed grid cell size delta must be > 0");
  }
  auto err = error_term(scheme);
  Objective out = base;
  out.name = base.name + "+error";
  out.value = [f = base.value, err](const Vector& x) { return f(x) + err(x); };
  out.true_value = [base](const Vector& x) { return base.eval_true(x); };
  out.gradient = nullptr;
  out.smoothed.reset();
  if (base.stochastic) {
    StochasticOracle so;
    so.sample = base.stochastic->sample;
    so.value = [fs = base.stochastic->value, err](const Vector& x, const Vector& xi) {
      return fs(x, xi) + err(x);
    };
    out.stochastic = std::move(so);
  }
  return out;
}

/// Wraps `base` with additive linear noise f(x; xi) = f(x) + xi^T x,
/// xi ~ N(0, (sigma^2 / d) I). Then E f(x; xi) = f(x) and the stochastic
/// gradient has E |grad f(x; xi) - grad f(x)|^2 = sigma^2.
inline Objective make_stochastic_objective(const Objective& base, double sigma) {
  if (!(sigma >= 0.0)) throw ArgumentError("noise level sigma must be >= 0");
  if (!base.has_gradient() && !base.smoothed) {
    throw ArgumentError("stochastic wrapper needs a gradient or a closed-form smoothing");
  }
  const double scale = sigma / std::sqrt(static_cast<double>(base.dim));
  const int dim = base.dim;
  StochasticOracle so;
  so.sample = [scale, dim](GaussianStream& rng) -> Vector { return scale * rng.next(dim); };
  so.value = [f = base.value](const Vector& x, const Vector& xi) { return f(x) + xi.dot(x); };
  if (base.has_gradient()) {
    so.gradient = [g = base.gradient](const Vector& x, const Vector& xi) -> Vector {
      return g(x) + xi;
    };
  }
  if (base.smoothed) {
    // xi^T x is linear, so smoothing leaves it unchanged.
    const ClosedFormSmoothing sf = *base.smoothed;
    so.smoothed = StochasticSmoothing{
        [sf](const Vector& x, double t, const Vector& xi) { return sf.value_t(x, t) + xi.dot(x); },
        [sf](const Vector& x, double t, const Vector& xi) -> Vector { return sf.grad_t(x, t) + xi; },
        [sf](const Vector& x, double t, const Vector&) { return sf.dt(x, t); }};
  }
  Objective out = base;
  out.name = base.name + "+noise";
  out.stochastic = std::move(so);
  return out;
}

}  // namespace slgh

#endif  // SLGH_OBJECTIVES_HPP
