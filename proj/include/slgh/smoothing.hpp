#ifndef SLGH_SMOOTHING_HPP
#define SLGH_SMOOTHING_HPP

#include <cstddef>
#include <string>

#include "slgh/core.hpp"
#include "slgh/objectives.hpp"

namespace slgh {

// Gaussian smoothing engine.
//
// F(x, t) = E_u f(x + t u), u ~ N(0, I_d). Under this parameterization the
// heat-equation link reads dF/dt = t * Laplacian_x F. The Stein estimator of
// zo_t_derivative_estimate targets Laplacian_x F itself (no factor t); the
// closed forms expose the true dF/dt through ClosedFormSmoothing::dt.

/// Two-point Gaussian estimator of grad_x F from precomputed values
/// f(x) and f(x + t u).
inline Vector zo_grad_from_values(double fx, double fxu, double t, const Vector& u) {
  return ((fxu - fx) / t) * u;
}

/// Stein trace-Hessian estimator from precomputed values f(x), f(x + t v).
inline double zo_t_derivative_from_values(double fx, double fxv, double t, const Vector& v) {
  const double d = static_cast<double>(v.size());
  return (v.squaredNorm() - d) * (fxv - fx) / (t * t);
}

/// Monte-Carlo estimate (1/M) sum_i f(x + t u_i). Returns f(x) exactly at t = 0.
inline double mc_smoothed_value(const Objective& obj, const Vector& x, double t, std::size_t samples,
                                GaussianStream& rng) {
  if (samples == 0) throw ArgumentError("mc_smoothed_value: sample count must be positive");
  if (!(t >= 0.0)) throw ArgumentError("mc_smoothed_value: t must be >= 0");
  if (t == 0.0) return obj.value(x);
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) sum += obj.value(x + t * rng.next(obj.dim));
  return sum / static_cast<double>(samples);
}

/// g_x = (f(x + t u) - f(x)) / t * u. Unbiased for grad_x F(x, t).
template <typename ValueFnT>
Vector zo_grad_estimate(const ValueFnT& f, const Vector& x, double t, const Vector& u) {
  if (!(t > 0.0)) throw ArgumentError("zo_grad_estimate: t must be > 0");
  if (u.size() != x.size()) throw ArgumentError("zo_grad_estimate: direction dimension mismatch");
  return zo_grad_from_values(f(x), f(x + t * u), t, u);
}

inline Vector zo_grad_estimate(const Objective& obj, const Vector& x, double t, const Vector& u) {
  return zo_grad_estimate(obj.value, x, t, u);
}

/// g_t = (v^T v - d)(f(x + t v) - f(x)) / t^2. Unbiased for Laplacian_x F(x, t).
template <typename ValueFnT>
double zo_t_derivative_estimate(const ValueFnT& f, const Vector& x, double t, const Vector& v) {
  if (!(t > 0.0)) throw ArgumentError("zo_t_derivative_estimate: t must be > 0");
  if (v.size() != x.size()) {
    throw ArgumentError("zo_t_derivative_estimate: direction dimension mismatch");
  }
  return zo_t_derivative_from_values(f(x), f(x + t * v), t, v);
}

inline double zo_t_derivative_estimate(const Objective& obj, const Vector& x, double t,
                                       const Vector& v) {
  return zo_t_derivative_estimate(obj.value, x, t, v);
}

/// Central difference (F(x, t + h) - F(x, t - h)) / 2h. Validation oracle.
inline double fd_t_derivative(const ClosedFormSmoothing& sf, const Vector& x, double t, double h) {
  if (!(h > 0.0)) throw ArgumentError("fd_t_derivative: step h must be > 0");
  if (!(h < t)) throw ArgumentError("fd_t_derivative: step h must be smaller than t");
  return (sf.value_t(x, t + h) - sf.value_t(x, t - h)) / (2.0 * h);
}

/// A view of an objective at smoothing levels t in [0, t_max].
///
/// ClosedForm answers exactly. MonteCarlo averages `samples` draws of the
/// first-order quantities (grad f at perturbed points; Stein estimator for
/// the t-signal). ZerothOrder uses one two-point estimator per call.
/// `t_signal` is dF/dt for ClosedForm and the Laplacian estimate otherwise.
class SmoothedOracle {
public:
  enum class Mode { ClosedForm, MonteCarlo, ZerothOrder };

  SmoothedOracle(const Objective& obj, Mode mode, double t_max, std::size_t samples = 1)
      : obj_(&obj), mode_(mode), t_max_(t_max), samples_(samples) {
    if (mode == Mode::ClosedForm && !obj.smoothed) {
      throw ConfigError("closed-form oracle requested for '" + obj.name +
                        "', which has no closed-form smoothing");
    }
    if (mode == Mode::MonteCarlo && !obj.has_gradient()) {
      throw ConfigError("Monte-Carlo first-order oracle needs an analytic gradient");
    }
    if (samples == 0) throw ArgumentError("SmoothedOracle: sample count must be positive");
    if (!(t_max >= 0.0)) throw ArgumentError("SmoothedOracle: t_max must be >= 0");
  }

  Mode mode() const noexcept { return mode_; }
  double t_max() const noexcept { return t_max_; }

  double value(const Vector& x, double t, GaussianStream& rng) const {
    check_t(t);
    if (t == 0.0) return obj_->value(x);
    if (mode_ == Mode::ClosedForm) return obj_->smoothed->value_t(x, t);
    return mc_smoothed_value(*obj_, x, t, samples_, rng);
  }

  Vector gradient(const Vector& x, double t, GaussianStream& rng) const {
    check_t(t);
    switch (mode_) {
      case Mode::ClosedForm:
        return obj_->smoothed->grad_t(x, t);
      case Mode::MonteCarlo: {
        if (t == 0.0) return obj_->gradient(x);
        Vector acc = Vector::Zero(obj_->dim);
        for (std::size_t i = 0; i < samples_; ++i) acc += obj_->gradient(x + t * rng.next(obj_->dim));
        return acc / static_cast<double>(samples_);
      }
      case Mode::ZerothOrder:
      default:
        return zo_grad_estimate(*obj_, x, t, rng.next(obj_->dim));
    }
  }

  double t_signal(const Vector& x, double t, GaussianStream& rng) const {
    check_t(t);
    if (mode_ == Mode::ClosedForm) return obj_->smoothed->dt(x, t);
    if (t == 0.0) throw ArgumentError("Stein t-estimator is undefined at t = 0");
    const std::size_t n = mode_ == Mode::MonteCarlo ? samples_ : 1;
    const double fx = obj_->value(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vector v = rng.next(obj_->dim);
      acc += zo_t_derivative_from_values(fx, obj_->value(x + t * v), t, v);
    }
    return acc / static_cast<double>(n);
  }

private:
  void check_t(double t) const {
    if (!(t >= 0.0 && t <= t_max_)) {
      throw ArgumentError("smoothing level t=" + std::to_string(t) + " outside [0, " +
                          std::to_string(t_max_) + "]");
    }
  }

  const Objective* obj_;
  Mode mode_;
  double t_max_;
  std::size_t samples_;
};

}  // namespace slgh

#endif  // SLGH_SMOOTHING_HPP
