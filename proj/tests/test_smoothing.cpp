#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slgh/smoothing.hpp"

using namespace slgh;
using oracle::pt;

namespace {

Objective constant_objective(int dim, double c) {
  Objective o;
  o.name = "const";
  o.dim = dim;
  o.value = [c](const Vector&) { return c; };
  o.gradient = [dim](const Vector&) -> Vector { return Vector::Zero(dim); };
  o.smoothed = ClosedFormSmoothing{[c](const Vector&, double) { return c; },
                                   [dim](const Vector&, double) -> Vector { return Vector::Zero(dim); },
                                   [](const Vector&, double) { return 0.0; }};
  return o;
}

Objective sq_norm(int dim) {
  Objective o;
  o.name = "sqnorm";
  o.dim = dim;
  o.value = [](const Vector& x) { return x.squaredNorm(); };
  o.gradient = [](const Vector& x) -> Vector { return 2 * x; };
  return o;
}

}  // namespace

TEST(GaussianStream, ReproducibleAndDistinct) {
  GaussianStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  const Vector va = a.next(5), vb = b.next(5), vc = c.next(5), vd = d.next(5);
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
  EXPECT_NE(va, vd);
  EXPECT_EQ(a.draws(), 5u);
}

TEST(GaussianStream, StreamsAreUncorrelated) {
  GaussianStream a(5, kDirectionStream), b(5, kTDerivStream);
  const int n = 100000;
  double sab = 0, sa = 0, sb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.next_scalar(), y = b.next_scalar();
    sab += x * y;
    sa += x;
    sb += y;
  }
  EXPECT_NEAR(sab / n, 0.0, 6.0 / std::sqrt(n));
  EXPECT_NEAR(sa / n, 0.0, 6.0 / std::sqrt(n));
  EXPECT_NEAR(sb / n, 0.0, 6.0 / std::sqrt(n));
}

TEST(McSmoothedValue, ConstantAndZeroT) {
  const Objective c = constant_objective(3, 4.25);
  GaussianStream rng(1, 0);
  EXPECT_EQ(mc_smoothed_value(c, Vector::Ones(3), 0.7, 17, rng), 4.25);
  const Objective r = make_objective("rosenbrock");
  EXPECT_EQ(mc_smoothed_value(r, pt(0.3, 0.4), 0.0, 1000, rng), r.value(pt(0.3, 0.4)));
  EXPECT_EQ(rng.draws(), 17u * 3u);  // t = 0 draws nothing
}

TEST(McSmoothedValue, Errors) {
  const Objective r = make_objective("rosenbrock");
  GaussianStream rng(1, 0);
  EXPECT_THROW(mc_smoothed_value(r, pt(0, 0), 1.0, 0, rng), ArgumentError);
  EXPECT_THROW(mc_smoothed_value(r, pt(0, 0), -1.0, 10, rng), ArgumentError);
}

TEST(McSmoothedValue, SquaredNormMean) {
  GaussianStream rng(3, 0);
  const double v = mc_smoothed_value(sq_norm(2), Vector::Zero(2), 1.0, 1000000, rng);
  EXPECT_NEAR(v, 2.0, 0.02);
}

TEST(McSmoothedValue, RosenbrockMatchesClosedForm) {
  const Objective r = make_objective("rosenbrock");
  GaussianStream rng(11, 0);
  const std::size_t m = 1000000;
  std::vector<double> vals(m);
  for (auto& v : vals) v = r.value(pt(0, 0) + rng.next(2));
  const auto ms = oracle::mean_std(vals);
  GaussianStream rng2(11, 0);
  const double mc = mc_smoothed_value(r, pt(0, 0), 1.0, m, rng2);
  EXPECT_DOUBLE_EQ(mc, ms.mean);
  EXPECT_NEAR(mc, 402.0, 3 * ms.std / std::sqrt(double(m)));
}

TEST(McSmoothedValue, DeterministicGivenSeed) {
  const Objective r = make_objective("himmelblau");
  GaussianStream a(99, 4), b(99, 4);
  EXPECT_EQ(mc_smoothed_value(r, pt(1, 2), 0.5, 1000, a), mc_smoothed_value(r, pt(1, 2), 0.5, 1000, b));
}

TEST(ZoGradEstimate, ConstantGivesZero) {
  const Objective c = constant_objective(4, -3.0);
  GaussianStream rng(1, 0);
  EXPECT_EQ(zo_grad_estimate(c, Vector::Ones(4), 0.3, rng.next(4)), Vector::Zero(4));
}

TEST(ZoGradEstimate, LinearIsUnbiased) {
  Vector a(3);
  a << 1.0, -2.0, 0.5;
  auto f = [&a](const Vector& x) { return a.dot(x); };
  GaussianStream rng(5, 0);
  const int n = 100000;
  Vector acc = Vector::Zero(3);
  for (int i = 0; i < n; ++i) acc += zo_grad_estimate(f, Vector::Zero(3), 0.1, rng.next(3));
  acc /= n;
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(acc[j], a[j], 5.0 * a.norm() / std::sqrt(double(n)));
}

TEST(ZoGradEstimate, SquaredNormAtOriginIsZeroMean) {
  const Objective s = sq_norm(2);
  GaussianStream rng(6, 0);
  const int n = 100000;
  std::vector<double> c0(n), c1(n);
  for (int i = 0; i < n; ++i) {
    const Vector g = zo_grad_estimate(s, Vector::Zero(2), 1.0, rng.next(2));
    c0[i] = g[0];
    c1[i] = g[1];
  }
  for (const auto& c : {c0, c1}) {
    const auto ms = oracle::mean_std(c);
    EXPECT_NEAR(ms.mean, 0.0, 6 * ms.std / std::sqrt(double(n)));
  }
}

TEST(ZoGradEstimate, Errors) {
  const Objective r = make_objective("rosenbrock");
  EXPECT_THROW(zo_grad_estimate(r, pt(0, 0), 0.0, pt(1, 0)), ArgumentError);
  EXPECT_THROW(zo_grad_estimate(r, pt(0, 0), -1.0, pt(1, 0)), ArgumentError);
  EXPECT_THROW(zo_grad_estimate(r, pt(0, 0), 1.0, Vector::Ones(3)), ArgumentError);
}

TEST(ZoTDerivative, ConstantGivesZero) {
  const Objective c = constant_objective(2, 8.0);
  GaussianStream rng(1, 1);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(zo_t_derivative_estimate(c, pt(1, 1), 0.5, rng.next(2)), 0.0);
}

TEST(ZoTDerivative, SquaredNormTraceHessian) {
  const Objective s = sq_norm(2);
  GaussianStream rng(2, 1);
  const int n = 100000;
  std::vector<double> v(n);
  for (auto& e : v) e = zo_t_derivative_estimate(s, pt(0.7, -1.3), 0.4, rng.next(2));
  const auto ms = oracle::mean_std(v);
  EXPECT_NEAR(ms.mean, 4.0, 6 * ms.std / std::sqrt(double(n)));
}

TEST(ZoTDerivative, RosenbrockLaplacianAtOrigin) {
  const Objective r = make_objective("rosenbrock");
  GaussianStream rng(3, 1);
  const int n = 1000000;
  std::vector<double> v(n);
  for (auto& e : v) e = zo_t_derivative_estimate(r, pt(0, 0), 1.0, rng.next(2));
  const auto ms = oracle::mean_std(v);
  EXPECT_DOUBLE_EQ(oracle::rosenbrock_smoothed_laplacian(pt(0, 0), 1.0), 1402.0);
  EXPECT_NEAR(ms.mean, 1402.0, 6 * ms.std / std::sqrt(double(n)));
}

TEST(ZoTDerivative, Errors) {
  const Objective r = make_objective("rosenbrock");
  EXPECT_THROW(zo_t_derivative_estimate(r, pt(0, 0), 0.0, pt(1, 0)), ArgumentError);
  EXPECT_THROW(zo_t_derivative_estimate(r, pt(0, 0), 1.0, Vector::Ones(1)), ArgumentError);
}

TEST(FdTDerivative, MatchesAnalytic) {
  for (const char* name : {"rosenbrock", "himmelblau"}) {
    const auto sf = closed_form_smoothing(name);
    const double fd = fd_t_derivative(sf, pt(0, 0), 1.0, 1e-5);
    const double an = sf.dt(pt(0, 0), 1.0);
    EXPECT_NEAR(fd, an, 1e-5 * std::abs(an)) << name;
  }
  // Rosenbrock at the origin: dt = 1200 t^3 + 202 t.
  EXPECT_NEAR(fd_t_derivative(closed_form_smoothing("rosenbrock"), pt(0, 0), 1.0, 1e-5), 1402.0, 1.402e-2);
  const Objective c = constant_objective(2, 1.0);
  EXPECT_EQ(fd_t_derivative(*c.smoothed, pt(3, 3), 1.0, 1e-5), 0.0);
}

TEST(FdTDerivative, Errors) {
  const auto sf = closed_form_smoothing("rosenbrock");
  EXPECT_THROW(fd_t_derivative(sf, pt(0, 0), 1.0, 0.0), ArgumentError);
  EXPECT_THROW(fd_t_derivative(sf, pt(0, 0), 1.0, -1e-3), ArgumentError);
  EXPECT_THROW(fd_t_derivative(sf, pt(0, 0), 1.0, 2.0), ArgumentError);
}

TEST(HeatIdentity, DtEqualsTTimesLaplacian) {
  std::mt19937_64 g(77);
  std::uniform_real_distribution<double> ux(-3, 3), ut(0.1, 2.0);
  for (const char* name : {"rosenbrock", "himmelblau"}) {
    const auto sf = closed_form_smoothing(name);
    for (int i = 0; i < 100; ++i) {
      const Vector p = pt(ux(g), ux(g));
      const double t = ut(g);
      const double lap = oracle::richardson_laplacian([&](const Vector& q) { return sf.value_t(q, t); }, p);
      const double hand = std::string(name) == "rosenbrock" ? oracle::rosenbrock_smoothed_laplacian(p, t)
                                                            : oracle::himmelblau_smoothed_laplacian(p, t);
      EXPECT_NEAR(lap, hand, 1e-9 * std::max(1.0, std::abs(hand)));
      EXPECT_NEAR(sf.dt(p, t), t * hand, 1e-9 * std::max(1.0, std::abs(t * hand)));
    }
  }
}

TEST(EstimatorConsistency, RandomProbes) {
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> ux(-3, 3), ut(0.1, 2.0);
  const int n = 20000;
  for (const char* name : {"rosenbrock", "himmelblau"}) {
    const Objective obj = make_objective(name);
    for (int probe = 0; probe < 10; ++probe) {
      const Vector p = pt(ux(g), ux(g));
      const double t = ut(g);
      GaussianStream rng(probe, 0);
      std::vector<double> g0(n), g1(n), lt(n);
      for (int i = 0; i < n; ++i) {
        const Vector u = rng.next(2);
        const Vector e = zo_grad_estimate(obj, p, t, u);
        g0[i] = e[0];
        g1[i] = e[1];
        lt[i] = zo_t_derivative_estimate(obj, p, t, u);
      }
      const Vector ref = obj.smoothed->grad_t(p, t);
      const auto m0 = oracle::mean_std(g0), m1 = oracle::mean_std(g1), ml = oracle::mean_std(lt);
      EXPECT_NEAR(m0.mean, ref[0], 6 * m0.std / std::sqrt(double(n)));
      EXPECT_NEAR(m1.mean, ref[1], 6 * m1.std / std::sqrt(double(n)));
      const double lap = std::string(name) == "rosenbrock" ? oracle::rosenbrock_smoothed_laplacian(p, t)
                                                           : oracle::himmelblau_smoothed_laplacian(p, t);
      EXPECT_NEAR(ml.mean, lap, 6 * ml.std / std::sqrt(double(n)));
    }
  }
}

TEST(SmoothedOracle, ModesAndRange) {
  const Objective r = make_objective("rosenbrock");
  GaussianStream rng(1, 0);
  SmoothedOracle cf(r, SmoothedOracle::Mode::ClosedForm, 2.0);
  EXPECT_DOUBLE_EQ(cf.value(pt(0, 0), 1.0, rng), 402.0);
  EXPECT_EQ(cf.value(pt(0.5, 0.5), 0.0, rng), r.value(pt(0.5, 0.5)));
  EXPECT_THROW(cf.value(pt(0, 0), 2.5, rng), ArgumentError);
  EXPECT_THROW(cf.value(pt(0, 0), -0.1, rng), ArgumentError);
  EXPECT_DOUBLE_EQ(cf.t_signal(pt(0, 0), 1.0, rng), 1402.0);

  SmoothedOracle mc(r, SmoothedOracle::Mode::MonteCarlo, 2.0, 200000);
  const Vector gm = mc.gradient(pt(0.2, 0.1), 0.5, rng);
  const Vector gr = r.smoothed->grad_t(pt(0.2, 0.1), 0.5);
  EXPECT_NEAR(gm[0], gr[0], 0.05 * std::max(1.0, std::abs(gr[0])) + 2.0);
  EXPECT_NEAR(gm[1], gr[1], 0.05 * std::max(1.0, std::abs(gr[1])) + 1.0);
  EXPECT_EQ(mc.gradient(pt(0.2, 0.1), 0.0, rng), r.gradient(pt(0.2, 0.1)));

  SmoothedOracle zo(r, SmoothedOracle::Mode::ZerothOrder, 1.0);
  EXPECT_THROW(zo.t_signal(pt(0, 0), 0.0, rng), ArgumentError);
  EXPECT_NO_THROW(zo.gradient(pt(0, 0), 0.5, rng));
}

TEST(SmoothedOracle, RequiresCapabilities) {
  const Objective a = make_objective("ackley");
  EXPECT_THROW(SmoothedOracle(a, SmoothedOracle::Mode::ClosedForm, 1.0), ConfigError);
  const Objective e = make_errored_objective(make_objective("rosenbrock"), SinusoidalRipple{0.1, 1});
  EXPECT_THROW(SmoothedOracle(e, SmoothedOracle::Mode::MonteCarlo, 1.0, 10), ConfigError);
  EXPECT_THROW(SmoothedOracle(a, SmoothedOracle::Mode::ZerothOrder, 1.0, 0), ArgumentError);
}

TEST(LipschitzInT, BoxRestrictedBound) {
  // L0 = max |grad f| on a grid of [-3,3]^2, t in [0, 1].
  const Objective r = make_objective("rosenbrock");
  double l0 = 0.0;
  for (int i = 0; i <= 600; ++i) {
    for (int j = 0; j <= 600; ++j) l0 = std::max(l0, r.gradient(pt(-3 + 0.01 * i, -3 + 0.01 * j)).norm());
  }
  std::mt19937_64 g(31);
  std::uniform_real_distribution<double> ux(-3, 3), ut(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vector p = pt(ux(g), ux(g));
    const double t1 = ut(g), t2 = ut(g);
    const double lhs = std::abs(r.smoothed->value_t(p, t1) - r.smoothed->value_t(p, t2));
    EXPECT_LE(lhs, l0 * std::sqrt(2.0) * std::abs(t1 - t2) + 1e-9);
  }
}

TEST(MinimumAtZeroSmoothing, RosenbrockOptimumIsLifted) {
  const Objective r = make_objective("rosenbrock");
  const Vector xs = r.known_optimum->point;
  for (int k = 1; k <= 200; ++k) {
    const double t = 0.01 * k;
    EXPECT_GT(r.smoothed->value_t(xs, t), r.known_optimum->value);
    // Also over a grid of x: no smoothed value reaches f*.
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        EXPECT_GT(r.smoothed->value_t(pt(-2 + 0.2 * i, -2 + 0.2 * j), t), r.known_optimum->value);
      }
    }
  }
}
