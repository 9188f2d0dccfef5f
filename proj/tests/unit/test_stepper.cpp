#include "chemolab/errors.hpp"
#include "chemolab/stepper.hpp"

#include "fixtures.hpp"

#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace chemolab;
using chemolab::testing::p1;
using chemolab::testing::p1_flat;

namespace {

class Recorder : public RunObserver {
public:
  bool on_record(const SimState& s) override {
    times.push_back(s.t);
    u_max.push_back(extrema(s.u).max);
    return stop_after == 0 || times.size() < stop_after;
  }
  void on_step(const SimState&) override { ++steps; }

  std::vector<double> times;
  std::vector<double> u_max;
  std::size_t steps = 0;
  std::size_t stop_after = 0;
};

// Transport-free parameters: chi at the bottom of the double range.
ParameterSet diffusion_only() {
  ParameterSet p = p1_flat(1.0, 1.0);
  p.chi = 1e-300;
  return p;
}

ScalarField random_nonnegative(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  ScalarField u(g);
  for (double& x : u.values)
    x = dist(rng);
  return u;
}

double logistic_oracle(double a, double b, double c, double t_end) {
  namespace odeint = boost::numeric::odeint;
  std::vector<double> y{c};
  auto rhs = [&](const std::vector<double>& x, std::vector<double>& dx, double) {
    dx[0] = x[0] * (a - b * x[0]);
  };
  auto stepper =
      odeint::make_controlled<odeint::runge_kutta_dopri5<std::vector<double>>>(1e-14, 1e-14);
  odeint::integrate_adaptive(stepper, rhs, y, 0.0, t_end, 1e-4);
  return y[0];
}

double uniform_logistic_error(double dt, double t_end) {
  ParameterSet p = p1_flat(1.0, 5.0);
  const Grid g = Grid::line(10.0, 16, Boundary::periodic);
  Stepper stepper(p, g);
  SimState s = stepper.initial_state(ScalarField(g, 0.02), 0.0);
  Recorder rec;
  run(stepper, s, {t_end, t_end, dt}, rec);
  return std::abs(extrema(s.u).max - logistic_oracle(1.0, 5.0, 0.02, t_end));
}

} // namespace

TEST(StableDt, ReactionLimit) {
  const Grid g = Grid::line(10.0, 32, Boundary::periodic);
  Stepper stepper(p1(), g);
  const SimState s = stepper.initial_state(ScalarField(g), 0.0);
  EXPECT_DOUBLE_EQ(stepper.stable_dt(s), 0.2);
}

TEST(StableDt, AdvectionLimitScalesWithSpacing) {
  for (std::size_t n : {32, 64}) {
    const Grid g = Grid::line(3.2, n, Boundary::reflecting);
    Stepper stepper(p1(), g);
    SimState s = stepper.initial_state(ScalarField(g), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      s.v[k] = g.coordinate(0, k); // unit slope
    EXPECT_NEAR(stepper.stable_dt(s), 0.4 * g.spacing(), 1e-12);
  }
}

TEST(Step, ZeroStaysZero) {
  const Grid g = Grid::line(10.0, 32, Boundary::periodic);
  Stepper stepper(p1(), g);
  SimState s = stepper.initial_state(ScalarField(g), 0.0);
  for (int i = 0; i < 50; ++i)
    stepper.step(s, 0.1);
  for (double x : s.u.values)
    EXPECT_EQ(x, 0.0);
  EXPECT_EQ(s.step_index, 50u);
  EXPECT_NEAR(s.t, 5.0, 1e-12);
}

TEST(Step, UniformDataFollowsLogisticOde) {
  EXPECT_LT(uniform_logistic_error(1e-3, 10.0), 1e-6);
}

TEST(Step, UniformDataIsFirstOrderInTime) {
  const double coarse = uniform_logistic_error(0.02, 3.0);
  const double fine = uniform_logistic_error(0.01, 3.0);
  const double order = std::log2(coarse / fine);
  EXPECT_GE(order, 0.9);
  EXPECT_LE(order, 1.2);
}

TEST(Step, TransportAndDiffusionConserveMass) {
  for (Boundary b : {Boundary::periodic, Boundary::reflecting}) {
    const Grid g = Grid::line(20.0, 128, b);
    ParameterSet p = p1();
    p.chi = 0.5;
    Stepper stepper(p, g, {.reaction = false});
    SimState s = stepper.initial_state(random_nonnegative(g, 4), 0.0);
    double m = mass(s.u);
    for (int i = 0; i < 40; ++i) {
      stepper.step(s, 0.5 * stepper.stable_dt(s));
      const double next = mass(s.u);
      EXPECT_NEAR(next, m, 1e-10 * m);
      m = next;
    }
  }
}

TEST(Step, BackwardEulerDiffusionMatchesDenseSolve) {
  for (Boundary b : {Boundary::periodic, Boundary::reflecting}) {
    const Grid g = Grid::line(8.0, 32, b);
    const double h = g.spacing();
    const double dt = 0.3;
    Stepper stepper(diffusion_only(), g, {.reaction = false});
    const ScalarField u0 = random_nonnegative(g, 9);
    SimState s = stepper.initial_state(u0, 0.0);
    stepper.step(s, dt);

    // dense (I - dt D2) u1 = u0, solved by Gaussian elimination with pivoting
    const std::size_t n = g.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    const double r = dt / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
      A[i][n] = u0[i];
      A[i][i] = 1.0;
      for (int side : {-1, 1}) {
        const long j = static_cast<long>(i) + side;
        if (j < 0 || j >= static_cast<long>(n)) {
          if (b == Boundary::reflecting)
            continue;
        }
        const std::size_t jj = static_cast<std::size_t>((j + static_cast<long>(n)) % static_cast<long>(n));
        A[i][i] += r;
        A[i][jj] -= r;
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t i = c + 1; i < n; ++i)
        if (std::abs(A[i][c]) > std::abs(A[piv][c]))
          piv = i;
      std::swap(A[c], A[piv]);
      for (std::size_t i = c + 1; i < n; ++i) {
        const double f = A[i][c] / A[c][c];
        for (std::size_t k = c; k <= n; ++k)
          A[i][k] -= f * A[c][k];
      }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
      double acc = A[i][n];
      for (std::size_t k = i + 1; k < n; ++k)
        acc -= A[i][k] * x[k];
      x[i] = acc / A[i][i];
    }
    for (std::size_t i = 0; i < n; ++i)
      EXPECT_NEAR(s.u[i], x[i], 1e-13) << to_string(b) << " node " << i;
  }
}

TEST(Step, TwoDimensionalDiffusionSeparates) {
  // a product of 1D modes evolves as the product of the 1D symbols
  const double e[2] = {6.0, 6.0};
  const std::size_t pts[2] = {32, 32};
  const Grid g(2, e, pts, Boundary::periodic);
  ParameterSet p = diffusion_only();
  p.dims = 2;
  Stepper stepper(p, g, {.reaction = false});
  const double kx = 2.0 * std::acos(-1.0) / 6.0, ky = 2.0 * kx;
  const auto u0 = field_from_function(g, [&](std::span<const double> x, double) {
    return (1.0 + 0.5 * std::cos(kx * x[0])) * (1.0 + 0.5 * std::cos(ky * x[1]));
  });
  SimState s = stepper.initial_state(u0, 0.0);
  const double dt = 0.2, h = g.spacing();
  stepper.step(s, dt);
  auto damp = [&](double k) {
    const double sym = 4.0 / (h * h) * std::pow(std::sin(k * h / 2.0), 2);
    return 1.0 / (1.0 + dt * sym);
  };
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.position(k);
    const double expected = (1.0 + 0.5 * damp(kx) * std::cos(kx * x[0])) *
                            (1.0 + 0.5 * damp(ky) * std::cos(ky * x[1]));
    EXPECT_NEAR(s.u[k], expected, 1e-13);
  }
}

TEST(Step, DiffusionTailKeepsRelativeAccuracy) {
  // backward Euler from a point source decays geometrically with ratio rho;
  // the ratio must survive far below 1e-16 of the peak
  const Grid g = Grid::line(25.6, 256, Boundary::periodic);
  const double h = g.spacing();
  const double dt = h * h; // r = 1
  Stepper stepper(diffusion_only(), g, {.reaction = false});
  ScalarField u0(g);
  u0[128] = 1.0;
  SimState s = stepper.initial_state(u0, 0.0);
  stepper.step(s, dt);
  const double rho = (3.0 - std::sqrt(5.0)) / 2.0;
  for (std::size_t j = 10; j < 100; ++j) {
    EXPECT_NEAR(s.u[128 + j + 1] / s.u[128 + j], rho, 1e-9) << j;
    EXPECT_NEAR(s.u[128 - j - 1] / s.u[128 - j], rho, 1e-9) << j;
  }
  EXPECT_LT(s.u[228], 1e-40);
  EXPECT_GT(s.u[228], 0.0);
}

TEST(Step, DiffusionKeepsNonnegativeDataNonnegative) {
  for (Boundary b : {Boundary::periodic, Boundary::reflecting}) {
    const Grid g = Grid::line(20.0, 128, b);
    Stepper stepper(diffusion_only(), g, {.reaction = false});
    ScalarField u0 = random_nonnegative(g, 17);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (k % 3)
        u0[k] = 0.0;
    SimState s = stepper.initial_state(u0, 0.0);
    for (double dt : {1e-4, 0.1, 10.0}) {
      stepper.step(s, dt);
      EXPECT_GE(extrema(s.u).min, 0.0);
    }
    EXPECT_EQ(s.clamp_count, 0u);
  }
}

TEST(Step, TinyNegativesAreClampedAndCounted) {
  const Grid g = Grid::line(10.0, 32, Boundary::reflecting);
  ParameterSet p = p1();
  Stepper stepper(p, g, {.reaction = false});
  ScalarField u0(g);
  for (std::size_t k = 0; k < g.size(); k += 4)
    u0[k] = 1e-12;
  SimState s = stepper.initial_state(u0, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) // steep chemical, inconsistent on purpose
    s.v[k] = 50.0 * std::pow(g.coordinate(0, k), 2);
  stepper.step(s, 0.05);
  EXPECT_GT(s.clamp_count, 0u);
  EXPECT_GE(extrema(s.u).min, 0.0);
}

TEST(Step, StrongNegativityAborts) {
  const Grid g = Grid::line(10.0, 32, Boundary::reflecting);
  Stepper stepper(p1(), g, {.reaction = false});
  ScalarField u0(g);
  u0[16] = 1.0;
  SimState s = stepper.initial_state(u0, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k)
    s.v[k] = 500.0 * std::pow(g.coordinate(0, k), 2);
  try {
    stepper.step(s, 0.5);
    FAIL() << "expected NumericalAbort";
  } catch (const NumericalAbort& e) {
    EXPECT_EQ(e.step(), 1u);
    EXPECT_LT(e.value(), -abort_threshold);
    EXPECT_LT(e.node(), g.size());
  }
}

TEST(Step, RejectsBadInput) {
  const Grid g = Grid::line(10.0, 32, Boundary::periodic);
  Stepper stepper(p1(), g);
  ScalarField bad(g, 1.0);
  bad[3] = -0.5;
  EXPECT_THROW(stepper.initial_state(bad, 0.0), InvalidArgument);
  SimState s = stepper.initial_state(ScalarField(g, 0.1), 0.0);
  EXPECT_THROW(stepper.step(s, 0.0), InvalidArgument);
  EXPECT_THROW(stepper.step(s, -1.0), InvalidArgument);
  ParameterSet two_d = p1();
  two_d.dims = 2;
  EXPECT_THROW(Stepper(two_d, g), InvalidArgument);
}

TEST(Step, ChemicalIsResolvedAfterEveryStep) {
  const Grid g = Grid::line(20.0, 128, Boundary::periodic);
  Stepper stepper(p1(), g);
  SimState s = stepper.initial_state(random_nonnegative(g, 8), 0.0);
  for (int i = 0; i < 10; ++i) {
    stepper.step(s, stepper.stable_dt(s));
    EXPECT_LE(stepper.solver().residual(s.u, s.v, 1.0, 1.0), 1e-9 * linf(s.u));
  }
}

TEST(Run, SingleRecordWhenNothingToDo) {
  const Grid g = Grid::line(10.0, 32, Boundary::periodic);
  Stepper stepper(p1(), g);
  SimState s = stepper.initial_state(ScalarField(g, 0.1), 2.0);
  Recorder rec;
  const auto summary = run(stepper, s, {2.0, 0.5, std::nullopt}, rec);
  EXPECT_EQ(rec.times.size(), 1u);
  EXPECT_EQ(summary.steps, 0u);
  EXPECT_EQ(summary.records, 1u);
  EXPECT_FALSE(summary.halted);
}

TEST(Run, RecordsLandOnNominalTimes) {
  const Grid g = Grid::line(10.0, 32, Boundary::periodic);
  Stepper stepper(p1(), g);
  SimState s = stepper.initial_state(ScalarField(g, 0.1), 1.0);
  Recorder rec;
  run(stepper, s, {3.3, 0.5, std::nullopt}, rec);
  const std::vector<double> expected{1.0, 1.5, 2.0, 2.5, 3.0, 3.3};
  ASSERT_EQ(rec.times.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    EXPECT_DOUBLE_EQ(rec.times[i], std::min(3.3, 1.0 + 0.5 * static_cast<double>(i)));
  EXPECT_DOUBLE_EQ(s.t, 3.3);
}

TEST(Run, DtCapIsHonoured) {
  const Grid g = Grid::line(10.0, 32, Boundary::periodic);
  Stepper stepper(p1(), g);
  SimState s = stepper.initial_state(ScalarField(g, 0.1), 0.0);
  Recorder rec;
  const auto summary = run(stepper, s, {1.0, 1.0, 0.01}, rec);
  EXPECT_GE(summary.steps, 100u);
}

TEST(Run, ObserverCanHalt) {
  const Grid g = Grid::line(10.0, 32, Boundary::periodic);
  Stepper stepper(p1(), g);
  SimState s = stepper.initial_state(ScalarField(g, 0.1), 0.0);
  Recorder rec;
  rec.stop_after = 3;
  const auto summary = run(stepper, s, {10.0, 1.0, std::nullopt}, rec);
  EXPECT_TRUE(summary.halted);
  EXPECT_EQ(rec.times.size(), 3u);
  EXPECT_DOUBLE_EQ(s.t, 2.0);
}

TEST(Run, HeterogeneousReferenceRunStaysBounded) {
  const Grid g = Grid::line(40.0, 256, Boundary::periodic);
  Stepper stepper(p1(), g);
  SimState s = stepper.initial_state(random_nonnegative(g, 2), 0.0);
  Recorder rec;
  run(stepper, s, {10.0, 0.5, std::nullopt}, rec);
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const double bound = std::max(1.0, 0.5) + 1e-6; // max(||u0||, a_sup/(b_inf - chi mu))
    EXPECT_LE(rec.u_max[i], bound);
    EXPECT_LE(rec.u_max[i], comparison_envelope(p1(), rec.u_max[0], rec.times[i]) * (1 + 1e-6));
  }
  EXPECT_EQ(s.clamp_count, 0u);
}
