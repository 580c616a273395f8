/*
 * Copyright 2026 The okgd Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "okgd/optimizer.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "okgd/error.hpp"

namespace okgd {
namespace {

const KernelSpec kGauss = KernelSpec::gaussian(0.5);

struct Sample1 {
  Point x;
  double y;
};

std::vector<Sample1> tiny_stream(std::size_t n, std::uint64_t seed, bool classification = false) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<Point> pool = {{-0.8}, {-0.1}, {0.3}, {0.9}};
  std::vector<Sample1> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = classification ? (u(gen) < 0 ? -1.0 : 1.0) : u(gen);
    out.push_back({pool[gen() % pool.size()], y});
  }
  return out;
}

// Straight-line replay of f_{t+1} = r * ((1 - lambda eta) f_t - eta phi' K_x)
// on explicit coefficient lists.
struct Replay {
  std::vector<Point> pts;
  std::vector<double> c;

  double at(const Point& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) s += c[i] * eval(kGauss, pts[i], x);
    return s;
  }
  double norm_sq() const {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) s += c[i] * c[j] * eval(kGauss, pts[i], pts[j]);
    }
    return s;
  }
  void step(const LossModel& loss, double eta, const Sample1& z, double lambda, double radius) {
    const double g = loss.derivative(z.y, at(z.x));
    for (auto& v : c) v *= 1.0 - lambda * eta;
    pts.push_back(z.x);
    c.push_back(-eta * g);
    if (radius > 0.0) {
      const double n = std::sqrt(norm_sq());
      if (n > radius) {
        for (auto& v : c) v *= radius / n;
      }
    }
  }
};

TEST(OgdStep, FirstStep) {
  OptimizerState st(Variant::plain(), StepSchedule::constant(0.1), LossModel::least_squares(), kGauss);
  const Point x = {0.2};
  const auto info = st.ogd_step(x, 1.0);
  EXPECT_EQ(info.gradient, -1.0);
  EXPECT_EQ(st.t(), 2u);
  ASSERT_EQ(st.model().size(), 1u);
  EXPECT_DOUBLE_EQ(st.model().coeff(0), 0.1);
  EXPECT_DOUBLE_EQ(evaluate(st.model(), x), 0.1);
  EXPECT_DOUBLE_EQ(st.probe_value(*st.find_probe(x)), 0.1);
}

TEST(OgdStep, ZeroGradientLeavesFunctionUnchanged) {
  OptimizerState st(Variant::plain(), StepSchedule::constant(0.5), LossModel::smoothed_hinge_sq(), kGauss);
  const Point a = {0.0};
  const Point b = {0.4};
  st.step(a, 1.0);
  st.step(a, 1.0);
  st.step(a, 1.0);  // builds margin at a
  const double before = evaluate(st.model(), a);
  ASSERT_GE(before, 1.0);
  const auto snapshot = st.model();
  const auto info = st.step(a, 1.0);
  EXPECT_EQ(info.gradient, 0.0);
  for (const Point& x : {a, b, Point{-0.7}}) {
    EXPECT_EQ(evaluate(st.model(), x), evaluate(snapshot, x));
  }
}

TEST(OgdStep, MatchesReplay) {
  const auto loss = LossModel::least_squares();
  const auto sched = StepSchedule::polynomial(0.2, 0.5);
  OptimizerState st(Variant::plain(), sched, loss, kGauss);
  Replay r;
  const auto zs = tiny_stream(3, 1);
  for (std::size_t t = 1; t <= zs.size(); ++t) {
    st.step(zs[t - 1].x, zs[t - 1].y);
    r.step(loss, step_size(sched, t), zs[t - 1], 0.0, 0.0);
  }
  ASSERT_EQ(st.model().size(), r.c.size());
  for (std::size_t i = 0; i < r.c.size(); ++i) EXPECT_NEAR(st.model().coeff(i), r.c[i], 1e-12);
}

TEST(OgdStep, NonFiniteGradientIsDivergence) {
  // Constant steps far above 1 / (A kappa^2) blow up geometrically.
  OptimizerState st(Variant::plain(), StepSchedule::constant(10.0), LossModel::least_squares(), kGauss);
  const Point x = {0.0};
  try {
    for (int i = 0; i < 2000; ++i) st.step(x, 1.0);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.step(), 1u);
  }
}

TEST(OgdStep, WrongVariantThrows) {
  OptimizerState st(Variant::plain(), StepSchedule::constant(0.1), LossModel::least_squares(), kGauss);
  EXPECT_THROW(st.regularized_step(Point{0.0}, 1.0), StateError);
  EXPECT_THROW(st.projected_step(Point{0.0}, 1.0), StateError);
}

TEST(RegularizedStep, LambdaZeroIsBitIdenticalToPlain) {
  const auto loss = LossModel::logistic();
  const auto sched = StepSchedule::polynomial(0.5, 0.6);
  OptimizerState a(Variant::plain(), sched, loss, kGauss);
  OptimizerState b(Variant::regularized(0.0), sched, loss, kGauss);
  for (const auto& z : tiny_stream(200, 2, true)) {
    a.step(z.x, z.y);
    b.step(z.x, z.y);
  }
  ASSERT_EQ(a.model().size(), b.model().size());
  for (std::size_t i = 0; i < a.model().size(); ++i) EXPECT_EQ(a.model().coeff(i), b.model().coeff(i));
  for (std::size_t p = 0; p < a.probe_count(); ++p) EXPECT_EQ(a.probe_value(p), b.probe_value(p));
}

TEST(RegularizedStep, FirstStepUnaffected) {
  OptimizerState st(Variant::regularized(0.5), StepSchedule::constant(0.1), LossModel::least_squares(), kGauss);
  st.regularized_step(Point{0.3}, 1.0);
  EXPECT_DOUBLE_EQ(st.model().coeff(0), 0.1);
}

TEST(RegularizedStep, MatchesReplay) {
  const auto loss = LossModel::least_squares();
  const auto sched = StepSchedule::polynomial(0.2, 0.5);
  OptimizerState st(Variant::regularized(0.1), sched, loss, kGauss);
  Replay r;
  const auto zs = tiny_stream(3, 3);
  for (std::size_t t = 1; t <= zs.size(); ++t) {
    st.step(zs[t - 1].x, zs[t - 1].y);
    r.step(loss, step_size(sched, t), zs[t - 1], 0.1, 0.0);
  }
  for (std::size_t i = 0; i < r.c.size(); ++i) EXPECT_NEAR(st.model().coeff(i), r.c[i], 1e-12);
}

// The scale decays to ~1e-40 here, far below the rounding of the early
// average weights; the expansion averages must still match the probe sums.
TEST(RegularizedStep, LongRunAveragesStayAccurate) {
  const auto loss = LossModel::least_squares();
  const auto sched = StepSchedule::constant(0.2);
  OptimizerState st(Variant::regularized(0.2), sched, loss, kGauss);
  const std::vector<Point> probes = {{-0.8}, {-0.1}, {0.3}, {0.9}};
  for (const auto& p : probes) st.register_probe(p);
  for (const auto& z : tiny_stream(2500, 21)) st.step(z.x, z.y);
  EXPECT_LT(st.model().scale(), 1e-30);
  for (auto kind : {AverageKind::kUniform, AverageKind::kWeighted}) {
    const auto& avg = st.average(kind);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const double want = st.average_sums(kind)[p];
      EXPECT_NEAR(avg.evaluate_accumulated(probes[p]), want, 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(RegularizedStep, ShrinkNotPositiveIsConfigError) {
  OptimizerState st(Variant::regularized(20.0), StepSchedule::constant(0.1), LossModel::least_squares(), kGauss);
  EXPECT_THROW(st.step(Point{0.0}, 1.0), ConfigError);
}

TEST(ProjectedStep, InsideBallIsPlain) {
  const auto loss = LossModel::least_squares();
  const auto sched = StepSchedule::constant(0.1);
  OptimizerState a(Variant::plain(), sched, loss, kGauss);
  OptimizerState b(Variant::projected(100.0), sched, loss, kGauss);
  for (const auto& z : tiny_stream(20, 4)) {
    a.step(z.x, z.y);
    const auto info = b.step(z.x, z.y);
    EXPECT_EQ(info.projection, 1.0);
  }
  for (std::size_t i = 0; i < a.model().size(); ++i) EXPECT_EQ(a.model().coeff(i), b.model().coeff(i));
}

TEST(ProjectedStep, OutsideBallLandsOnSphere) {
  // eta = 2R with least squares at f = 0, y = 1: f_2 = 2R K_x, |f_2| = 2R.
  const double R = 0.3;
  OptimizerState st(Variant::projected(R), StepSchedule::constant(2 * R), LossModel::least_squares(), kGauss);
  st.step(Point{0.1}, 1.0);
  EXPECT_NEAR(std::sqrt(rkhs_norm_sq(st.model())), R, 1e-10);
  EXPECT_NEAR(std::sqrt(st.norm_sq()), R, 1e-10);
}

TEST(ProjectedStep, TrajectoryStaysInBallAndMatchesReplay) {
  const auto loss = LossModel::least_squares();
  const auto sched = StepSchedule::polynomial(0.25, 0.5);
  const double R = 0.2;
  OptimizerState st(Variant::projected(R), sched, loss, kGauss);
  Replay r;
  const auto zs = tiny_stream(150, 5);
  for (std::size_t t = 1; t <= zs.size(); ++t) {
    st.step(zs[t - 1].x, zs[t - 1].y);
    r.step(loss, step_size(sched, t), zs[t - 1], 0.0, R);
    const double n = rkhs_norm_sq(st.model());  // Gram-based recomputation
    EXPECT_LE(n, R * R * (1 + 1e-8));
  }
  for (std::size_t i = 0; i < r.c.size(); ++i) EXPECT_NEAR(st.model().coeff(i), r.c[i], 1e-10);
}

TEST(StepBounds, Examples) {
  EXPECT_DOUBLE_EQ(max_step_bound(LossModel::least_squares(), 1.0), 0.25);
  EXPECT_DOUBLE_EQ(max_step_bound(LossModel::logistic(), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(max_step_bound(LossModel::least_squares(), 2.0), 0.0625);
  EXPECT_DOUBLE_EQ(necessity_step_cap(LossModel::least_squares(), 1.0), 1.0 / 6.0);
}

TEST(VariantTest, ValidateRejects) {
  EXPECT_THROW(Variant::regularized(-0.1), InputError);
  EXPECT_THROW(Variant::projected(0.0), InputError);
}

// Properties along long trajectories.

class Trajectories : public ::testing::TestWithParam<Variant> {};

TEST_P(Trajectories, ProbeValuesAndNormsStayExact) {
  const auto loss = LossModel::huber();
  const auto sched = StepSchedule::polynomial(0.8, 0.6);
  OptimizerState st(GetParam(), sched, loss, kGauss);
  Replay r;
  const auto zs = tiny_stream(400, 6);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Point extra = {0.123};
  const auto extra_id = st.register_probe(extra);
  for (std::size_t t = 1; t <= zs.size(); ++t) {
    const auto before = st.model();
    const auto info = st.step(zs[t - 1].x, zs[t - 1].y);
    r.step(loss, info.eta, zs[t - 1], GetParam().kind == VariantKind::kRegularized ? GetParam().lambda : 0.0,
           GetParam().kind == VariantKind::kProjected ? GetParam().radius : 0.0);
    // Evaluation recursion at a fresh point.
    const Point x = {u(gen)};
    const double rec = info.projection *
                       (info.shrink * evaluate(before, x) + info.coeff * eval(kGauss, zs[t - 1].x, x));
    EXPECT_NEAR(evaluate(st.model(), x), rec, 1e-8);
    if (t % 50 == 0) {
      for (std::size_t p = 0; p < st.probe_count(); ++p) {
        const Point pp(st.probe_point(p).begin(), st.probe_point(p).end());
        EXPECT_NEAR(st.probe_value(p), r.at(pp), 1e-8);
      }
      EXPECT_NEAR(st.norm_sq(), r.norm_sq(), 1e-8);
      EXPECT_NEAR(st.recompute_norm_sq(), r.norm_sq(), 1e-8);
    }
  }
  EXPECT_NEAR(st.probe_value(extra_id), r.at(extra), 1e-8);
}

TEST_P(Trajectories, AveragesHoldEarlierIterates) {
  const auto loss = LossModel::least_squares();
  const auto sched = StepSchedule::polynomial(0.2, 0.75);
  OptimizerState st(GetParam(), sched, loss, kGauss);
  std::vector<RkhsFunction> iterates;
  std::vector<double> etas;
  for (const auto& z : tiny_stream(60, 8)) {
    iterates.push_back(st.model());
    etas.push_back(step_size(sched, st.t()));
    st.step(z.x, z.y);
  }
  const auto wbar = st.average(AverageKind::kWeighted).finalize();
  const auto ubar = st.average(AverageKind::kUniform).finalize();
  for (const Point& x : {Point{-0.5}, Point{0.05}, Point{0.8}}) {
    double w = 0.0, sw = 0.0, u = 0.0;
    for (std::size_t k = 0; k < iterates.size(); ++k) {
      w += etas[k] * evaluate(iterates[k], x);
      sw += etas[k];
      u += evaluate(iterates[k], x);
    }
    EXPECT_NEAR(evaluate(wbar, x), w / sw, 1e-10);
    EXPECT_NEAR(evaluate(ubar, x), u / iterates.size(), 1e-10);
  }
  // With the current iterate included.
  iterates.push_back(st.model());
  etas.push_back(step_size(sched, st.t()));
  const auto wcur = st.average_with_current(AverageKind::kWeighted);
  double w = 0.0, sw = 0.0;
  for (std::size_t k = 0; k < iterates.size(); ++k) {
    w += etas[k] * evaluate(iterates[k], Point{0.2});
    sw += etas[k];
  }
  EXPECT_NEAR(evaluate(wcur, Point{0.2}), w / sw, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Variants, Trajectories,
                         ::testing::Values(Variant::plain(), Variant::regularized(0.05),
                                           Variant::projected(0.15)),
                         [](const auto& info) {
                           return std::string(info.index == 0   ? "plain"
                                              : info.index == 1 ? "regularized"
                                                                : "projected");
                         });

}  // namespace
}  // namespace okgd
