#include "wfnas/diagnostics.hpp"

#include "wfnas/binarize.hpp"
#include "wfnas/stats.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace wfnas;

TEST_CASE("residual constant C") {
  CHECK(lemma2_constant(50, 5) == 16.625);
  CHECK(lemma2_constant(4, 4) == 2.0);
  CHECK(lemma2_constant(0.01, 0.01) >= 1.0);
  CHECK_THROWS_AS(lemma2_constant(0, 5), Error);
}

TEST_CASE("G estimate is a running maximum") {
  const ExampleSet set = testutil::random_set(2, 10, 1);
  const GEstimate one = estimate_G(set, 1, 7);
  // Reproduce the single draw.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  VectorXd v(8);
  for (Index i = 0; i < 8; ++i) v(i) = unit(rng);
  std::uniform_int_distribution<std::size_t> pick(0, 9);
  const std::size_t z = pick(rng);
  CHECK(one.g_hat == loss_grad(v, set.at(z)).norm());
  double previous = 0.0;
  for (std::size_t n : {1, 5, 50, 500}) {
    const double g = estimate_G(set, n, 7).g_hat;
    CHECK(g >= previous);
    previous = g;
  }
  CHECK_THROWS_AS(estimate_G(set, 0, 1), Error);
}

TEST_CASE("residual of a stationary step is zero") {
  const ExampleSet set = testutil::random_set(2, 2, 2);
  const VectorXd w = VectorXd::Constant(8, -100.0);
  const VectorXd r = extract_residual(TwoLayerNetwork<double>{}, w, w, set.at(0), 0.1, 50.0);
  CHECK(r.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(extract_residual(TwoLayerNetwork<double>{}, w, w, set.at(0), 0.0, 50.0), Error);
}

TEST_CASE("residuals close the relaxed update and respect the per-step bound") {
  const ExampleSet set = testutil::random_set(3, 12, 3);
  TrainConfig c;
  c.batch_size = 1;
  c.epochs = 2;
  c.lr = LrSchedule::constant(0.2);
  const TwoLayerNetwork<double> model;
  ResidualRecorder recorder(model, set, c, 1.0);
  std::vector<double> closure;
  auto record = recorder.observer();
  train_binary(set, c, [&](const StepInfo& s) {
    record(s);
    VectorXd grad;
    const VectorXd r = extract_residual(model, s.w_before, s.w_after, set.at(s.batch[0]), s.eta, c.m_hard, &grad);
    const VectorXd rebuilt = soft_binarize(s.w_before, c.m_hard) - s.eta * (grad + r);
    closure.push_back((rebuilt - soft_binarize(s.w_after, c.m_hard)).cwiseAbs().maxCoeff());
  });
  CHECK(recorder.records().size() == 24);
  CHECK(*std::max_element(closure.begin(), closure.end()) < 1e-12);
  const double big_c = lemma2_constant(c.m_hard, c.m_soft);
  for (const auto& r : recorder.records()) CHECK(r.residual_norm_sq <= big_c * big_c * r.grad_norm_sq * (1 + 1e-12));
  CHECK(recorder.mean_residual().size() == 18);
  TrainConfig batched = c;
  batched.batch_size = 2;
  CHECK_THROWS_AS(ResidualRecorder(model, set, batched, 1.0), Error);
}

TEST_CASE("equal sharpness: residual converges to its small-step limit") {
  // With m_soft = m_hard the v-step tends to -eta B'(w)^2 g, so r -> (B'(w)^2 - 1) g.
  const ExampleSet set = testutil::random_set(2, 1, 4);
  std::mt19937_64 rng(5);
  const VectorXd w = testutil::random_vector(8, rng, 0.05);
  const double m = 5.0;
  const Example z = set.at(0);
  const VectorXd g = loss_grad(soft_binarize(w, m), z);
  const VectorXd d = soft_binarize_deriv(w, m);
  const VectorXd limit = (d.array().square() - 1.0).matrix().cwiseProduct(g);
  double previous = INFINITY;
  for (double eta : {1e-2, 1e-3, 1e-4}) {
    const VectorXd next = w - eta * g.cwiseProduct(d);
    const double gap = (extract_residual(TwoLayerNetwork<double>{}, w, next, z, eta, m) - limit).norm();
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 1e-4);
}

TEST_CASE("convergence study envelopes") {
  const ExampleSet set = testutil::random_set(2, 20, 6);
  TrainConfig c;
  c.epochs = 5;
  c.batch_size = 5;
  const auto single = convergence_study(set, {{50, 5}}, c, 1);
  REQUIRE(single[0].envelope.size() == 6);
  for (std::size_t e = 0; e < 6; ++e) CHECK(single[0].envelope[e].median == single[0].traces[0].points[e].loss);
  const auto cells = convergence_study(set, default_convergence_grid(), c, 4);
  CHECK(cells.size() == 4);
  for (const auto& cell : cells) {
    for (const auto& p : cell.envelope) {
      CHECK(p.q25 <= p.median);
      CHECK(p.median <= p.q75);
    }
  }
  CHECK_THROWS_AS(convergence_study(set, {}, c, 1), Error);
}

TEST_CASE("rate bound and curve") {
  CHECK(rate_bound(2.0, 0.5, 3.0, 1) == doctest::Approx(4.0 * 0.5 * 10.0 / 2.0));
  for (std::int64_t t = 3; t < 200; ++t) CHECK(rate_bound(1, 1, 1, t + 1) < rate_bound(1, 1, 1, t));
  const auto rows = rate_curve({{0, 5.0}, {1, 3.0}, {10, 4.0}, {100, 1.0}}, 100.0, 1.0, 1.0, 0.5);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].gap == 3.5);
  CHECK(rows[1].best_gap == 2.5);
  CHECK_FALSE(rows[2].violated);
  CHECK(rate_curve({{1, 1e6}}, 1, 1, 1, 0)[0].violated);
  CHECK_THROWS_AS(rate_curve({{1, 1.0}}, 1, 1, 1, NAN), Error);
}

TEST_CASE("linear surrogate infimum") {
  const ExampleSet set = testutil::random_set(3, 10, 7);
  const LinearSurrogate<double> model;
  const double inf = linear_surrogate_infimum(set);
  VectorXd grad;
  model.loss_grad(VectorXd::Zero(18), set.inputs, set.labels, grad);
  const VectorXd best = (grad.array() < 0.0).cast<double>();
  CHECK(mean_loss(model, best, set) == doctest::Approx(inf).epsilon(1e-12));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    VectorXd v(18);
    for (Index i = 0; i < 18; ++i) v(i) = unit(rng);
    CHECK(mean_loss(model, v, set) >= inf - 1e-12);
  }
}
