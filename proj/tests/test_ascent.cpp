#include <doctest.h>

#include "helpers.hpp"
#include "i3322/ascent.hpp"

using namespace i3322;

namespace {

double value_of(const Strategy& s) { return i3322_value(s).value; }

Strategy quarter() { return build_normal_form(NormalFormSpec::make(Branch::Cyclic, {std::sqrt(3.0) / 2})); }

}  // namespace

TEST_CASE("effective operator reproduces the value linearly") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Strategy s = random_strategy(3, rng);
    for (Operator op : kSweepOrder) {
      // value(X) is affine in X: value(X) = value(0) + <X, E>-pairing.
      const Projector x = random_projector(3, 1, rng);
      const Strategy with_x = s.with(op, x);
      const Strategy with_0 = s.with(op, Projector::zero(3));
      const SymMatrix e = effective_operator(s, op);
      const bool alice = op == Operator::A1 || op == Operator::A2 || op == Operator::A3;
      const double pairing = alice ? correlator(x.sym(), e, s.schmidt()) : correlator(e, x.sym(), s.schmidt());
      CHECK(value_of(with_x) - value_of(with_0) == doctest::Approx(pairing).epsilon(1e-10));
    }
  }
}

TEST_CASE("best response beats random alternatives") {
  std::mt19937_64 rng(17);
  const Strategy s = random_strategy(2, rng);
  for (Operator op : kSweepOrder) {
    const double best = value_of(s.with(op, best_response(s, op)));
    CHECK(best >= value_of(s) - 1e-12);
    int worse = 0;
    for (int k = 0; k < 10000 / 6; ++k) {
      std::uniform_int_distribution<int> r(0, 2);
      if (value_of(s.with(op, random_projector(2, r(rng), rng))) > best + 1e-12) ++worse;
    }
    CHECK(worse == 0);
  }
}

TEST_CASE("best response with weighted states") {
  std::mt19937_64 rng(5);
  Vector w(3);
  w << 0.8, 0.5, std::sqrt(1 - 0.64 - 0.25);
  const Strategy s = random_strategy(3, rng).with_schmidt(w);
  for (Operator op : kSweepOrder) {
    const double best = value_of(s.with(op, best_response(s, op)));
    for (int k = 0; k < 500; ++k) {
      std::uniform_int_distribution<int> r(0, 3);
      CHECK(value_of(s.with(op, random_projector(3, r(rng), rng))) <= best + 1e-12);
    }
  }
}

TEST_CASE("A3 response on a chain normal form is P3 blockwise") {
  const Strategy s = build_normal_form(NormalFormSpec::make(Branch::ChainEven, {1, 0.9, 1}));
  const Projector a3 = best_response(s, Operator::A3);
  CHECK((a3.matrix() - s.alice()[2].matrix()).norm() < 1e-10);
}

TEST_CASE("equal Alice projectors give a zero B3 response") {
  std::mt19937_64 rng(3);
  const Projector p = random_projector(3, 1, rng);
  const Strategy s = random_strategy(3, rng).with(Operator::A1, p).with(Operator::A2, p);
  CHECK(best_response(s, Operator::B3).rank() == 0);
}

TEST_CASE("seesaw fixed points") {
  const SeesawResult r = seesaw(quarter());
  CHECK(r.trace.final_value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.trace.sweeps == 1);
  CHECK(r.trace.converged);

  const SeesawResult z = seesaw(Strategy::zero(3));
  CHECK(z.trace.final_value == 0.0);
}

TEST_CASE("seesaw is monotone and bounded in d=2") {
  const RestartRun run = seesaw_restarts(2, 20, 7);
  for (std::size_t i = 0; i < run.traces.size(); ++i) {
    CHECK(run.values[i] <= 0.25 + 1e-9);
    CHECK(run.traces[i].worst_step() >= -1e-12);
    double prev = run.traces[i].initial_value;
    for (const TraceStep& st : run.traces[i].steps) {
      CHECK(st.value >= prev - 1e-12);
      prev = st.value;
    }
  }
  CHECK(run.values[run.best_index] == *std::max_element(run.values.begin(), run.values.end()));
}

TEST_CASE("restarts are reproducible and seed dependent") {
  const RestartRun a = seesaw_restarts(3, 4, 42);
  const RestartRun b = seesaw_restarts(3, 4, 42);
  CHECK(a.values == b.values);
  std::mt19937_64 r1 = restart_rng(1, 0), r2 = restart_rng(1, 1), r3 = restart_rng(2, 0);
  const auto x1 = r1(), x2 = r2(), x3 = r3();
  CHECK(x1 != x2);
  CHECK(x1 != x3);
}

TEST_CASE("random projectors have the requested rank") {
  std::mt19937_64 rng(0);
  for (int d = 1; d <= 6; ++d)
    for (int r = 0; r <= d; ++r) {
      const Projector p = random_projector(d, r, rng);
      CHECK(p.rank() == r);
      CHECK(is_projector(p.matrix()));
    }
}

TEST_CASE("schmidt weight update never lowers the value") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Strategy s = seesaw(random_strategy(3, rng)).strategy;
    const Strategy t = schmidt_weight_update(s);
    CHECK(value_of(t) >= value_of(s) - 1e-12);
    CHECK(std::abs(t.schmidt().norm() - 1.0) < 1e-10);
    CHECK(t.schmidt().minCoeff() >= 0.0);
  }
}

TEST_CASE("cyclic quarter") {
  CHECK(value_of(cyclic_quarter(4)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(value_of(cyclic_quarter(5)) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("schmidt seesaw modes") {
  const SchmidtRun locked = schmidt_seesaw(2, 10, 1, false);
  CHECK(locked.best_value <= 0.25 + 1e-9);
  CHECK(locked.best.uniform());
  const SchmidtRun free = schmidt_seesaw(2, 10, 1, true);
  CHECK(free.best_value >= 0.25 - 1e-9);
  CHECK(free.worst_step >= -1e-12);
}

TEST_CASE("optimize_omega small cases") {
  const OmegaResult e2 = optimize_omega(Branch::ChainEven, 2);
  CHECK(e2.value == doctest::Approx(std::sqrt(5.0) / 2 - 1).epsilon(1e-9));
  CHECK(std::abs(std::abs(e2.spec.coeffs[0]) - 1.0) == 0.0);
  CHECK(e2.spec.coeffs[0] == e2.spec.coeffs[1]);

  const OmegaResult e4 = optimize_omega(Branch::ChainEven, 4);
  CHECK(e4.value > 0.18);
  CHECK(e4.value < 0.25);

  const double h = std::sqrt(3.0) / 2;
  const double f1 = std::sqrt(1.9 * 1.9 + 1) + std::sqrt(1 - 0.81) / 2 - 2;  // f(1, 0.9)
  CHECK(f1 == doctest::Approx(0.365036).epsilon(1e-5));
  for (int d : {2, 4, 6}) {
    const OmegaResult c = optimize_omega(Branch::Cyclic, d);
    CHECK(std::abs(c.value - 0.25) <= 1e-9);
    for (double x : c.spec.coeffs) CHECK(std::abs(std::abs(x) - h) < 1e-4);
  }
}
