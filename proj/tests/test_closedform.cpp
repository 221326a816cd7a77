#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "subcov/closedform.hpp"

using namespace subcov;
using namespace subcov::closedform;
using model::CostFunction;
using model::PhaseGrid;

TEST_CASE("optimal continuous state") {
  CHECK(optimal_continuous_state(1)[0].real() == doctest::Approx(1.0));
  const auto two = optimal_continuous_state(2);
  CHECK(two[0].real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(two[1].real() == doctest::Approx(1 / std::sqrt(2.0)));
  const auto ten = optimal_continuous_state(10);
  CHECK(std::abs(ten.amplitudes().norm() - 1.0) < 1e-12);
  for (int k = 0; k < 10; ++k) CHECK(std::abs(ten[k] - ten[9 - k]) < 1e-12);
}

TEST_CASE("continuous minimal cost") {
  CHECK(continuous_min_cost(1) == doctest::Approx(2.0));
  CHECK(continuous_min_cost(10) == doctest::Approx(0.0810140527710052).epsilon(1e-12));
  for (int d = 1; d < 40; ++d) CHECK(continuous_min_cost(d + 1) < continuous_min_cost(d));
  for (int d = 1; d <= 12; ++d) {
    const double c = model::covariant_cost(optimal_continuous_state(d), model::flat_seed(d, 0),
                                           PhaseGrid(d + 1), CostFunction::standard());
    CHECK(std::abs(c - continuous_min_cost(d)) < 1e-10);
  }
}

TEST_CASE("perfect discrimination for N <= D") {
  const std::vector<CostFunction> costs{CostFunction::standard(), CostFunction::step(kPi / 10),
                                        CostFunction::fourier({15.0 / 6, -8.0 / 3, 1.0 / 6})};
  for (int d : {4, 10}) {
    for (int n = 1; n <= d; ++n) {
      const PhaseGrid g(n);
      const auto s = perfect_discrimination_strategy(d, g);
      for (const auto& c : costs) CHECK(std::abs(model::covariant_cost(s.state, s.seed, g, c)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(perfect_discrimination_strategy(4, PhaseGrid(5)), InvalidInput);
}

TEST_CASE("square-root measurement") {
  std::vector<CVector> basis;
  for (int k = 0; k < 3; ++k) basis.push_back(CVector::Unit(3, k));
  const auto m = square_root_measurement(basis);
  REQUIRE(m.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK((m.outcomes()[k].element.matrix() - basis[k] * basis[k].adjoint()).norm() < 1e-12);
    CHECK(m.outcomes()[k].estimate == doctest::Approx(kTwoPi * k / 3));
  }

  // Positive amplitudes, N >= D: the covariant POVM seeded by D|e><e|.
  CVector c(4);
  c << 0.2, 0.5, 0.7, 0.3;
  const auto s = model::ProbeState::from_amplitudes(c);
  for (int n : {4, 6, 9}) {
    const PhaseGrid g(n);
    std::vector<CVector> states;
    for (int r = 0; r < n; ++r) states.push_back(model::encode(s, g.phase(r)));
    const auto srm = square_root_measurement(states);
    const auto cov = model::expand(model::SeedMeasurement(g, {{0.0, model::flat_seed(4, 0)}}));
    REQUIRE(srm.size() == n);
    for (int r = 0; r < n; ++r)
      CHECK((srm.outcomes()[r].element.matrix() - cov.outcomes()[r].element.matrix()).norm() < 1e-10);
  }

  // Symmetric qubit pair: success probability is the Helstrom bound.
  const double a = 0.4;
  CVector p0(2), p1(2);
  p0 << std::cos(a), std::sin(a);
  p1 << std::cos(a), -std::sin(a);
  const auto pair = square_root_measurement({p0, p1});
  const double success = 0.5 * (pair.outcomes()[0].element.expectation(p0) +
                                pair.outcomes()[1].element.expectation(p1));
  const double overlap = std::norm(p0.dot(p1));
  CHECK(success == doctest::Approx(0.5 * (1 + std::sqrt(1 - overlap))).epsilon(1e-10));

  // Rank-deficient family: the complement becomes one extra element.
  std::vector<CVector> two{CVector::Unit(3, 0), CVector::Unit(3, 1)};
  const auto partial = square_root_measurement(two);
  REQUIRE(partial.size() == 3);
  CHECK(std::abs(partial.outcomes()[2].element(2, 2) - 1.0) < 1e-12);
  CHECK(partial.outcomes()[2].estimate == 0.0);
}

TEST_CASE("discrimination cost floor") {
  CHECK(discrimination_cost_floor(10, 20) == doctest::Approx(0.5));
  CHECK(discrimination_cost_floor(10, 10) == 0.0);
  CHECK(discrimination_cost_floor(10, 11) == doctest::Approx(1.0 / 11));
}

TEST_CASE("DPSS matrix and continuous step cost") {
  const auto full = dpss_matrix(5, kTwoPi);
  CHECK(full.matrix().frobenius_norm() < 1e-14);
  CHECK(std::abs(continuous_step_cost(5, kTwoPi).cost) < 1e-14);
  for (double w : {0.3, 1.0, 4.0}) CHECK(continuous_step_cost(1, w).cost == doctest::Approx(1 - w / kTwoPi));

  const auto b = dpss_matrix(10, kPi / 10);
  const auto es = qlinalg::hermitian_eig(b.matrix());
  CHECK(es.eigenvalues(0) >= -1e-10);
  CHECK(es.eigenvalues(9) <= 1 + 1e-10);
  for (int j = 0; j < 10; ++j) CHECK(b.matrix()(j, j).real() == doctest::Approx(1 - 1.0 / 20));

  const auto r = continuous_step_cost(10, kPi / 10);
  CHECK(r.cost == doctest::Approx(0.5319256991527542).epsilon(1e-10));
  double sum = 0.0;
  for (int k = 0; k < 10; ++k) {
    CHECK(std::abs(r.state[k].imag()) == 0.0);
    CHECK(r.state[k].real() > 0.0);
    CHECK(std::abs(r.state[k] - r.state[9 - k]) < 1e-8);
    sum += r.state[k].real();
  }
  CHECK(sum > 0);

  for (int d = 1; d < 12; ++d)
    CHECK(continuous_step_cost(d + 1, 0.8).cost <= continuous_step_cost(d, 0.8).cost + 1e-12);
  for (double w = 0.2; w < 6.2; w += 0.5)
    CHECK(continuous_step_cost(6, w + 0.5).cost <= continuous_step_cost(6, w).cost + 1e-12);
  CHECK_THROWS_AS(dpss_matrix(3, 0.0), InvalidInput);
}
