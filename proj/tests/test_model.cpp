#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "subcov/closedform.hpp"
#include "subcov/model.hpp"

using namespace subcov;
using namespace subcov::model;

namespace {

CostFunction c1() { return CostFunction::fourier({15.0 / 6, -8.0 / 3, 1.0 / 6}); }

std::vector<CostFunction> some_costs() {
  return {CostFunction::standard(), CostFunction::step(kPi / 10), CostFunction::step(1.3), c1(),
          CostFunction::fourier({5.0 / 4, -1.0, -1.0 / 4})};
}

HermitianMatrix shifted_flat(int d, double xi) { return flat_seed(d, xi); }

}  // namespace

TEST_CASE("probe state normalization and gauge") {
  CVector c(3);
  c << cplx(0, 2), 1, cplx(0.5, 0.5);
  const auto s = ProbeState::from_amplitudes(c);
  CHECK(s.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s[0].imag() == doctest::Approx(0.0));
  CHECK(s[0].real() > 0);
  CHECK_THROWS_AS(ProbeState::from_amplitudes(CVector::Zero(3)), InvalidInput);
  CHECK_THROWS_AS(PhaseGrid(0), InvalidInput);
}

TEST_CASE("encoding") {
  std::mt19937_64 rng(1);
  const auto s = ProbeState::from_amplitudes(random_unit_vector(4, rng));
  CHECK((encode(s, 0.0) - s.amplitudes()).norm() == 0.0);
  const CVector e = encode(ProbeState::flat(2), kPi);
  CHECK(std::abs(e(0) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(e(1) + 1 / std::sqrt(2.0)) < 1e-15);
  CHECK((encode(encode(s.amplitudes(), 0.3), 1.1) - encode(s, 1.4)).norm() < 1e-14);
  CHECK(encode(s, 2.7).norm() == doctest::Approx(1.0));
}

TEST_CASE("cost functions") {
  CHECK(cost_value(CostFunction::standard(), kPi) == doctest::Approx(4.0));
  CHECK(cost_value(CostFunction::standard(), 0.0) == 0.0);
  const auto step = CostFunction::step(kPi / 10);
  CHECK(cost_value(step, kPi / 30) == 0.0);
  CHECK(cost_value(step, kPi) == 1.0);
  CHECK(cost_value(step, kPi / 20) == 1.0);
  CHECK(cost_value(step, kTwoPi + kPi / 30) == 0.0);
  CHECK(cost_value(c1(), 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cost_value(CostFunction::step(kTwoPi), kPi) == 0.0);
  for (const auto& c : some_costs())
    for (double phi : {0.1, 0.7, 2.0, 3.1}) CHECK(c(phi) == doctest::Approx(c(-phi)));

  CHECK_THROWS_AS(CostFunction::step(0.0), InvalidInput);
  CHECK_THROWS_AS(CostFunction::step(7.0), InvalidInput);
  CHECK_THROWS_AS(CostFunction::fourier({1.0, -0.5}), InvalidInput);
  CHECK_THROWS_AS(CostFunction::fourier({0.0, 1.0, -1.0}), InvalidInput);
  CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
}

TEST_CASE("DFT property of the phase grid") {
  for (int n : {1, 2, 5, 11, 30}) {
    const PhaseGrid g(n);
    for (int r = -2 * n; r <= 2 * n; ++r) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += std::polar(1.0, r * g.phase(k));
      if (r % n == 0)
        CHECK(std::abs(s - static_cast<double>(n)) < 1e-9);
      else
        CHECK(std::abs(s) <= 1e-9 * n);
    }
  }
}

TEST_CASE("seed measurement validation") {
  const PhaseGrid g(5);
  CHECK_NOTHROW(SeedMeasurement(g, {{0.0, flat_seed(3, 0.0)}}));
  CHECK_THROWS_AS(SeedMeasurement(g, {{0.0, flat_seed(3, 0.0) * 0.5}}), IncompleteMeasurement);
  CHECK_THROWS_AS(SeedMeasurement(g, {{g.spacing(), flat_seed(3, 0.0)}}), InvalidInput);
  RVector d(2);
  d << 2.0, -0.5;
  CHECK_THROWS_AS(SeedMeasurement(g, {{0.0, HermitianMatrix::diagonal(d)}}), InvalidInput);
  CHECK(SeedMeasurement(g, {{0.0, flat_seed(3, 0.0)}}).generated_sum().matrix().isApprox(
      CMatrix::Identity(3, 3), 1e-12));
}

TEST_CASE("average cost of explicit measurements") {
  const PhaseGrid g(4);
  const auto e = ProbeState::flat(4);
  std::vector<Outcome> proj;
  for (int n = 0; n < 4; ++n)
    proj.push_back({HermitianMatrix::projector(encode(e, g.phase(n)), 1.0), g.phase(n)});
  for (const auto& c : some_costs())
    CHECK(std::abs(average_cost_explicit(e, ExplicitMeasurement(proj), g, c)) < 1e-12);

  const ExplicitMeasurement trivial({{HermitianMatrix::identity(4), 0.0}});
  double expected = 0.0;
  for (int n = 0; n < 4; ++n) expected += 4 * std::pow(std::sin(g.phase(n) / 2), 2) / 4;
  CHECK(average_cost_explicit(e, trivial, g, CostFunction::standard()) == doctest::Approx(expected));
  const auto zero = CostFunction::fourier({0.0, 0.0});
  CHECK(average_cost_explicit(e, trivial, g, zero) == 0.0);
  CHECK_THROWS_AS(ExplicitMeasurement({{HermitianMatrix::identity(4) * 0.5, 0.0}}),
                  IncompleteMeasurement);
}

TEST_CASE("covariant cost") {
  CHECK(std::abs(covariant_cost(ProbeState::flat(4), flat_seed(4, 0), PhaseGrid(4),
                                CostFunction::standard())) < 1e-12);
  CHECK(covariant_cost(closedform::optimal_continuous_state(10), flat_seed(10, 0), PhaseGrid(11),
                       CostFunction::standard()) ==
        doctest::Approx(2 * (1 - std::cos(kPi / 11))).epsilon(1e-12));
  CHECK(std::abs(covariant_cost(ProbeState::flat(2), flat_seed(2, 0), PhaseGrid(2),
                                CostFunction::step(kPi / 2))) < 1e-12);
  CHECK_THROWS_AS(covariant_cost(ProbeState::flat(3), flat_seed(3, 0) * 0.5, PhaseGrid(5),
                                 CostFunction::standard()),
                  IncompleteMeasurement);

  std::mt19937_64 rng(2);
  for (const auto& c : some_costs()) {
    const auto s = ProbeState::from_amplitudes(random_unit_vector(3, rng));
    const PhaseGrid g(7);
    const SeedMeasurement sm(g, {{0.0, flat_seed(3, 0)}});
    CHECK(covariant_cost(s, flat_seed(3, 0), g, c) ==
          doctest::Approx(average_cost_explicit(s, expand(sm), g, c)).epsilon(1e-12));
  }
}

TEST_CASE("cost independent of N once N >= D + M") {
  const auto c = c1();
  const auto s = closedform::optimal_continuous_state(5);
  const double a = covariant_cost(s, flat_seed(5, 0), PhaseGrid(7), c);
  const double b = covariant_cost(s, flat_seed(5, 0), PhaseGrid(14), c);
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("shifted cost") {
  std::mt19937_64 rng(3);
  for (const auto& c : some_costs()) {
    const auto s = ProbeState::from_amplitudes(random_unit_vector(4, rng));
    const PhaseGrid g(6);
    const auto seed = flat_seed(4, 0);
    const double cov = covariant_cost(s, seed, g, c);
    CHECK(shifted_cost(s, seed, g, c, 0.0) == doctest::Approx(cov).epsilon(1e-12));
    CHECK(shifted_cost(s, seed, g, c, g.spacing()) == doctest::Approx(cov).epsilon(1e-12));
    // A shifted seed at offset ξ is the same measurement.
    for (double xi : {0.1, 0.4, g.spacing() / 2}) {
      const SeedMeasurement sm(g, {{xi, conjugate_by_phase(seed, xi)}});
      CHECK(shifted_cost(s, seed, g, c, xi) ==
            doctest::Approx(subcovariant_cost(s, sm, c)).epsilon(1e-12));
    }
  }
  const PhaseGrid g(30);
  const auto e = ProbeState::flat(10);
  const auto step = CostFunction::step(kPi / 10);
  CHECK(shifted_cost(e, flat_seed(10, 0), g, step, g.spacing() / 2) <
        covariant_cost(e, flat_seed(10, 0), g, step));
}

TEST_CASE("extrema of the shifted cost at 0 and half a step") {
  const auto s = closedform::optimal_continuous_state(6);
  const auto seed = flat_seed(6, 0);
  for (int n : {8, 11, 17}) {
    const PhaseGrid g(n);
    for (const auto& c : {CostFunction::standard(), c1()}) {
      const double h = 1e-5;
      for (double xi : {0.0, g.spacing() / 2}) {
        const double d = (shifted_cost(s, seed, g, c, xi + h) - shifted_cost(s, seed, g, c, xi - h)) /
                         (2 * h);
        CHECK(std::abs(d) <= 1e-6);
      }
    }
  }
}

TEST_CASE("sub-covariant cost reductions") {
  std::mt19937_64 rng(4);
  const int d = 5;
  const PhaseGrid g(8);
  const double half = g.spacing() / 2;
  for (const auto& c : some_costs()) {
    const auto s = ProbeState::from_amplitudes(random_unit_vector(d, rng));
    const auto seed = flat_seed(d, 0);
    const double cov = covariant_cost(s, seed, g, c);
    const double sh = shifted_cost(s, seed, g, c, half);
    CHECK(subcovariant_cost(s, SeedMeasurement(g, {{0.0, seed}}), c) ==
          doctest::Approx(cov).epsilon(1e-12));
    CHECK(subcovariant_cost(s, SeedMeasurement(g, {{half, shifted_flat(d, half)}}), c) ==
          doctest::Approx(sh).epsilon(1e-12));
    const SeedMeasurement mix(g, {{0.0, seed * 0.5}, {half, shifted_flat(d, half) * 0.5}});
    CHECK(subcovariant_cost(s, mix, c) == doctest::Approx((cov + sh) / 2).epsilon(1e-12));
    CHECK(subcovariant_cost(s, mix, c) ==
          doctest::Approx(average_cost_explicit(s, expand(mix), g, c)).epsilon(1e-12));
  }
}

TEST_CASE("canonical covariant seed is complete for every N") {
  for (int d : {1, 3, 7}) {
    for (int n = 1; n <= 10; ++n) {
      const PhaseGrid g(n);
      const auto seed = canonical_covariant_seed(g, d);
      CHECK(completeness_residual(g, {{0.0, seed}}) < 1e-12);
      if (n >= d) CHECK((seed.matrix() - flat_seed(d, 0).matrix()).norm() < 1e-12);
    }
  }
}

TEST_CASE("symmetrization preserves cost and yields sub-covariant POVMs") {
  const PhaseGrid g(3);
  std::mt19937_64 rng(0x5EED);
  for (const auto& c : some_costs()) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto meas = random_explicit_measurement(3, 5, rng);
      const auto s = ProbeState::from_amplitudes(random_unit_vector(3, rng));
      const auto sym = symmetrize_measurement(meas, g);
      CHECK(sym.size() == 15);
      CHECK(std::abs(average_cost_explicit(s, sym, g, c) - average_cost_explicit(s, meas, g, c)) <
            1e-10);
      CHECK(subcovariance_defect(sym, g) < 1e-10);
    }
  }

  const ExplicitMeasurement id({{HermitianMatrix::identity(3), 0.4}});
  const auto sym = symmetrize_measurement(id, g);
  REQUIRE(sym.size() == 3);
  for (int n = 0; n < 3; ++n) {
    CHECK((sym.outcomes()[n].element.matrix() - CMatrix::Identity(3, 3) / 3.0).norm() < 1e-15);
    CHECK(sym.outcomes()[n].estimate == doctest::Approx(0.4 + g.phase(n)));
  }
  const auto s = ProbeState::flat(3);
  CHECK(average_cost_explicit(s, sym, g, c1()) ==
        doctest::Approx(average_cost_explicit(s, id, g, c1())));

  // Already covariant: symmetrizing only repeats each element N times with weight 1/N.
  const auto cov = expand(SeedMeasurement(g, {{0.0, flat_seed(3, 0)}}));
  CHECK(subcovariance_defect(cov, g) < 1e-12);
  const auto again = symmetrize_measurement(cov, g);
  CHECK(std::abs(average_cost_explicit(s, again, g, CostFunction::standard()) -
                 average_cost_explicit(s, cov, g, CostFunction::standard())) < 1e-12);
}
