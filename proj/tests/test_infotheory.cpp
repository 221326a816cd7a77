#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "subcov/closedform.hpp"
#include "subcov/infotheory.hpp"
#include "subcov/optimizer.hpp"

using namespace subcov;
using namespace subcov::info;

namespace {

double mi(const ProbeState& s, int n, double xi, int bins) {
  return mutual_information(joint_distribution(s, PhaseGrid(n), xi, bins));
}

}  // namespace

TEST_CASE("joint distribution validation") {
  RMatrix p(2, 2);
  p << 0.25, 0.25, 0.25, 0.25 + 1e-16;
  CHECK_NOTHROW(JointDistribution{p});
  RMatrix neg = p;
  neg(0, 0) = -1e-16;
  neg(0, 1) = 0.5;
  CHECK(JointDistribution(neg)(0, 0) == 0.0);
  RMatrix off = p * 1.1;
  CHECK_THROWS_AS(JointDistribution{off}, InvalidInput);
  CHECK_THROWS_AS(joint_distribution(ProbeState::flat(5), PhaseGrid(8), 0.0, 4), IncompleteMeasurement);
  CHECK_THROWS_AS(joint_distribution(ProbeState::flat(5), PhaseGrid(8), 0.0, 1), InvalidInput);
}

TEST_CASE("mutual information basics") {
  RVector a(3), b(4);
  a << 0.2, 0.3, 0.5;
  b << 0.1, 0.2, 0.3, 0.4;
  CHECK(std::abs(mutual_information(JointDistribution(a * b.transpose()))) < 1e-14);
  CHECK(mutual_information(JointDistribution(RMatrix::Identity(8, 8) / 8.0)) == doctest::Approx(3.0));

  const auto one = joint_distribution(ProbeState::flat(3), PhaseGrid(1), 0.0, 7);
  CHECK(one.rows() == 1);
  CHECK(one.matrix().sum() == doctest::Approx(1.0));
  CHECK(std::abs(mutual_information(one)) < 1e-14);
}

TEST_CASE("orthogonal encodings reach log2 N and the Holevo bound") {
  for (int n = 1; n <= 10; ++n) {
    const PhaseGrid g(n);
    const auto s = closedform::perfect_discrimination_strategy(10, g).state;
    const double i = mutual_information(joint_distribution(s, g, orthogonal_basis_measurement(10, g)));
    CHECK(std::abs(i - std::log2(n)) < 1e-10);
    CHECK(std::abs(holevo_bound(s, g) - std::log2(n)) < 1e-10);
  }
}

TEST_CASE("Holevo bound") {
  CHECK(std::abs(holevo_bound(ProbeState::flat(4), PhaseGrid(1))) < 1e-12);
  const auto e = ProbeState::flat(10);
  double prev = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const double chi = holevo_bound(e, PhaseGrid(n));
    CHECK(chi <= std::log2(10) + 1e-10);
    CHECK(chi >= prev - 1e-12);
    prev = chi;
  }
  CHECK(prev == doctest::Approx(std::log2(10)).epsilon(1e-10));
}

TEST_CASE("qubit example with two phases") {
  const auto p = joint_distribution(ProbeState::flat(2), PhaseGrid(2), 0.0, 4);
  // Outcome 0 sits on phase 0 and outcome 2 on phase π; each is orthogonal to the other encoded state.
  CHECK(p(0, 2) < 1e-16);
  CHECK(p(1, 0) < 1e-16);
  CHECK(p(0, 0) > 0.2);
  CHECK(p(1, 2) > 0.2);
}

TEST_CASE("mutual information properties") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 6; ++rep) {
    const int d = 3 + rep % 3;
    const auto s = ProbeState::from_amplitudes(model::random_unit_vector(d, rng));
    for (int n : {2, 5, 9}) {
      const PhaseGrid g(n);
      const double chi = holevo_bound(s, g);
      for (double xi : {0.0, 0.13, g.spacing() / 2}) {
        for (int bins : {8, 16, 64}) {
          const auto p = joint_distribution(s, g, xi, bins);
          const double i = mutual_information(p);
          CHECK(i >= 0.0);
          CHECK(i <= chi + 1e-6);
          CHECK(i <= std::log2(n) + 1e-12);
          CHECK(mutual_information(merge_adjacent_bins(p)) <= i + 1e-12);
        }
        CHECK(std::abs(mi(s, n, xi, 12) - mi(s, n, xi + g.spacing(), 12)) < 1e-10);
      }
    }
  }
}

TEST_CASE("bin refinement converges") {
  const auto e = ProbeState::flat(10);
  CHECK(std::abs(mi(e, 30, 0.0, 4096) - mi(e, 30, 0.0, 8192)) < 1e-8);
}

TEST_CASE("shift optimization reproduces the 13/14/15 pattern") {
  const auto e = ProbeState::flat(10);
  auto run = [&](int n) {
    const PhaseGrid g(n);
    return optimize_shift_mi(e, g, n, optimizer::uniform_shift_grid(g, 65));
  };
  const auto r13 = run(13);
  const auto r14 = run(14);
  const auto r15 = run(15);
  CHECK(r13.best_shift == 0.0);
  const double t14 = kTwoPi / 14;
  CHECK(r14.best_shift > t14 / 65);
  CHECK(r14.best_shift < t14 / 2 - t14 / 65);
  const double t15 = kTwoPi / 15;
  CHECK(std::abs(r15.best_shift - t15 / 2) <= t15 / 65);
  CHECK(r13.infos.size() == 65);
  for (double v : r14.infos) CHECK(v <= r14.best_info + 1e-12);

  const double proxy = mi(e, 512, 0.0, 512);
  for (int n = 10; n <= 40; ++n) CHECK(run(n).best_info >= proxy - 1e-3);
}

TEST_CASE("continuous readout at large K does not depend on the shift") {
  const auto e = ProbeState::flat(10);
  const PhaseGrid g(14);
  const auto r = optimize_shift_mi(e, g, 4096, optimizer::uniform_shift_grid(g, 9));
  const auto [lo, hi] = std::minmax_element(r.infos.begin(), r.infos.end());
  CHECK(*hi - *lo < 1e-9);
}

TEST_CASE("large-dimension gap") {
  const double gap = std::log2(128.0) - mi(ProbeState::flat(128), 1024, 0.0, 1024);
  CHECK(gap > 1.0);
  CHECK(gap < 1.5);
}
