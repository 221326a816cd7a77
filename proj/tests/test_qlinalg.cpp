#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "subcov/qlinalg.hpp"

using namespace subcov;
using namespace subcov::qlinalg;

namespace {

CMatrix random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m(j, k) = cplx(g(rng), g(rng));
  return m;
}

HermitianMatrix random_hermitian(int n, std::mt19937_64& rng) {
  return HermitianMatrix(random_complex(n, rng));
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex(n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

double scale_of(const HermitianMatrix& m) { return std::max(1.0, m.frobenius_norm()); }

}  // namespace

TEST_CASE("construction symmetrizes and validates") {
  CMatrix m(2, 2);
  m << 1.0, cplx(2.0, 1.0), cplx(0.0, 0.0), cplx(3.0, 0.5);
  HermitianMatrix h(m);
  CHECK(std::abs(h(0, 1) - std::conj(h(1, 0))) < 1e-15);
  CHECK(h(0, 1) == cplx(1.0, 0.5));
  CHECK(h(1, 1).imag() == 0.0);

  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(HermitianMatrix{bad}, InvalidInput);
  CHECK_THROWS_AS(HermitianMatrix{CMatrix(2, 3)}, InvalidInput);
}

TEST_CASE("eigenvalues of small analytic cases") {
  auto id = hermitian_eig(HermitianMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));

  RVector d(3);
  d << 3, 1, 2;
  auto es = hermitian_eig(HermitianMatrix::diagonal(d));
  CHECK(es.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(es.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(es.eigenvalues(2) == doctest::Approx(3.0));

  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  auto px = hermitian_eig(HermitianMatrix(x));
  CHECK(px.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(px.eigenvalues(1) == doctest::Approx(1.0));
  const double r = 1 / std::sqrt(2.0);
  CHECK(std::abs(px.vector(0)(0) - r) < 1e-12);
  CHECK(std::abs(px.vector(0)(1) + r) < 1e-12);
  CHECK(std::abs(px.vector(1)(0) - r) < 1e-12);
  CHECK(std::abs(px.vector(1)(1) - r) < 1e-12);
}

TEST_CASE("random hermitian decompositions agree with Eigen SelfAdjointEigenSolver") {
  std::mt19937_64 rng(0x5EED);
  for (int n : {1, 2, 3, 5, 8, 13, 21, 40}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto m = random_hermitian(n, rng);
      const auto es = hermitian_eig(m);
      const double tol = 1e-10 * scale_of(m);
      const CMatrix& v = es.eigenvectors;
      for (int i = 0; i < n; ++i) {
        CHECK((m.matrix() * v.col(i) - es.eigenvalues(i) * v.col(i)).norm() <= tol);
        if (i > 0) CHECK(es.eigenvalues(i - 1) <= es.eigenvalues(i));
        const CVector col = v.col(i);
        int lead = 0;
        for (int k = 0; k < n; ++k)
          if (std::abs(col(k)) > std::abs(col(lead)) * (1 + 1e-12)) lead = k;
        CHECK(std::abs(col(lead).imag()) < 1e-12);
        CHECK(col(lead).real() >= 0.0);
      }
      CHECK((v.adjoint() * v - CMatrix::Identity(n, n)).norm() <= 1e-10);
      const CMatrix rec = v * es.eigenvalues.cast<cplx>().asDiagonal() * v.adjoint();
      CHECK((rec - m.matrix()).norm() <= 1e-9 * scale_of(m));

      Eigen::SelfAdjointEigenSolver<CMatrix> oracle(m.matrix());
      CHECK((oracle.eigenvalues() - es.eigenvalues).cwiseAbs().maxCoeff() <= tol);
    }
  }
}

TEST_CASE("degenerate spectra give the right invariant subspaces") {
  std::mt19937_64 rng(7);
  const CMatrix u = random_unitary(5, rng);
  RVector d(5);
  d << 2, -1, 2, 2, -1;
  const HermitianMatrix m(u * d.cast<cplx>().asDiagonal() * u.adjoint());
  const auto es = hermitian_eig(m);
  CHECK(es.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(es.eigenvalues(4) == doctest::Approx(2.0));
  auto projector = [&](int from, int to) {
    const CMatrix b = es.eigenvectors.middleCols(from, to - from);
    return CMatrix(b * b.adjoint());
  };
  CMatrix expected_low = CMatrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    if (d(i) < 0) expected_low += u.col(i) * u.col(i).adjoint();
  CHECK((projector(0, 2) - expected_low).norm() < 1e-10);

  const auto again = hermitian_eig(m);
  CHECK((again.eigenvectors - es.eigenvectors).norm() == 0.0);
}

TEST_CASE("psd projection") {
  std::mt19937_64 rng(11);
  const CVector g = random_complex(4, rng).col(0);
  const HermitianMatrix psd(g * g.adjoint() + CMatrix::Identity(4, 4) * 0.1);
  CHECK((psd_project(psd).matrix() - psd.matrix()).norm() < 1e-12);

  RVector d(2);
  d << 1, -1;
  RVector clipped(2);
  clipped << 1, 0;
  CHECK((psd_project(HermitianMatrix::diagonal(d)).matrix() -
         HermitianMatrix::diagonal(clipped).matrix())
            .norm() < 1e-15);

  const CVector v = g.normalized();
  CHECK(psd_project(HermitianMatrix::projector(v, -1.0)).frobenius_norm() < 1e-12);

  for (int rep = 0; rep < 10; ++rep) {
    const auto m = random_hermitian(6, rng);
    const auto p = psd_project(m);
    CHECK(hermitian_eig(p).eigenvalues(0) >= -1e-12);
    CHECK((psd_project(p).matrix() - p.matrix()).norm() < 1e-12);
    // Nearest point: the residual is negative semidefinite and orthogonal to p.
    const HermitianMatrix residual = m - p;
    CHECK(hermitian_eig(residual).eigenvalues(residual.dim() - 1) <= 1e-12);
    CHECK(std::abs((residual.matrix() * p.matrix()).trace()) < 1e-10);
  }
}

TEST_CASE("warm-started projection matches cold projection") {
  std::mt19937_64 rng(3);
  const auto m = random_hermitian(7, rng);
  CMatrix basis;
  const CMatrix cold = detail::psd_project_raw(m.matrix(), &basis);
  const auto m2 = m + random_hermitian(7, rng) * 1e-3;
  const CMatrix warm = detail::psd_project_raw(m2.matrix(), &basis);
  CHECK((warm - psd_project(m2).matrix()).norm() < 1e-11);
  CHECK((cold - psd_project(m).matrix()).norm() < 1e-11);
}

TEST_CASE("von Neumann entropy") {
  std::mt19937_64 rng(5);
  const CVector v = random_complex(3, rng).col(0).normalized();
  CHECK(von_neumann_entropy(HermitianMatrix::projector(v, 1.0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(HermitianMatrix::identity(8) * (1.0 / 8)) == doctest::Approx(3.0));
  RVector d(3);
  d << 0.5, 0.5, 0.0;
  CHECK(von_neumann_entropy(HermitianMatrix::diagonal(d)) == doctest::Approx(1.0));

  RVector p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  const HermitianMatrix rho = HermitianMatrix::diagonal(p);
  const CMatrix u = random_unitary(4, rng);
  const double s = von_neumann_entropy(rho);
  CHECK(std::abs(von_neumann_entropy(HermitianMatrix(u * rho.matrix() * u.adjoint())) - s) < 1e-10);
  CHECK(s <= 2.0);

  CHECK_THROWS_AS(von_neumann_entropy(HermitianMatrix::identity(2)), InvalidInput);
  RVector neg(2);
  neg << 1.1, -0.1;
  CHECK_THROWS_AS(von_neumann_entropy(HermitianMatrix::diagonal(neg)), InvalidInput);
  CHECK(entropy_term(0.0) == 0.0);
}
