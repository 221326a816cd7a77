#include "subcov/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace subcov::qlinalg {

namespace {

void require_finite(const CMatrix& m) {
  if (!m.allFinite()) throw InvalidInput("matrix has non-finite entries");
}

int leading_index(const Eigen::Ref<const CVector>& v) {
  // First component whose magnitude is within round-off of the maximum.
  double best = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(i)));
  const double cut = best * (1.0 - 1e-12);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= cut) return static_cast<int>(i);
  return 0;
}

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InvalidInput("Hermitian matrix must be square and non-empty");
  require_finite(m);
  m_ = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < m_.rows(); ++i) m_(i, i) = m_(i, i).real();
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  return HermitianMatrix(CMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(CMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::projector(const CVector& v, double weight) {
  return HermitianMatrix(weight * (v * v.adjoint()));
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  return HermitianMatrix(CMatrix(d.cast<cplx>().asDiagonal()));
}

double HermitianMatrix::expectation(const CVector& v) const {
  if (v.size() != m_.rows()) throw InvalidInput("dimension mismatch in expectation");
  return v.dot(m_ * v).real();
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  if (other.dim() != dim()) throw InvalidInput("dimension mismatch");
  return HermitianMatrix(m_ + other.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  if (other.dim() != dim()) throw InvalidInput("dimension mismatch");
  return HermitianMatrix(m_ - other.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(m_ * s);
}

void fix_gauge(Eigen::Ref<CVector> v) {
  if (v.size() == 0) return;
  const cplx lead = v(leading_index(v));
  const double mag = std::abs(lead);
  if (mag == 0.0) return;
  v *= std::conj(lead) / mag;
}

namespace detail {

int jacobi_diagonalize(CMatrix& a, CMatrix& v, double rel_tol, int max_sweeps) {
  const Eigen::Index n = a.rows();
  const double scale = a.norm();
  if (n < 2 || scale == 0.0) return 0;
  const double threshold = rel_tol * scale;
  const double negligible = 1e-4 * rel_tol * scale / static_cast<double>(n);

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) < threshold) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::sqrt(std::norm(apq));
        if (g <= negligible) continue;
        const double phr = apq.real() / g;
        const double phi = apq.imag() / g;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Rotation J restricted to (p, q): [[c, s ph], [-s conj(ph), c]].
        const double jpr = s * phr, jpi = s * phi;    // s ph
        const double jqr = -s * phr, jqi = s * phi;   // -s conj(ph)
        auto rotate = [&](cplx* colp, cplx* colq, Eigen::Index k) {
          const double xr = colp[k].real(), xi = colp[k].imag();
          const double yr = colq[k].real(), yi = colq[k].imag();
          colp[k] = cplx(c * xr + jqr * yr - jqi * yi, c * xi + jqr * yi + jqi * yr);
          colq[k] = cplx(jpr * xr - jpi * xi + c * yr, jpr * xi + jpi * xr + c * yi);
        };
        // A <- J^† A J. Columns p, q change off the (p, q) block; rows follow
        // by Hermiticity.
        cplx* ap = a.data() + p * n;
        cplx* aq = a.data() + q * n;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          rotate(ap, aq, k);
          a(p, k) = std::conj(ap[k]);
          a(q, k) = std::conj(aq[k]);
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;

        cplx* vp = v.data() + p * v.rows();
        cplx* vq = v.data() + q * v.rows();
        for (Eigen::Index k = 0; k < v.rows(); ++k) rotate(vp, vq, k);
      }
    }
  }
  return sweep;
}

CMatrix psd_project_raw(const CMatrix& m, CMatrix* basis) {
  const Eigen::Index n = m.rows();
  CMatrix v;
  CMatrix a;
  if (basis != nullptr && basis->rows() == n && basis->cols() == n) {
    v = *basis;
    a = v.adjoint() * m * v;
    a = 0.5 * (a + a.adjoint()).eval();
  } else {
    v = CMatrix::Identity(n, n);
    a = m;
  }
  jacobi_diagonalize(a, v);
  if (basis != nullptr) *basis = v;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (a(i, i).real() > 0.0) keep.push_back(i);
  CMatrix w(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    w.col(j) = v.col(keep[j]) * std::sqrt(a(keep[j], keep[j]).real());
  CMatrix out = w * w.adjoint();
  return 0.5 * (out + out.adjoint());
}

}  // namespace detail

EigenSystem hermitian_eig(const HermitianMatrix& m) {
  const int n = m.dim();
  if (n < 1) throw InvalidInput("hermitian_eig requires dim >= 1");
  CMatrix a = m.matrix();
  CMatrix v = CMatrix::Identity(n, n);
  detail::jacobi_diagonalize(a, v);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  RVector raw(n);
  for (int i = 0; i < n; ++i) raw(i) = a(i, i).real();
  for (int i = 0; i < n; ++i) fix_gauge(v.col(i));

  // Ascending eigenvalues; inside a degenerate cluster, order by the index
  // of the gauge-fixing component so the result is deterministic.
  std::vector<int> lead(n);
  for (int i = 0; i < n; ++i) lead[i] = leading_index(v.col(i));
  std::sort(order.begin(), order.end(), [&](int x, int y) { return raw(x) < raw(y); });
  const double gap = 1e-10 * std::max(1.0, m.frobenius_norm());
  for (int start = 0; start < n;) {
    int end = start + 1;
    while (end < n && raw(order[end]) - raw(order[end - 1]) < gap) ++end;
    std::stable_sort(order.begin() + start, order.begin() + end,
                     [&](int x, int y) { return lead[x] < lead[y]; });
    start = end;
  }

  EigenSystem es;
  es.eigenvalues.resize(n);
  es.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    es.eigenvalues(i) = raw(order[i]);
    es.eigenvectors.col(i) = v.col(order[i]);
  }
  return es;
}

HermitianMatrix psd_project(const HermitianMatrix& m) {
  return HermitianMatrix(detail::psd_project_raw(m.matrix()));
}

HermitianMatrix spectral_map(const HermitianMatrix& m,
                             const std::function<double(double)>& f) {
  const EigenSystem es = hermitian_eig(m);
  RVector mapped(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(es.eigenvalues(i));
  return HermitianMatrix(es.eigenvectors * mapped.cast<cplx>().asDiagonal() *
                         es.eigenvectors.adjoint());
}

double entropy_term(double p) {
  if (p <= 1e-300) return 0.0;
  return -p * std::log2(p);
}

double von_neumann_entropy(const HermitianMatrix& rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-10)
    throw InvalidInput("density matrix must have unit trace");
  const EigenSystem es = hermitian_eig(rho);
  if (es.eigenvalues(0) < -1e-10) throw InvalidInput("density matrix is not PSD");
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i)
    s += entropy_term(std::max(0.0, es.eigenvalues(i)));
  return s;
}

}  // namespace subcov::qlinalg
