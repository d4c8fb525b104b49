#include "cavelim/cslinalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cavelim {

namespace {

constexpr double kQuasiNullTol = 1e-6;
constexpr double kSolveResidualTol = 1e-10;

void require_symmetric(const Mat& m, const char* who) {
  const double scale = std::max(1.0, m.norm());
  if ((m - m.transpose()).norm() > 1e-12 * scale)
    throw std::invalid_argument(std::string(who) +
                                ": matrix must be complex symmetric");
}

// Sign convention: the largest-magnitude entry (ties -> lowest index) gets
// a positive real part, falling back to positive imaginary part when the
// real part vanishes.
void fix_sign(Eigen::Ref<Vec> x) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  const cplx lead = x(imax);
  if (lead.real() < 0.0 || (lead.real() == 0.0 && lead.imag() < 0.0)) x = -x;
}

}  // namespace

SpectralDecomposition decompose_complex_symmetric(const Mat& b) {
  require_symmetric(b, "decompose_complex_symmetric");
  const Eigen::Index n = b.rows();

  Eigen::ComplexEigenSolver<Mat> solver(b, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw Error("decompose_complex_symmetric: eigensolver failed");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const Vec& ev = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index c) {
    if (ev(a).real() != ev(c).real()) return ev(a).real() > ev(c).real();
    return ev(a).imag() > ev(c).imag();
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenvalues(j) = ev(order[static_cast<std::size_t>(j)]);
    out.eigenvectors.col(j) =
        solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  }

  // Vectors of distinct eigenvalues are bilinearly orthogonal by symmetry
  // of B; inside a (near-)degenerate group the solver's basis is not, so
  // orthogonalize group-wise with the bilinear product.
  const double scale = std::max(1.0, b.norm());
  const double group_tol = 1e-8 * scale;
  double metric = 2.0;  // |x^T x| <= 1 for unit vectors
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && std::abs(out.eigenvalues(stop) -
                                out.eigenvalues(start)) <= group_tol)
      ++stop;
    for (Eigen::Index j = start; j < stop; ++j) {
      Vec x = out.eigenvectors.col(j);
      for (Eigen::Index k = start; k < j; ++k) {
        const Vec& xk = out.eigenvectors.col(k);
        x -= (xk.transpose() * x).value() * xk;  // xk already normalized
      }
      const double nrm = x.norm();
      if (nrm == 0.0)
        throw DecompositionUnreliableError(
            "decompose_complex_symmetric: degenerate group collapsed", 0.0);
      x /= nrm;
      const cplx q = (x.transpose() * x).value();
      metric = std::min(metric, std::abs(q));
      if (std::abs(q) < kQuasiNullTol)
        throw DecompositionUnreliableError(
            "decompose_complex_symmetric: quasi-null eigenvector, matrix is "
            "numerically defective (|x^T x| = " +
                std::to_string(std::abs(q)) + ")",
            std::abs(q));
      x /= std::sqrt(q);
      fix_sign(x);
      out.eigenvectors.col(j) = x;
    }
    start = stop;
  }
  out.condition_metric = metric;
  return out;
}

SymmetricSolver::SymmetricSolver(Mat m) : m_(std::move(m)) {
  require_symmetric(m_, "SymmetricSolver");
  lu_.compute(m_);
  scale_ = std::max(1.0, m_.norm());
}

Vec SymmetricSolver::solve(const Vec& rhs) const {
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return Vec::Zero(rhs.size());
  const Vec z = lu_.solve(rhs);
  const double residual = (m_ * z - rhs).norm() / rhs_norm;
  if (!(residual < kSolveResidualTol))
    throw EliminationSingularError(
        "SymmetricSolver: M is singular or too ill-conditioned (relative "
        "residual " +
            std::to_string(residual) + ")",
        residual);
  return z;
}

cplx quadratic_form(const Mat& m, const Vec& x, const Vec& y) {
  return SymmetricSolver(m).form(x, y);
}

}  // namespace cavelim
