#ifndef CAVELIM_CSLINALG_HPP
#define CAVELIM_CSLINALG_HPP

#include <Eigen/LU>

#include "cavelim/common.hpp"

namespace cavelim {

// Eigendecomposition of a complex symmetric (non-Hermitian) matrix B with
// eigenvectors normalized under the bilinear form: x_j^T x_l = delta_jl
// (transpose, no conjugation).  With that normalization
//   B = sum_j lambda_j x_j x_j^T   and   sum_j x_j x_j^T = 1.
// Eigenvalues are sorted by descending real part; each vector's sign is
// fixed so its largest-magnitude entry has positive real part.
struct SpectralDecomposition {
  Vec eigenvalues;
  Mat eigenvectors;         // columns
  double condition_metric;  // min_j |x_j^T x_j| over unit 2-norm vectors,
                            // before bilinear normalization; ~0 near a
                            // defective (exceptional) point
};

SpectralDecomposition decompose_complex_symmetric(const Mat& b);

// LU-backed solver for quadratic forms X^T M^-1 Y against a fixed complex
// symmetric M.  The factorization is done once; every solve is residual
// checked and raises EliminationSingularError when M is (numerically)
// singular.
class SymmetricSolver {
 public:
  explicit SymmetricSolver(Mat m);

  Vec solve(const Vec& rhs) const;
  cplx form(const Vec& x, const Vec& y) const { return x.transpose() * solve(y); }
  const Mat& matrix() const { return m_; }

 private:
  Mat m_;
  Eigen::PartialPivLU<Mat> lu_;
  double scale_;
};

cplx quadratic_form(const Mat& m, const Vec& x, const Vec& y);

}  // namespace cavelim

#endif
