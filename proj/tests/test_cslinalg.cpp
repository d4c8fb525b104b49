#include <doctest.h>

#include <random>

#include "cavelim/cslinalg.hpp"

using namespace cavelim;

namespace {

Mat random_complex_symmetric(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat r(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) r(j, l) = cplx(u(rng), u(rng));
  return r + r.transpose().eval();
}

}  // namespace

TEST_CASE("spectral decomposition reconstructs the matrix") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 6;
    const Mat b = random_complex_symmetric(n, rng);
    const auto dec = decompose_complex_symmetric(b);

    Mat sum = Mat::Zero(n, n);
    Mat unity = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      const Vec x = dec.eigenvectors.col(j);
      sum += dec.eigenvalues(j) * (x * x.transpose());
      unity += x * x.transpose();
    }
    CHECK((sum - b).norm() < 1e-10 * std::max(1.0, b.norm()));
    CHECK((unity - Mat::Identity(n, n)).norm() < 1e-10);

    // Columns really are eigenvectors, sorted by descending real part.
    for (int j = 0; j < n; ++j) {
      const Vec x = dec.eigenvectors.col(j);
      CHECK((b * x - dec.eigenvalues(j) * x).norm() <
            1e-10 * std::max(1.0, b.norm()));
      if (j > 0)
        CHECK(dec.eigenvalues(j).real() <= dec.eigenvalues(j - 1).real() + 1e-12);
    }
  }
}

TEST_CASE("eigenvectors are bilinearly orthonormal") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5;
    const Mat b = random_complex_symmetric(n, rng);
    const auto dec = decompose_complex_symmetric(b);
    const Mat gram = dec.eigenvectors.transpose() * dec.eigenvectors;
    CHECK((gram - Mat::Identity(n, n)).norm() < 1e-10);
    CHECK(dec.condition_metric > 0.0);
    CHECK(dec.condition_metric <= 1.0 + 1e-12);
  }
}

TEST_CASE("degenerate spectrum is orthogonalized groupwise") {
  // lambda * I is as degenerate as it gets; any basis must come out
  // bilinearly orthonormal.
  const cplx lambda(0.3, -0.7);
  const Mat b = lambda * Mat::Identity(4, 4);
  const auto dec = decompose_complex_symmetric(b);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(dec.eigenvalues(j) - lambda) < 1e-12);
  const Mat gram = dec.eigenvectors.transpose() * dec.eigenvectors;
  CHECK((gram - Mat::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("defective matrix is rejected, not silently mangled") {
  // [[1, i], [i, -1]] squares to zero: a Jordan block in disguise.  Its only
  // eigenvector is quasi-null under the bilinear form.
  Mat b(2, 2);
  b << cplx(1, 0), cplx(0, 1), cplx(0, 1), cplx(-1, 0);
  CHECK_THROWS_AS(decompose_complex_symmetric(b), DecompositionUnreliableError);
  try {
    decompose_complex_symmetric(b);
  } catch (const DecompositionUnreliableError& e) {
    CHECK(e.condition_metric() < 1e-6);
  }
}

TEST_CASE("non-symmetric input is refused") {
  Mat b(2, 2);
  b << cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0);
  CHECK_THROWS_AS(decompose_complex_symmetric(b), std::invalid_argument);
  CHECK_THROWS_AS(SymmetricSolver{b}, std::invalid_argument);
}

TEST_CASE("solver matches dense solve and the spectral form") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    // Shift away from singularity.
    const Mat m =
        random_complex_symmetric(n, rng) + cplx(4.0, -1.0) * Mat::Identity(n, n);
    Vec x(n), y(n);
    for (int j = 0; j < n; ++j) {
      x(j) = cplx(u(rng), u(rng));
      y(j) = cplx(u(rng), u(rng));
    }

    SymmetricSolver solver(m);
    const Vec z = solver.solve(y);
    CHECK((m * z - y).norm() < 1e-10 * y.norm());

    const cplx direct = quadratic_form(m, x, y);
    CHECK(std::abs(direct - (x.transpose() * m.fullPivLu().solve(y)).value()) <
          1e-8);

    // M^-1 = sum_j x_j x_j^T / lambda_j in the bilinear eigenbasis.
    const auto dec = decompose_complex_symmetric(m);
    cplx spectral = 0.0;
    for (int j = 0; j < n; ++j) {
      const Vec ev = dec.eigenvectors.col(j);
      spectral += (x.transpose() * ev).value() * (ev.transpose() * y).value() /
                  dec.eigenvalues(j);
    }
    CHECK(std::abs(direct - spectral) < 1e-8 * std::max(1.0, std::abs(direct)));

    // The form is symmetric in its arguments because M^-1 is symmetric.
    CHECK(std::abs(solver.form(x, y) - solver.form(y, x)) < 1e-10);
  }
}

TEST_CASE("singular matrix raises on solve") {
  Mat m(2, 2);
  m << cplx(1, 0), cplx(1, 0), cplx(1, 0), cplx(1, 0);
  SymmetricSolver solver(m);
  Vec rhs(2);
  rhs << cplx(1, 0), cplx(-1, 0);
  CHECK_THROWS_AS(solver.solve(rhs), EliminationSingularError);
  CHECK_THROWS_AS(quadratic_form(m, rhs, rhs), EliminationSingularError);
}

TEST_CASE("zero right-hand side solves to zero") {
  Mat m(3, 3);
  m = cplx(2.0, -0.5) * Mat::Identity(3, 3);
  SymmetricSolver solver(m);
  const Vec z = solver.solve(Vec::Zero(3));
  CHECK(z.norm() == 0.0);
}
