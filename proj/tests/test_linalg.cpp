#include "otsense/error.hpp"
#include "otsense/solvers.hpp"
#include "support.hpp"

#include <Eigen/Cholesky>
#include <doctest.h>

#include <cmath>

using namespace otsense;

TEST_SUITE("linalg") {

TEST_CASE("square root of random PSD matrices") {
  std::mt19937_64 rng(21);
  for (int k : {1, 2, 3, 6}) {
    const Matrix g = testing::normal_matrix(k, k + 2, rng);
    const Matrix s = g * g.transpose();
    const Matrix r = matrix_sqrt_psd(s);
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r * r - s).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, s.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("rank-deficient input and tiny negative eigenvalues") {
  Vector v(3);
  v << 1, 2, 2;
  Matrix s = v * v.transpose();
  s(0, 0) -= 1e-14;
  const Matrix r = matrix_sqrt_psd(s);
  CHECK((r * r - s).cwiseAbs().maxCoeff() < 1e-7);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(matrix_sqrt_psd(neg), NumericalError);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.1;
  CHECK_THROWS_AS(matrix_sqrt_psd(asym), NumericalError);
}

TEST_CASE("bures cost closed forms") {
  // one dimension: (m_a - m_b)^2 + (s_a - s_b)^2
  Vector ma(1), mb(1);
  ma << 1.0;
  mb << -0.5;
  Matrix sa(1, 1), sb(1, 1);
  sa << 4.0;
  sb << 0.25;
  const auto c = bures_cost(ma, sa, mb, sb);
  CHECK(c.advective == doctest::Approx(2.25));
  CHECK(c.diffusive == doctest::Approx(std::pow(2.0 - 0.5, 2)));
  CHECK(c.total == doctest::Approx(c.advective + c.diffusive));

  // commuting covariances: sum of squared differences of square roots
  Matrix da = Matrix::Zero(3, 3), db = Matrix::Zero(3, 3);
  da.diagonal() << 1.0, 4.0, 9.0;
  db.diagonal() << 4.0, 4.0, 1.0;
  Vector z = Vector::Zero(3);
  CHECK(bures_cost(z, da, z, db).diffusive == doctest::Approx(1.0 + 0.0 + 4.0).epsilon(1e-12));

  std::mt19937_64 rng(22);
  const Matrix g = testing::normal_matrix(3, 5, rng);
  const Matrix s = g * g.transpose();
  CHECK(std::abs(bures_cost(z, s, z, s).total) < 1e-10);
}

TEST_CASE("bures cost of gaussian samples stays below the exact cost") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 200, m = 60;
    Matrix l = testing::normal_matrix(2, 2, rng);
    const Matrix a = testing::normal_matrix(n, 2, rng);
    Matrix b = testing::normal_matrix(m, 2, rng) * l.transpose();
    b.rowwise() += Eigen::RowVector2d(0.5 * trial, -0.2);
    const auto moments = [](const Matrix& x) {
      const Vector mu = x.colwise().mean().transpose();
      const Matrix c = x.rowwise() - mu.transpose();
      return std::pair<Vector, Matrix>(mu, c.transpose() * c / static_cast<double>(x.rows() - 1));
    };
    const auto [mua, sa] = moments(a);
    const auto [mub, sb] = moments(b);
    const Matrix c = testing::sq_dist(a, b);
    const double ex = solve_exact(c, Vector::Constant(n, 1.0 / n), Vector::Constant(m, 1.0 / m), false).cost;
    const Matrix all = [&] {
      Matrix s(n + m, 2);
      s << a, b;
      return s;
    }();
    const auto [mu, sall] = moments(all);
    const double bound = 2.0 * sall.trace();
    CHECK(bures_cost(mua, sa, mub, sb).total <= ex + 0.05 * bound);
  }
}

}  // TEST_SUITE
