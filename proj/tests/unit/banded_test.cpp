#include <complex>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "normwave/banded.hpp"

using namespace normwave;

TEST_CASE("banded LU agrees with a dense solve") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::size_t n = 40, bw = 4;
  ComplexBand A(n, bw);
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i >= bw ? i - bw : 0); j <= std::min(n - 1, i + bw); ++j) {
      // Hermitian part dominated by the diagonal, like the Crank-Nicolson matrices.
      const std::complex<double> v = i == j ? std::complex<double>(10.0, U(rng)) : std::complex<double>(U(rng), U(rng));
      A(i, j) = v;
      D(i, j) = v;
    }
  Eigen::VectorXcd b(n);
  std::vector<std::complex<double>> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] = {U(rng), U(rng)};

  std::vector<std::complex<double>> y(n);
  A.multiply(x, y);
  const Eigen::VectorXcd y_ref = D * b;
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - y_ref[i]) < 1e-13);

  A.factorize();
  A.solve_in_place(x);
  const Eigen::VectorXcd ref = D.lu().solve(b);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref[i]) < 1e-12);
}

TEST_CASE("solve before factorize is a logic error") {
  RealBand A(3, 1);
  std::vector<double> rhs(3, 1.0);
  CHECK_THROWS_AS(A.solve_in_place(rhs), std::logic_error);
}
