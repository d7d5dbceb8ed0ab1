#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace normwave {

/// Square band matrix with equal lower/upper bandwidth, stored by diagonals.
///
/// Factorization is LU without pivoting. That is stable for the two uses in
/// this library: symmetric positive definite shifts of the stiffness matrix,
/// and Crank-Nicolson matrices W + i*tau*S whose Hermitian part is positive
/// definite.
template <typename T>
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(std::size_t n, std::size_t bandwidth)
      : n_(n), bw_(bandwidth), data_(n * (2 * bandwidth + 1), T{}) {}

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bw_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return (i > j ? i - j : j - i) <= bw_;
  }

  T& operator()(std::size_t i, std::size_t j) {
    return data_[i * (2 * bw_ + 1) + (j + bw_ - i)];
  }
  T operator()(std::size_t i, std::size_t j) const {
    if (!in_band(i, j)) return T{};
    return data_[i * (2 * bw_ + 1) + (j + bw_ - i)];
  }

  void multiply(std::span<const T> x, std::span<T> y) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t lo = i >= bw_ ? i - bw_ : 0;
      const std::size_t hi = std::min(n_ - 1, i + bw_);
      T acc{};
      for (std::size_t j = lo; j <= hi; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
  }

  /// In-place LU factorization (Doolittle, unit lower triangle).
  void factorize() {
    for (std::size_t k = 0; k < n_; ++k) {
      const T pivot = (*this)(k, k);
      if (pivot == T{}) throw std::runtime_error("BandMatrix: zero pivot");
      const std::size_t hi = std::min(n_ - 1, k + bw_);
      for (std::size_t i = k + 1; i <= hi; ++i) {
        T& lik = (*this)(i, k);
        lik /= pivot;
        for (std::size_t j = k + 1; j <= hi; ++j) (*this)(i, j) -= lik * (*this)(k, j);
      }
    }
    factored_ = true;
  }

  bool factored() const { return factored_; }

  /// Solve with a previously factorized matrix, overwriting rhs.
  void solve_in_place(std::span<T> rhs) const {
    if (!factored_) throw std::logic_error("BandMatrix: solve before factorize");
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t lo = i >= bw_ ? i - bw_ : 0;
      T acc = rhs[i];
      for (std::size_t j = lo; j < i; ++j) acc -= (*this)(i, j) * rhs[j];
      rhs[i] = acc;
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      const std::size_t hi = std::min(n_ - 1, ii + bw_);
      T acc = rhs[ii];
      for (std::size_t j = ii + 1; j <= hi; ++j) acc -= (*this)(ii, j) * rhs[j];
      rhs[ii] = acc / (*this)(ii, ii);
    }
  }

 private:
  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<T> data_;
  bool factored_ = false;
};

using RealBand = BandMatrix<double>;
using ComplexBand = BandMatrix<std::complex<double>>;

}  // namespace normwave
