#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "difflab/error.hpp"

namespace difflab {

struct SymTridiag {
  std::vector<double> diag;     // length N >= 1
  std::vector<double> offdiag;  // length N - 1
};

/// Dense N x N complex matrix, row-major.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}
  ComplexMatrix(std::size_t n, std::vector<std::complex<double>> row_major);

  std::size_t size() const { return n_; }
  std::complex<double>& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const std::complex<double>& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const std::vector<std::complex<double>>& data() const { return data_; }
  double frobenius_norm() const;

 private:
  std::size_t n_;
  std::vector<std::complex<double>> data_;
};

inline constexpr std::size_t kDefaultComplexDimensionCap = 1024;
inline constexpr int kMaxSweepsPerEigenvalue = 50;

/// All eigenvalues in ascending order via implicit QL with Wilkinson shifts.
/// An off-diagonal entry is deflated once |e_i| <= tol * (|d_i| + |d_i+1|).
std::vector<double> symtridiag_eigenvalues(const SymTridiag& m,
                                           double tol = std::numeric_limits<double>::epsilon());

/// All eigenvalues (unordered) of a general complex matrix: Hessenberg
/// reduction followed by shifted QR, no Schur vectors.
std::vector<std::complex<double>> complex_eigenvalues(const ComplexMatrix& m,
                                                      double tol = std::numeric_limits<double>::epsilon(),
                                                      std::size_t dimension_cap = kDefaultComplexDimensionCap);

}  // namespace difflab
