#include "difflab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

// LAPACK (Fortran ABI). Trailing arguments are the hidden CHARACTER lengths.
extern "C" void zgeev_(const char* jobvl, const char* jobvr, const int* n, std::complex<double>* a, const int* lda,
                       std::complex<double>* w, std::complex<double>* vl, const int* ldvl,
                       std::complex<double>* vr, const int* ldvr, std::complex<double>* work, const int* lwork,
                       double* rwork, int* info, std::size_t jobvl_len, std::size_t jobvr_len);

namespace difflab {

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<std::complex<double>> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n_ * n_) fail(ErrorCode::InvalidArgument, "complex matrix data has the wrong size");
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

std::vector<double> symtridiag_eigenvalues(const SymTridiag& m, double tol) {
  const std::size_t n = m.diag.size();
  if (n == 0) fail(ErrorCode::InvalidArgument, "tridiagonal matrix must have N >= 1");
  if (m.offdiag.size() + 1 != n) fail(ErrorCode::InvalidArgument, "off-diagonal must have length N - 1");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  for (double v : m.diag) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite diagonal entry");
  }
  for (double v : m.offdiag) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite off-diagonal entry");
  }

  std::vector<double> d = m.diag;
  std::vector<double> e(n, 0.0);  // e[i] couples i and i+1; e[n-1] = 0
  std::copy(m.offdiag.begin(), m.offdiag.end(), e.begin());

  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  for (std::ptrdiff_t l = 0; l <= last; ++l) {
    int sweeps = 0;
    std::ptrdiff_t mm = l;
    do {
      for (mm = l; mm < last; ++mm) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= tol * dd) break;
      }
      if (mm == l) break;
      if (++sweeps > kMaxSweepsPerEigenvalue) {
        fail(ErrorCode::NoConvergence, "implicit QL did not converge for eigenvalue " + std::to_string(l));
      }
      // Wilkinson shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      std::ptrdiff_t i = mm - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[mm] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[mm] = 0.0;
    } while (mm != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<std::complex<double>> complex_eigenvalues(const ComplexMatrix& m, double tol, std::size_t dimension_cap) {
  const std::size_t n = m.size();
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (n == 0) fail(ErrorCode::InvalidArgument, "matrix must have N >= 1");
  if (n > dimension_cap) {
    fail(ErrorCode::DimensionTooLarge,
         "matrix dimension " + std::to_string(n) + " exceeds cap " + std::to_string(dimension_cap));
  }
  for (const auto& z : m.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      fail(ErrorCode::InvalidArgument, "non-finite matrix entry");
    }
  }
  if (n == 1) return {m(0, 0)};

  // Row-major data read as column-major is the transpose, which has the same
  // spectrum. zgeev balances, reduces to Hessenberg form and runs shifted QR
  // with deflation at machine precision, which meets any tol >= epsilon.
  std::vector<std::complex<double>> a = m.data();
  std::vector<std::complex<double>> out(n);
  const int dim = static_cast<int>(n);
  const int one = 1;
  int info = 0;
  int lwork = -1;
  std::complex<double> query;
  std::vector<double> rwork(2 * n);
  zgeev_("N", "N", &dim, a.data(), &dim, out.data(), nullptr, &one, nullptr, &one, &query, &lwork, rwork.data(),
         &info, 1, 1);
  if (info != 0) fail(ErrorCode::InvalidArgument, "workspace query failed");
  lwork = std::max(1, static_cast<int>(query.real()));
  std::vector<std::complex<double>> work(static_cast<std::size_t>(lwork));
  zgeev_("N", "N", &dim, a.data(), &dim, out.data(), nullptr, &one, nullptr, &one, work.data(), &lwork,
         rwork.data(), &info, 1, 1);
  if (info > 0) fail(ErrorCode::NoConvergence, "complex QR iteration did not converge");
  if (info < 0) fail(ErrorCode::InvalidArgument, "invalid argument to the complex eigensolver");
  return out;
}

}  // namespace difflab
