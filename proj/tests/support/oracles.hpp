#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library code they are used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

// Number of eigenvalues of the symmetric tridiagonal (d, e) below x (Sturm
// sequence via the LDL^T pivots).
inline std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  std::size_t count = 0;
  double q = d[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double prev = q == 0.0 ? 1e-300 : q;
    q = d[i] - x - e[i - 1] * e[i - 1] / prev;
    if (q < 0) ++count;
  }
  return count;
}

// All eigenvalues by bisection on the Sturm count, ascending.
inline std::vector<double> bisection_eigenvalues(const std::vector<double>& d, const std::vector<double>& e) {
  double lo = d[0], hi = d[0];
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < d.size() ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  std::vector<double> out(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    double a = lo - 1.0, b = hi + 1.0;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
      const double m = 0.5 * (a + b);
      if (sturm_count(d, e, m) > k) {
        b = m;
      } else {
        a = m;
      }
    }
    out[k] = 0.5 * (a + b);
  }
  return out;
}

// Greedy matching distance between two multisets of complex numbers.
inline double spectrum_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const auto& z : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const auto& u, const auto& v) { return std::abs(u - z) < std::abs(v - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

using CMat = std::vector<std::vector<std::complex<double>>>;

// Dense matrix with prescribed spectrum: S T S^-1 with T upper triangular
// (diagonal = eigs) and S unit lower triangular, so S^-1 is explicit.
inline CMat matrix_with_spectrum(const std::vector<std::complex<double>>& eigs, std::mt19937_64& rng) {
  const std::size_t n = eigs.size();
  std::normal_distribution<double> g;
  CMat t(n, std::vector<std::complex<double>>(n)), s = t, si = t;
  for (std::size_t i = 0; i < n; ++i) {
    t[i][i] = eigs[i];
    for (std::size_t j = i + 1; j < n; ++j) t[i][j] = {0.5 * g(rng), 0.5 * g(rng)};
    s[i][i] = 1.0;
    for (std::size_t j = 0; j < i; ++j) s[i][j] = {0.3 * g(rng), 0.3 * g(rng)};
  }
  // Forward substitution for the inverse of the unit lower triangular S.
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> v = i == c ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) v -= s[i][k] * si[k][c];
      si[i][c] = v;
    }
  }
  auto mul = [n](const CMat& a, const CMat& b) {
    CMat c(n, std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  return mul(mul(s, t), si);
}

// Durand-Kerner roots of the monic polynomial with coefficients c (c[0] the
// constant term, leading 1 implied).
inline std::vector<std::complex<double>> durand_kerner(const std::vector<std::complex<double>>& c) {
  const std::size_t n = c.size();
  auto p = [&](std::complex<double> z) {
    std::complex<double> v = 1.0;
    for (std::size_t i = n; i-- > 0;) v = v * z + c[i];
    return v;
  };
  std::vector<std::complex<double>> z(n);
  const std::complex<double> seed(0.4, 0.9);
  z[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) z[i] = z[i - 1] * seed;
  for (int it = 0; it < 2000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      const auto step = p(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) break;
  }
  return z;
}

// Characteristic polynomial (monic, constant term first) by Faddeev-LeVerrier.
inline std::vector<std::complex<double>> char_poly(const CMat& a) {
  const std::size_t n = a.size();
  CMat m(n, std::vector<std::complex<double>>(n));
  std::vector<std::complex<double>> c(n + 1);
  c[n] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    CMat am(n, std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j) am[i][j] += a[i][l] * m[l][j];
    for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
    m = am;
    std::complex<double> tr = 0.0;
    CMat prod(n, std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
    c[n - k] = -tr / static_cast<double>(k);
  }
  return std::vector<std::complex<double>>(c.begin(), c.end() - 1);
}

// 2 int_0^inf f(r) cos(2 pi k r) exp(-(r/R)^2) dr with Gauss-Legendre panels of
// width `panel` up to 6R. The Gaussian damping smooths the transform by a
// Gaussian of standard deviation 1 / (sqrt(2) pi R); near a kink of slope a
// this perturbs the value by at most about 0.8 a / (sqrt(2) pi R).
class DampedCosineTransform {
 public:
  template <class F>
  DampedCosineTransform(F f, double damping_radius, double panel = 0.5) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    const double end = 6.0 * damping_radius;
    for (double a = 0.0; a < end; a += panel) {
      const double c = a + 0.5 * panel, h = 0.5 * panel;
      auto push = [&](double r, double wt) {
        r_.push_back(r);
        fw_.push_back(wt * h * f(r) * std::exp(-(r / damping_radius) * (r / damping_radius)));
      };
      // Boost stores the nonnegative half of the symmetric rule.
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
          push(c, w[i]);
        } else {
          push(c - h * x[i], w[i]);
          push(c + h * x[i], w[i]);
        }
      }
    }
  }
  double operator()(double k) const {
    double s = 0.0;
    for (std::size_t i = 0; i < r_.size(); ++i) s += fw_[i] * std::cos(2.0 * std::numbers::pi * k * r_[i]);
    return 2.0 * s;
  }

 private:
  std::vector<double> r_, fw_;
};

// Atoms of the renewal measure for a law on the lattice (1/q) Z: probability
// that the walk started at 0 visits n / q, n >= 1, by first-step recursion.
inline std::map<int, double> lattice_renewal_atoms(const std::vector<std::pair<int, double>>& steps, int n_max) {
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
  p[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    for (const auto& [s, w] : steps)
      if (n - s >= 0) p[static_cast<std::size_t>(n)] += w * p[static_cast<std::size_t>(n - s)];
  }
  std::map<int, double> out;
  for (int n = 1; n <= n_max; ++n)
    if (p[static_cast<std::size_t>(n)] > 0) out[n] = p[static_cast<std::size_t>(n)];
  return out;
}

// Adaptive Gauss-Kronrod on [a, b]. Lower max_depth on short smooth panels
// whose integral underflows the relative tolerance.
template <class F>
double integrate(F f, double a, double b, unsigned max_depth = 15) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, 1e-13);
}

}  // namespace oracle
