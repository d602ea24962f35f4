// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations, deliberately independent of the
// library's computation paths: dense Kronecker-built unitaries for the gate
// set, a brute-force tensor product, central finite differences, and a
// recursive edit distance.
#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qsmiles/params.hpp"
#include "qsmiles/qsim.hpp"
#include "qsmiles/rng.hpp"

namespace oracles {

using qsmiles::cdouble;

using Matrix = std::vector<std::vector<cdouble>>;  // dense, row-major

inline Matrix identity(std::size_t n) {
  Matrix m(n, std::vector<cdouble>(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix out(n, std::vector<cdouble>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const cdouble aik = a[i][k];
      if (aik == cdouble{}) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += aik * b[k][j];
    }
  }
  return out;
}

inline Matrix adjoint(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix out(n, std::vector<cdouble>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = std::conj(a[j][i]);
  }
  return out;
}

inline std::vector<cdouble> apply(const Matrix& m,
                                  const std::vector<cdouble>& v) {
  std::vector<cdouble> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  }
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t na = a.size(), nb = b.size();
  Matrix out(na * nb, std::vector<cdouble>(na * nb));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l)
          out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
  return out;
}

inline Matrix ry_matrix(double t) {
  return {{std::cos(t / 2), -std::sin(t / 2)},
          {std::sin(t / 2), std::cos(t / 2)}};
}

inline Matrix rz_matrix(double t) {
  return {{std::polar(1.0, -t / 2), 0.0}, {0.0, std::polar(1.0, t / 2)}};
}

// Little-endian embedding: qubit 0 is the least significant index bit, so a
// gate on qubit q sits as I_(2^(n-1-q)) (x) G (x) I_(2^q).
inline Matrix single_qubit_unitary(int n, int q, const Matrix& g) {
  Matrix m = identity(std::size_t{1} << (n - 1 - q));
  m = kron(m, g);
  return kron(m, identity(std::size_t{1} << q));
}

inline Matrix crz_matrix(int n, int control, int target, double t) {
  const std::size_t dim = std::size_t{1} << n;
  Matrix m(dim, std::vector<cdouble>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i >> control) & 1) {
      m[i][i] = std::polar(1.0, ((i >> target) & 1) ? t / 2 : -t / 2);
    } else {
      m[i][i] = 1.0;
    }
  }
  return m;
}

inline std::vector<cdouble> state_amps(const qsmiles::StateVector& s) {
  return std::vector<cdouble>(s.amplitudes().begin(), s.amplitudes().end());
}

inline qsmiles::StateVector random_state(int n, qsmiles::Rng& rng) {
  qsmiles::StateVector s(n);
  double norm = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    s.amp(i) = cdouble{rng.normal(), rng.normal()};
    norm += std::norm(s.amp(i));
  }
  const double inv = 1.0 / std::sqrt(norm);
  for (std::size_t i = 0; i < s.dim(); ++i) s.amp(i) *= inv;
  return s;
}

// Brute-force tensor product of factor vectors, via digit decomposition of
// the output index rather than pairwise expansion.
inline std::vector<double> kron_vectors(
    const std::vector<std::vector<double>>& factors) {
  std::size_t total = 1;
  for (const auto& f : factors) total *= f.size();
  std::vector<double> out(total, 1.0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t j = factors.size(); j-- > 0;) {
      const std::size_t d = factors[j].size();
      out[idx] *= factors[j][rest % d];
      rest /= d;
    }
  }
  return out;
}

// Central finite difference of `loss` along one parameter entry.
inline double finite_difference(qsmiles::ParamStore& store, int param,
                                std::size_t index,
                                const std::function<double()>& loss,
                                double eps = 1e-5) {
  double& x = store.at(param).value[index];
  const double saved = x;
  x = saved + eps;
  const double plus = loss();
  x = saved - eps;
  const double minus = loss();
  x = saved;
  return (plus - minus) / (2.0 * eps);
}

// rel-tolerance comparison with an absolute floor.
inline bool grad_close(double analytic, double numeric, double rel = 1e-4,
                       double abs_floor = 1e-6) {
  const double diff = std::abs(analytic - numeric);
  if (diff <= abs_floor) return true;
  return diff <= rel * std::max(std::abs(analytic), std::abs(numeric));
}

// Exponential-recursion edit distance (memoized on demand by the caller).
inline std::size_t lev_recursive(const std::string& a, const std::string& b,
                                 std::size_t i, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  const std::size_t subst =
      lev_recursive(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
  const std::size_t del = lev_recursive(a, b, i + 1, j) + 1;
  const std::size_t ins = lev_recursive(a, b, i, j + 1) + 1;
  return std::min({subst, del, ins});
}

inline std::size_t lev_recursive(const std::string& a, const std::string& b) {
  return lev_recursive(a, b, 0, 0);
}

}  // namespace oracles
