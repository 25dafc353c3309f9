#pragma once

// Test-only reference computations. Deliberately written from the model
// definitions with plain loops over std::vector, without calling into the
// library code paths they are used to check.

#include <cmath>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix from_upper(int K, const std::vector<std::vector<double>>& upper_rows) {
  // upper_rows[i] lists P(i, i+1..K-1).
  Matrix P(K, std::vector<double>(K, 0.5));
  for (int i = 0; i < K; ++i) {
    for (int j = i + 1; j < K; ++j) {
      P[i][j] = upper_rows[i][j - i - 1];
      P[j][i] = 1.0 - P[i][j];
    }
  }
  return P;
}

inline std::vector<double> borda(const Matrix& P) {
  const int K = static_cast<int>(P.size());
  std::vector<double> b(K, 0.0);
  for (int i = 0; i < K; ++i) {
    double off = 0.0;
    for (int j = 0; j < K; ++j) off += (i == j) ? 0.0 : P[i][j];
    b[i] = off / (K - 1);
  }
  return b;
}

inline std::vector<double> shifted(const Matrix& P) {
  const int K = static_cast<int>(P.size());
  std::vector<double> s(K, 0.0);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) s[i] += P[i][j];
    s[i] /= K;
  }
  return s;
}

inline std::vector<double> winner(const std::vector<int>& A, const Matrix& P) {
  const int m = static_cast<int>(A.size());
  std::vector<double> w(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (j != i) w[i] += 2.0 * P[A[i]][A[j]] / (m * (m - 1.0));
    }
  }
  return w;
}

// Procedure for g written exactly as the two-branch fraction.
inline double g(int m, bool win) {
  const double ind = win ? 1.0 : 0.0;
  if (m % 2 == 0) {
    return (ind - (m - 2.0) / (4.0 * (m - 1.0))) / (m / (2.0 * (m - 1.0)));
  }
  return (ind - (m - 1.0) / (4.0 * m)) / ((m + 1.0) / (2.0 * m));
}

inline double m_prime(int m) {
  return std::sqrt(3.0 / 2.0) +
         std::sqrt(2.0 / 3.0) * std::pow(3.0 * m + 1.0, 2) / (4.0 * std::pow(m + 1.0, 2));
}

// Three-sigma band for a Bernoulli/categorical frequency.
inline double three_sigma(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

}  // namespace oracle
