#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dncrit/error.hpp"
#include "dncrit/matrix.hpp"

namespace dncrit {

/// Numerical thresholds shared by every module. Relative thresholds scale with
/// max(1, lambda_1) unless noted.
struct Tolerances {
  double sym = 1e-12;          // relative asymmetry accepted on input
  double psd = 1e-10;          // eigenvalue >= -psd * max(1, lambda_1) counts as nonnegative
  double invertible = 1e-10;   // lambda_n > invertible * max(1, lambda_1)
  double zero_coeff = 1e-10;   // exp-poly coefficients below this (relative) are skipped when counting signs
  double merge = 1e-8;         // eigenvalues closer than this (relative) are one base
  double jacobi = 1e-14;       // off-diagonal Frobenius mass / Frobenius norm at convergence
  int max_sweeps = 50;
  double sign = 1e-8;          // first eigenvector coordinate above this is made positive
};

struct DnReport {
  bool is_nonnegative = false;
  bool is_psd = false;
  bool is_dn = false;
  double min_entry = 0.0;
  double min_eigenvalue = 0.0;
  bool is_invertible = false;
  bool is_irreducible = false;
  int num_distinct_eigenvalues = 0;
};

/// Eigenvalues sorted non-increasing; column k of `eigenvectors` is the unit
/// eigenvector for eigenvalues[k].
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  double top() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
  double scale() const { return std::max(1.0, top()); }
};

// ---------------------------------------------------------------------------
// Text format: '#' comment lines, then n, then n rows of n numbers.

namespace detail {

inline bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

inline std::vector<double> parse_numbers(const std::string& line) {
  std::istringstream ss(line);
  std::vector<double> values;
  std::string token;
  while (ss >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Malformed, "non-numeric token '" + token + "'");
    }
    if (used != token.size()) throw Error(ErrorCode::Malformed, "non-numeric token '" + token + "'");
    values.push_back(v);
  }
  return values;
}

inline Matrix read_square(std::istream& in, std::string& line) {
  const auto header = parse_numbers(line);
  if (header.size() != 1 || header[0] < 1 || header[0] != std::floor(header[0]))
    throw Error(ErrorCode::Malformed, "first data line must be a positive integer dimension");
  const auto n = static_cast<std::size_t>(header[0]);
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!next_data_line(in, line))
      throw Error(ErrorCode::Malformed, "expected " + std::to_string(n) + " rows, got " + std::to_string(i));
    const auto row = parse_numbers(line);
    if (row.size() != n)
      throw Error(ErrorCode::Malformed, "row " + std::to_string(i + 1) + " has " +
                                            std::to_string(row.size()) + " entries, expected " +
                                            std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) a(i, j) = row[j];
  }
  return a;
}

}  // namespace detail

inline SymMatrix parse_matrix(std::istream& in, const Tolerances& tol = {}) {
  std::string line;
  if (!detail::next_data_line(in, line)) throw Error(ErrorCode::Malformed, "empty input");
  Matrix a = detail::read_square(in, line);
  if (detail::next_data_line(in, line)) throw Error(ErrorCode::Malformed, "trailing data after matrix");
  return SymMatrix::from(a, tol.sym);
}

inline SymMatrix parse_matrix(const std::string& text, const Tolerances& tol = {}) {
  std::istringstream in(text);
  return parse_matrix(in, tol);
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigensolver.

inline SpectralDecomposition spectral_decompose(const SymMatrix& sym, const Tolerances& tol = {}) {
  const std::size_t n = sym.size();
  Matrix a = sym.matrix();
  Matrix v = Matrix::identity(n);

  auto off_norm2 = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return s;
  };
  double frob2 = 0.0;
  for (double x : a.data()) frob2 += x * x;
  const double target = tol.jacobi * tol.jacobi * frob2;

  int sweep = 0;
  while (off_norm2() > target) {
    if (sweep++ >= tol.max_sweeps)
      throw Error(ErrorCode::NoConvergence, "Jacobi sweep limit exceeded");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  SpectralDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.eigenvectors = Matrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    dec.eigenvalues[k] = a(src, src);
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, src)) > tol.sign) {
        sign = v(i, src) < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) dec.eigenvectors(i, k) = sign * v(i, src);
  }
  return dec;
}

/// Eigenvalues at or below this magnitude are treated as exact zeros when powering.
inline double zero_eigenvalue_threshold(const SpectralDecomposition& dec, const Tolerances& tol) {
  return tol.psd * dec.scale();
}

/// Sum over k of lambda_k^t x_k x_k^T, with 0^t = 0 for t > 0 and 0^0 = 1.
inline SymMatrix fractional_power(const SpectralDecomposition& dec, double t, const Tolerances& tol = {}) {
  const std::size_t n = dec.size();
  const double zero = zero_eigenvalue_threshold(dec, tol);
  std::vector<double> powered(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = dec.eigenvalues[k];
    if (lambda < -zero)
      throw Error(ErrorCode::NegativeEigenvalue, "eigenvalue " + std::to_string(lambda) + " below tolerance");
    if (lambda <= zero) {
      if (t < 0.0) throw Error(ErrorCode::ZeroToNegativePower, "zero eigenvalue raised to negative power");
      powered[k] = t == 0.0 ? 1.0 : 0.0;
    } else {
      powered[k] = std::pow(lambda, t);
    }
  }
  const Matrix& u = dec.eigenvectors;
  Matrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += powered[k] * u(i, k) * u(j, k);
      r(i, j) = r(j, i) = s;
    }
  }
  return SymMatrix::from(r, 0.0);
}

inline SymMatrix fractional_power(const SymMatrix& a, double t, const Tolerances& tol = {}) {
  return fractional_power(spectral_decompose(a, tol), t, tol);
}

/// Count of eigenvalue groups after merging values within tol.merge * max(1, lambda_1).
inline int count_distinct_eigenvalues(const SpectralDecomposition& dec, const Tolerances& tol = {}) {
  if (dec.eigenvalues.empty()) return 0;
  const double gap = tol.merge * dec.scale();
  int count = 1;
  double anchor = dec.eigenvalues.front();
  for (std::size_t k = 1; k < dec.size(); ++k) {
    if (anchor - dec.eigenvalues[k] > gap) {
      ++count;
      anchor = dec.eigenvalues[k];
    }
  }
  return count;
}

/// Connectivity of the graph with an edge wherever a_ij != 0, i != j.
inline bool is_irreducible(const SymMatrix& a) {
  const std::size_t n = a.size();
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && !seen[j] && a(i, j) != 0.0) {
        seen[j] = true;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == n;
}

inline DnReport check_dn(const SymMatrix& a, const Tolerances& tol = {}) {
  DnReport r;
  const auto dec = spectral_decompose(a, tol);
  r.min_entry = a.matrix().min_entry();
  r.min_eigenvalue = dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues.back();
  r.is_nonnegative = r.min_entry >= 0.0;
  r.is_psd = r.min_eigenvalue >= -tol.psd * dec.scale();
  r.is_dn = r.is_nonnegative && r.is_psd;
  r.is_invertible = r.min_eigenvalue > tol.invertible * dec.scale();
  r.is_irreducible = is_irreducible(a);
  r.num_distinct_eigenvalues = count_distinct_eigenvalues(dec, tol);
  return r;
}

/// Least k >= 1 with A^k entry-wise positive. Works on the zero pattern only,
/// so it is exact for nonnegative A.
inline int primitivity_index(const SymMatrix& a, const Tolerances& tol = {}) {
  const auto report = check_dn(a, tol);
  if (!report.is_dn) throw Error(ErrorCode::NotDn, "matrix is not doubly nonnegative");
  if (!report.is_irreducible) throw Error(ErrorCode::NotIrreducible, "matrix is reducible");
  const std::size_t n = a.size();
  std::vector<bool> pattern(n * n), power(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pattern[i * n + j] = a(i, j) > 0.0;
  power = pattern;
  // Wielandt: a primitive matrix reaches positivity by (n-1)^2 + 1.
  const int limit = static_cast<int>((n - 1) * (n - 1) + 1);
  for (int k = 1;; ++k) {
    if (std::all_of(power.begin(), power.end(), [](bool b) { return b; })) return k;
    if (k >= limit) throw Error(ErrorCode::NotIrreducible, "matrix is not primitive");
    std::vector<bool> next(n * n, false);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = 0; m < n; ++m)
          if (power[i * n + m] && pattern[m * n + j]) {
            next[i * n + j] = true;
            break;
          }
    power = std::move(next);
  }
}

}  // namespace dncrit
