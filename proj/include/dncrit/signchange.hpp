#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "dncrit/error.hpp"
#include "dncrit/exppoly.hpp"
#include "dncrit/matcore.hpp"

namespace dncrit {

/// Integer matrix W: w_ij is the number of sign changes in the coefficient
/// sequence of (A^t)_ij ordered by decreasing eigenvalue.
struct SignChangeMatrix {
  int n = 0;
  std::vector<int> w;  // row-major

  SignChangeMatrix() = default;
  explicit SignChangeMatrix(int dim) : n(dim), w(static_cast<std::size_t>(dim * dim), 0) {}
  SignChangeMatrix(int dim, std::vector<int> entries) : n(dim), w(std::move(entries)) {}

  int& operator()(int i, int j) { return w[static_cast<std::size_t>(i * n + j)]; }
  int operator()(int i, int j) const { return w[static_cast<std::size_t>(i * n + j)]; }

  int max_entry() const { return w.empty() ? 0 : *std::max_element(w.begin(), w.end()); }

  friend auto operator<=>(const SignChangeMatrix&, const SignChangeMatrix&) = default;
  friend bool operator==(const SignChangeMatrix&, const SignChangeMatrix&) = default;
};

/// Whether a decomposition meets the assumptions under which W is a sound
/// certificate input: invertible, simple spectrum, no near-zero eigenvector entries.
struct Genericity {
  bool invertible = false;
  bool distinct_eigenvalues = false;
  bool nonzero_eigenvector_entries = false;
  double min_abs_eigenvector_entry = 0.0;

  bool generic() const { return invertible && distinct_eigenvalues && nonzero_eigenvector_entries; }
};

inline Genericity genericity(const SpectralDecomposition& dec, const Tolerances& tol = {},
                             double min_entry = 1e-8) {
  Genericity g;
  const std::size_t n = dec.size();
  g.invertible = n == 0 || dec.eigenvalues.back() > tol.invertible * dec.scale();
  g.distinct_eigenvalues = count_distinct_eigenvalues(dec, tol) == static_cast<int>(n);
  double m = n == 0 ? 0.0 : std::abs(dec.eigenvectors(0, 0));
  for (double v : dec.eigenvectors.data()) m = std::min(m, std::abs(v));
  g.min_abs_eigenvector_entry = m;
  g.nonzero_eigenvector_entries = m > min_entry;
  return g;
}

inline SignChangeMatrix sign_change_matrix(const SpectralDecomposition& dec, const Tolerances& tol = {}) {
  const int n = static_cast<int>(dec.size());
  SignChangeMatrix w(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int c = descartes_bound(entry_exppoly(dec, static_cast<std::size_t>(i), static_cast<std::size_t>(j), tol));
      w(i, j) = w(j, i) = c;
    }
  }
  return w;
}

/// Structural rules every sign change matrix of a DN matrix obeys. Returns the
/// list of violations; empty means valid.
inline std::vector<std::string> validate_sign_change_matrix(const SignChangeMatrix& w) {
  std::vector<std::string> violations;
  const int n = w.n;
  if (static_cast<int>(w.w.size()) != n * n) {
    violations.push_back("entry count does not match dimension");
    return violations;
  }
  auto at = [](int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; };
  for (int i = 0; i < n; ++i) {
    if (w(i, i) != 0) violations.push_back("nonzero diagonal at " + at(i, i));
    int top = 0;
    for (int j = 0; j < n; ++j) {
      if (w(i, j) < 0) violations.push_back("negative entry at " + at(i, j));
      if (j > i && w(i, j) != w(j, i)) violations.push_back("asymmetric pair " + at(i, j));
      if (i == j) continue;
      if (w(i, j) == n - 1) ++top;
      else if (w(i, j) > n - 2) violations.push_back("entry above n-1 at " + at(i, j));
    }
    if (top > 1) violations.push_back("row " + std::to_string(i + 1) + " has " + std::to_string(top) + " entries equal to n-1");
  }
  // Columns: same rule, checked separately so asymmetric inputs are caught too.
  for (int j = 0; j < n; ++j) {
    int top = 0;
    for (int i = 0; i < n; ++i)
      if (i != j && w(i, j) == n - 1) ++top;
    if (top > 1) violations.push_back("column " + std::to_string(j + 1) + " has " + std::to_string(top) + " entries equal to n-1");
  }
  return violations;
}

/// Most connected components {t > 1 : (A^t)_ij < 0} can have. Every component
/// needs two roots (counted with multiplicity) in [1, inf), and at most w roots
/// exist in total; for invertible A one of them is spent at t = 0. Singular A
/// has no root there, so the bound relaxes to floor(w / 2).
constexpr int component_bound(int w, bool invertible = true) {
  if (w <= 0) return 0;
  return invertible ? (w - 1) / 2 : w / 2;
}

// ---------------------------------------------------------------------------
// Text format: same layout as matrices, integer entries. Files may hold several
// matrices separated by blank lines.

inline void write_sign_change_matrix(std::ostream& out, const SignChangeMatrix& w) {
  out << w.n << '\n';
  for (int i = 0; i < w.n; ++i) {
    for (int j = 0; j < w.n; ++j) out << (j ? " " : "") << w(i, j);
    out << '\n';
  }
}

inline std::vector<SignChangeMatrix> parse_sign_change_matrices(std::istream& in) {
  std::vector<SignChangeMatrix> out;
  std::string line;
  while (detail::next_data_line(in, line)) {
    const Matrix m = detail::read_square(in, line);
    const int n = static_cast<int>(m.size());
    SignChangeMatrix w(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double v = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (v != std::floor(v) || v < 0)
          throw Error(ErrorCode::Malformed, "sign change entries must be nonnegative integers");
        w(i, j) = static_cast<int>(v);
      }
    out.push_back(std::move(w));
  }
  if (out.empty()) throw Error(ErrorCode::Malformed, "no matrices in input");
  return out;
}

inline std::vector<SignChangeMatrix> parse_sign_change_matrices(const std::string& text) {
  std::istringstream in(text);
  return parse_sign_change_matrices(in);
}

}  // namespace dncrit
