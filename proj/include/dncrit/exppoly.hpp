#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "dncrit/bounds.hpp"
#include "dncrit/error.hpp"
#include "dncrit/matcore.hpp"

namespace dncrit {

/// Grid over the power variable t.
struct ScanConfig {
  double t_min = 0.01;
  double t_max = 4.0;
  double step = 0.01;
  double endpoint_tol = 1e-9;
  // Relative: phi(t) counts as negative when phi(t) < -entry_tol * sum_k |alpha_k| lambda_k^t.
  double entry_tol = 1e-9;

  /// Default scan for n x n matrices: up to two units past the component-count bound.
  static ScanConfig for_dimension(int n) {
    ScanConfig s;
    s.t_max = component_count_bound(n) + 2.0;
    return s;
  }

  void validate() const {
    if (!(t_min <= t_max) || !(step > 0.0) || !(endpoint_tol > 0.0) || !(entry_tol > 0.0))
      throw Error(ErrorCode::Malformed, "invalid scan configuration");
  }

  std::size_t grid_size() const {
    return static_cast<std::size_t>(std::floor((t_max - t_min) / step + 1e-9)) + 1;
  }
  double grid_point(std::size_t k) const { return t_min + static_cast<double>(k) * step; }
};

struct ExpTerm {
  double base = 0.0;
  double coefficient = 0.0;
};

/// One entry (i, j) of A^t written as sum_k alpha_k * lambda_k^t.
///
/// `terms` has strictly decreasing positive bases with near-equal eigenvalues
/// merged; it is what sign counting sees. Evaluation uses the unmerged
/// components so that it matches fractional_power term for term.
class ExpPoly {
 public:
  ExpPoly() = default;

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }
  const std::vector<ExpTerm>& terms() const noexcept { return terms_; }
  bool singular() const noexcept { return singular_; }
  /// Coefficients with magnitude at or below this are ignored by descartes_bound.
  double zero_threshold() const noexcept { return zero_threshold_; }

  double eval(double t) const {
    if (t < 0.0 && singular_) throw Error(ErrorCode::ZeroToNegativePower, "singular exp-poly at negative t");
    double s = t == 0.0 ? zero_base_coefficient_ : 0.0;
    for (const auto& c : components_) s += c.coefficient * std::pow(c.base, t);
    return s;
  }

  /// sum_k |alpha_k| lambda_k^t; bounds |phi(t)| and sets the scale of rounding error.
  double magnitude(double t) const {
    double s = t == 0.0 ? std::abs(zero_base_coefficient_) : 0.0;
    for (const auto& c : components_) s += std::abs(c.coefficient) * std::pow(c.base, t);
    return s;
  }

  /// Builds directly from (base, coefficient) pairs; bases must be positive and
  /// are sorted and merged exactly (no tolerance).
  static ExpPoly from_terms(std::vector<ExpTerm> terms, double zero_threshold = 0.0) {
    std::sort(terms.begin(), terms.end(), [](const ExpTerm& a, const ExpTerm& b) { return a.base > b.base; });
    ExpPoly p;
    p.components_ = terms;
    for (const auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().base == t.base)
        p.terms_.back().coefficient += t.coefficient;
      else
        p.terms_.push_back(t);
    }
    p.zero_threshold_ = zero_threshold;
    return p;
  }

  friend ExpPoly entry_exppoly(const SpectralDecomposition&, std::size_t, std::size_t, const Tolerances&);

 private:
  std::size_t row_ = 0, col_ = 0;
  std::vector<ExpTerm> terms_;
  std::vector<ExpTerm> components_;
  bool singular_ = false;
  double zero_base_coefficient_ = 0.0;
  double zero_threshold_ = 0.0;
};

/// Entry (i, j) (zero-based) of A^t: term k has base lambda_k and coefficient u_ik u_jk.
inline ExpPoly entry_exppoly(const SpectralDecomposition& dec, std::size_t i, std::size_t j,
                             const Tolerances& tol = {}) {
  const std::size_t n = dec.size();
  if (i >= n || j >= n) throw Error(ErrorCode::IndexOutOfRange, "entry index outside matrix");
  const double zero = zero_eigenvalue_threshold(dec, tol);
  const double gap = tol.merge * dec.scale();

  ExpPoly p;
  p.row_ = i;
  p.col_ = j;
  double raw_scale = 0.0;
  double group_anchor = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = dec.eigenvalues[k];
    const double alpha = dec.eigenvectors(i, k) * dec.eigenvectors(j, k);
    raw_scale = std::max(raw_scale, std::abs(alpha));
    if (lambda < -zero) throw Error(ErrorCode::NegativeEigenvalue, "matrix is not positive semidefinite");
    if (lambda <= zero) {
      p.singular_ = true;
      p.zero_base_coefficient_ += alpha;
      continue;
    }
    p.components_.push_back({lambda, alpha});
    if (!p.terms_.empty() && group_anchor - lambda <= gap) {
      p.terms_.back().coefficient += alpha;
    } else {
      p.terms_.push_back({lambda, alpha});
      group_anchor = lambda;
    }
  }
  double merged_scale = 0.0;
  for (const auto& t : p.terms_) merged_scale = std::max(merged_scale, std::abs(t.coefficient));
  p.zero_threshold_ = tol.zero_coeff * std::max(raw_scale, merged_scale);
  return p;
}

/// Sign changes in the coefficient sequence (decreasing base), skipping zeros.
inline int descartes_bound(const ExpPoly& p) {
  int changes = 0;
  int last = 0;
  for (const auto& t : p.terms()) {
    if (std::abs(t.coefficient) <= p.zero_threshold()) continue;
    const int s = t.coefficient > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

inline double eval_exppoly(const ExpPoly& p, double t) { return p.eval(t); }

struct NegativeIntervalSet {
  std::size_t row = 0, col = 0;
  std::vector<std::pair<double, double>> intervals;
  std::pair<double, double> scan_range;
  double endpoint_tol = 0.0;
};

/// Negative runs of phi on the scan grid, each widened to the zeros of phi by
/// bisection. Dips narrower than the grid step can be missed.
inline NegativeIntervalSet negative_intervals(const ExpPoly& p, const ScanConfig& scan) {
  scan.validate();
  NegativeIntervalSet out;
  out.row = p.row();
  out.col = p.col();
  out.endpoint_tol = scan.endpoint_tol;

  const std::size_t count = scan.grid_size();
  out.scan_range = {scan.t_min, scan.grid_point(count - 1)};
  auto negative = [&](double t) { return p.eval(t) < -scan.entry_tol * p.magnitude(t); };

  // Leftmost point of {phi < 0} in (a, b], given phi(b) < 0.
  auto refine_left = [&](double a, double b) {
    if (p.eval(a) < 0.0) return a;
    while (b - a > scan.endpoint_tol) {
      const double mid = 0.5 * (a + b);
      (p.eval(mid) < 0.0 ? b : a) = mid;
    }
    return 0.5 * (a + b);
  };
  // Rightmost point of {phi < 0} in [a, b), given phi(a) < 0.
  auto refine_right = [&](double a, double b) {
    if (p.eval(b) < 0.0) return b;
    while (b - a > scan.endpoint_tol) {
      const double mid = 0.5 * (a + b);
      (p.eval(mid) < 0.0 ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };

  std::size_t k = 0;
  while (k < count) {
    if (!negative(scan.grid_point(k))) {
      ++k;
      continue;
    }
    const std::size_t first = k;
    while (k + 1 < count && negative(scan.grid_point(k + 1))) ++k;
    const std::size_t last = k;
    const double lo = first == 0 ? scan.grid_point(0) : refine_left(scan.grid_point(first - 1), scan.grid_point(first));
    const double hi = last + 1 == count ? scan.grid_point(last)
                                        : refine_right(scan.grid_point(last), scan.grid_point(last + 1));
    if (lo < hi) out.intervals.emplace_back(lo, hi);
    ++k;
  }
  return out;
}

/// Largest t at which the entry is seen negative on the scan, or 0.
inline double entry_critical_exponent(const ExpPoly& p, const ScanConfig& scan) {
  double sup = 0.0;
  for (const auto& [lo, hi] : negative_intervals(p, scan).intervals) sup = std::max(sup, hi);
  return sup;
}

}  // namespace dncrit
