#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dncrit/bounds.hpp"
#include "dncrit/enumerate.hpp"
#include "dncrit/error.hpp"
#include "dncrit/signchange.hpp"

namespace dncrit {

/// Per-entry upper bounds on the entry critical exponent; nullopt = Unbounded.
struct EntryBoundMatrix {
  int n = 0;
  std::vector<std::optional<double>> bound;

  const std::optional<double>& operator()(int i, int j) const { return bound[static_cast<std::size_t>(i * n + j)]; }
  std::optional<double>& operator()(int i, int j) { return bound[static_cast<std::size_t>(i * n + j)]; }

  bool bounded() const {
    return std::all_of(bound.begin(), bound.end(), [](const auto& b) { return b.has_value(); });
  }

  /// Largest bound; nullopt when any entry is Unbounded.
  std::optional<double> max_bound() const {
    double m = 0.0;
    for (const auto& b : bound) {
      if (!b) return std::nullopt;
      m = std::max(m, *b);
    }
    return m;
  }
};

/// Entry bounds for invertible DN matrices realizing W:
///   w <= 1        -> 0
///   w == 2        -> 1
///   row i has no entry > 4 and M entries > 2 -> M + 1 for every entry in row i
///   (same for column j)
/// The minimum of the applicable rules is taken.
inline EntryBoundMatrix entry_bounds_from_w(const SignChangeMatrix& w) {
  if (const auto v = validate_sign_change_matrix(w); !v.empty())
    throw Error(ErrorCode::InvalidW, v.front());
  const int n = w.n;
  std::vector<std::optional<double>> row_rule(static_cast<std::size_t>(n)), col_rule(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    int row_big = 0, row_many = 0, col_big = 0, col_many = 0;
    for (int m = 0; m < n; ++m) {
      row_big += w(k, m) > 4;
      row_many += w(k, m) > 2;
      col_big += w(m, k) > 4;
      col_many += w(m, k) > 2;
    }
    if (row_big == 0) row_rule[static_cast<std::size_t>(k)] = row_many + 1.0;
    if (col_big == 0) col_rule[static_cast<std::size_t>(k)] = col_many + 1.0;
  }

  EntryBoundMatrix out{n, std::vector<std::optional<double>>(static_cast<std::size_t>(n * n))};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::optional<double> b;
      auto take = [&b](std::optional<double> c) {
        if (c && (!b || *c < *b)) b = c;
      };
      if (w(i, j) <= 1) take(0.0);
      else if (w(i, j) == 2) take(1.0);
      take(row_rule[static_cast<std::size_t>(i)]);
      take(col_rule[static_cast<std::size_t>(j)]);
      out(i, j) = b;
    }
  }
  return out;
}

struct ClassCertificate {
  SignChangeMatrix w;
  EntryBoundMatrix entry_bounds;
  std::optional<double> max_bound;
};

struct CertificateReport {
  int n = 0;
  int num_classes = 0;
  std::vector<std::optional<double>> per_class_max;
  std::optional<double> certified_upper;  // nullopt when some class is Unbounded
  double lower = 0.0;
  double crude_upper = 0.0;
  int unbounded_classes = 0;
  std::string conclusion;
  std::vector<ClassCertificate> classes;

  bool certified() const { return certified_upper.has_value(); }
};

namespace detail {

inline std::string format_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace detail

/// Applies the entry-bound rules to each class and aggregates.
inline CertificateReport certify_classes(int n, const std::vector<SignChangeMatrix>& classes) {
  CertificateReport r;
  r.n = n;
  r.num_classes = static_cast<int>(classes.size());
  r.lower = lower_bound(n);
  r.crude_upper = crude_bound(n);
  double upper = 0.0;
  for (const auto& w : classes) {
    if (w.n != n) throw Error(ErrorCode::InvalidW, "class dimension does not match n");
    ClassCertificate c{w, entry_bounds_from_w(w), std::nullopt};
    c.max_bound = c.entry_bounds.max_bound();
    r.per_class_max.push_back(c.max_bound);
    if (c.max_bound) upper = std::max(upper, *c.max_bound);
    else ++r.unbounded_classes;
    r.classes.push_back(std::move(c));
  }
  const std::string m = "m(" + std::to_string(n) + ")";
  if (r.unbounded_classes > 0) {
    r.conclusion = "certification failed for " + std::to_string(r.unbounded_classes) + " of " +
                   std::to_string(r.num_classes) + " classes; " + detail::format_number(r.lower) +
                   " <= " + m + " <= " + detail::format_number(r.crude_upper);
    return r;
  }
  r.certified_upper = upper;
  if (upper <= r.lower)
    r.conclusion = m + " = " + detail::format_number(r.lower);
  else
    r.conclusion = detail::format_number(r.lower) + " <= " + m + " <= " + detail::format_number(upper);
  return r;
}

inline CertificateReport certify_dimension(int n, unsigned threads = 0) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "certification needs n >= 2");
  return certify_classes(n, enumerate_w_classes(n, threads));
}

}  // namespace dncrit
