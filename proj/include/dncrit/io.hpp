#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dncrit/certify.hpp"
#include "dncrit/error.hpp"
#include "dncrit/experiments.hpp"
#include "dncrit/exppoly.hpp"
#include "dncrit/matcore.hpp"
#include "dncrit/signchange.hpp"

namespace dncrit {

using json = nlohmann::json;

/// Shortest decimal that reads back to the same double (17 significant digits).
inline std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_matrix(std::ostream& out, const Matrix& a, const std::string& comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << a.size() << '\n';
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) out << (j ? " " : "") << format_full(a(i, j));
    out << '\n';
  }
}

inline void write_matrix(std::ostream& out, const SymMatrix& a, const std::string& comment = {}) {
  write_matrix(out, a.matrix(), comment);
}

// ---------------------------------------------------------------------------
// CSV scans.

/// Header `t,i,j,value`, one row per grid point per entry, indices one-based.
inline void emit_scan(std::ostream& out, const SymMatrix& a, const ScanConfig& scan,
                      const std::vector<std::pair<std::size_t, std::size_t>>& entries, const Tolerances& tol = {}) {
  scan.validate();
  const auto dec = spectral_decompose(a, tol);
  std::vector<ExpPoly> polys;
  for (const auto& [i, j] : entries) polys.push_back(entry_exppoly(dec, i, j, tol));
  out << "t,i,j,value\n";
  for (std::size_t k = 0; k < scan.grid_size(); ++k) {
    const double t = scan.grid_point(k);
    for (const auto& p : polys)
      out << format_full(t) << ',' << p.row() + 1 << ',' << p.col() + 1 << ',' << format_full(p.eval(t)) << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON.

inline json to_json(const Matrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.size(); ++i) rows.push_back(std::vector<double>(a.row(i).begin(), a.row(i).end()));
  return rows;
}

inline json to_json(const SymMatrix& a) { return to_json(a.matrix()); }

inline json to_json(const SignChangeMatrix& w) {
  json rows = json::array();
  for (int i = 0; i < w.n; ++i) {
    json row = json::array();
    for (int j = 0; j < w.n; ++j) row.push_back(w(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const EntryBoundMatrix& b) {
  json rows = json::array();
  for (int i = 0; i < b.n; ++i) {
    json row = json::array();
    for (int j = 0; j < b.n; ++j) row.push_back(to_json(b(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const DnReport& r) {
  return {{"is_nonnegative", r.is_nonnegative}, {"is_psd", r.is_psd},
          {"is_dn", r.is_dn},                   {"min_entry", r.min_entry},
          {"min_eigenvalue", r.min_eigenvalue}, {"is_invertible", r.is_invertible},
          {"is_irreducible", r.is_irreducible}, {"num_distinct_eigenvalues", r.num_distinct_eigenvalues}};
}

inline json to_json(const ScanConfig& s) {
  return {{"t_min", s.t_min},
          {"t_max", s.t_max},
          {"step", s.step},
          {"endpoint_tol", s.endpoint_tol},
          {"entry_tol", s.entry_tol}};
}

inline std::string crude_bound_derivation(int n) {
  const bool odd = n % 2 != 0;
  return std::string("k(n) = ") + (odd ? "(n^2-4n+3)/2" : "(n^2-5n+6)/2") + " for " + (odd ? "odd" : "even") +
         " n; crude bound k(n)+1 = " + format_full(crude_bound(n)) +
         ". Parity cases follow the displayed k(n); the inline column-count prose swaps the odd/even labels.";
}

inline json to_json(const CertificateReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes)
    classes.push_back({{"w", to_json(c.w)}, {"entry_bounds", to_json(c.entry_bounds)}, {"max_bound", to_json(c.max_bound)}});
  return {{"n", r.n},
          {"num_classes", r.num_classes},
          {"certified_upper", to_json(r.certified_upper)},
          {"lower", r.lower},
          {"crude_upper", r.crude_upper},
          {"crude_upper_derivation", crude_bound_derivation(r.n)},
          {"unbounded_classes", r.unbounded_classes},
          {"conclusion", r.conclusion},
          {"classes", classes}};
}

inline json to_json(const WitnessReport& r) {
  json claims = json::array();
  for (const auto& c : r.claims) claims.push_back({{"description", c.description}, {"verified", c.verified}});
  json window = r.negative_window ? json::array({r.negative_window->first, r.negative_window->second}) : json(nullptr);
  return {{"matrix", to_json(r.matrix)},
          {"claims", claims},
          {"verified", r.verified()},
          {"negative_window", window},
          {"min_value", r.min_value},
          {"argmin_t", r.argmin_t},
          {"empirical_critexp", r.empirical_critexp},
          {"scan", to_json(r.scan)}};
}

inline json to_json(const PerturbationReport& r) {
  return {{"epsilon", r.epsilon},
          {"truncation", r.truncation},
          {"verified_range", {r.verified_range.first, r.verified_range.second}},
          {"pass", r.pass},
          {"min_value", r.min_value},
          {"argmin_t", r.argmin_t},
          {"series_residual", r.series_residual},
          {"scan", to_json(r.scan)}};
}

inline json to_json(const SearchSummary& s) {
  json hist = json::array();
  for (const auto& [edge, count] : s.histogram) hist.push_back({{"lo", edge}, {"hi", edge + 0.25}, {"count", count}});
  return {{"n", s.n},
          {"trials", s.trials},
          {"seed", s.seed},
          {"family", to_string(s.family)},
          {"max_found", s.max_found},
          {"argmax_matrix", to_json(s.argmax)},
          {"argmax_distinct_eigenvalues", s.argmax_distinct_eigenvalues},
          {"histogram", hist},
          {"scan", to_json(s.scan)}};
}

}  // namespace dncrit
