#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dncrit/certify.hpp"
#include "dncrit/enumerate.hpp"
#include "dncrit/error.hpp"
#include "dncrit/experiments.hpp"
#include "dncrit/io.hpp"
#include "dncrit/matcore.hpp"
#include "dncrit/signchange.hpp"

namespace dncrit::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

namespace detail {

inline SymMatrix load_matrix(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Malformed, "cannot open " + path);
  return parse_matrix(in, tol);
}

inline std::vector<SignChangeMatrix> load_w(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Malformed, "cannot open " + path);
  return parse_sign_change_matrices(in);
}

/// Writes via `emit` to `path`, or to `fallback` when path is empty.
template <class Emit>
void write_output(const std::string& path, std::ostream& fallback, Emit&& emit) {
  if (path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Malformed, "cannot write " + path);
  emit(f);
}

inline void write_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Malformed, "cannot write " + path);
  f << j.dump(2) << '\n';
}

inline std::pair<std::size_t, std::size_t> parse_entry(const std::string& s, std::size_t n) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::Malformed, "entry must be i,j");
  std::size_t i = 0, j = 0;
  try {
    i = std::stoul(s.substr(0, comma));
    j = std::stoul(s.substr(comma + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Malformed, "entry must be i,j");
  }
  if (i < 1 || j < 1 || i > n || j > n) throw Error(ErrorCode::IndexOutOfRange, "entry " + s + " outside matrix");
  return {i - 1, j - 1};
}

inline std::string strip_spaces(std::string s) {
  std::erase(s, ' ');
  return s;
}

}  // namespace detail

/// Parses argv (argv[0] is the program name), dispatches, and returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Critical exponents of doubly nonnegative matrices under fractional powers", "dncrit"};
  app.require_subcommand(1);
  app.fallthrough();

  Tolerances tol;
  ScanConfig scan;
  std::string out_path;
  unsigned threads = 0;
  app.add_option("--psd-tol", tol.psd, "relative PSD / zero-eigenvalue tolerance")->capture_default_str();
  app.add_option("--zero-tol", tol.zero_coeff, "relative coefficient tolerance for sign counting")->capture_default_str();
  app.add_option("--step", scan.step, "scan grid step")->capture_default_str();
  app.add_option("--endpoint-tol", scan.endpoint_tol, "bisection tolerance for interval endpoints")->capture_default_str();
  app.add_option("--entry-tol", scan.entry_tol, "relative negativity threshold")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", out_path, "machine-readable output path (JSON or CSV)");

  std::string file;
  auto* check = app.add_subcommand("check", "doubly-nonnegativity report");
  check->add_option("FILE", file)->required();

  double power_t = 1.0;
  auto* power = app.add_subcommand("power", "fractional power A^t");
  power->add_option("FILE", file)->required();
  power->add_option("--t", power_t)->required();

  auto* signchange = app.add_subcommand("signchange", "sign change matrix W of A");
  signchange->add_option("FILE", file)->required();

  int n = 0;
  bool emit_patterns = false;
  auto* enumerate = app.add_subcommand("enumerate", "sign patterns and W classes");
  enumerate->add_option("--n", n)->required();
  enumerate->add_flag("--emit-patterns", emit_patterns);

  std::string w_file;
  auto* certify = app.add_subcommand("certify", "certify the critical exponent from W classes");
  auto* certify_n = certify->add_option("--n", n);
  auto* certify_w = certify->add_option("--w-file", w_file);
  certify_n->excludes(certify_w);
  certify->require_option(1);

  bool tridiagonal_flag = false;
  std::uint64_t seed = 0;
  std::string matrix_out;
  auto* witness = app.add_subcommand("witness", "lower-bound witness");
  witness->add_flag("--tridiagonal", tridiagonal_flag)->required();
  witness->add_option("--n", n)->required();
  witness->add_option("--seed", seed)->required();
  witness->add_option("--matrix-out", matrix_out, "write the witness matrix in text format");

  std::optional<double> t_min, t_max;
  std::vector<std::string> entries;
  auto* scan_cmd = app.add_subcommand("scan", "CSV of entries of A^t over a t grid");
  scan_cmd->add_option("FILE", file)->required();
  scan_cmd->add_option("--t-min", t_min);
  scan_cmd->add_option("--t-max", t_max);
  scan_cmd->add_option("--entry", entries, "one-based i,j (repeatable)");

  int trials = 0;
  std::string family_name = "mixed";
  auto* search = app.add_subcommand("search", "random search for large critical exponents");
  search->add_option("--n", n)->required();
  search->add_option("--trials", trials)->required()->check(CLI::NonNegativeNumber);
  search->add_option("--seed", seed)->required();
  search->add_option("--family", family_name)->check(CLI::IsMember({"gram", "tridiagonal", "mixed"}));
  search->add_option("--matrix-out", matrix_out, "write the argmax matrix in text format");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("dncrit");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*check) {
      const auto a = detail::load_matrix(file, tol);
      const auto r = check_dn(a, tol);
      out << "n=" << a.size() << " is_dn=" << r.is_dn << " is_nonnegative=" << r.is_nonnegative
          << " is_psd=" << r.is_psd << " min_entry=" << r.min_entry << " min_eigenvalue=" << r.min_eigenvalue
          << " is_invertible=" << r.is_invertible << " is_irreducible=" << r.is_irreducible
          << " distinct_eigenvalues=" << r.num_distinct_eigenvalues << '\n';
      detail::write_json(out_path, to_json(r));
      return r.is_dn ? kOk : kVerificationFailed;
    }

    if (*power) {
      const auto a = detail::load_matrix(file, tol);
      const auto p = fractional_power(spectral_decompose(a, tol), power_t, tol);
      detail::write_output(out_path, out, [&](std::ostream& o) { write_matrix(o, p, "A^" + format_full(power_t)); });
      return kOk;
    }

    if (*signchange) {
      const auto a = detail::load_matrix(file, tol);
      const auto dec = spectral_decompose(a, tol);
      const auto w = sign_change_matrix(dec, tol);
      const auto violations = validate_sign_change_matrix(w);
      const auto g = genericity(dec, tol);
      detail::write_output(out_path, out, [&](std::ostream& o) { write_sign_change_matrix(o, w); });
      out << "generic=" << g.generic() << " valid=" << violations.empty() << '\n';
      for (const auto& v : violations) out << "violation: " << v << '\n';
      return violations.empty() ? kOk : kVerificationFailed;
    }

    if (*enumerate) {
      std::size_t patterns = 0;
      if (emit_patterns) {
        detail::write_output(out_path, out, [&](std::ostream& o) {
          for_each_sign_pattern(n, [&](const SignPattern& p) {
            if (patterns++) o << '\n';
            write_sign_pattern(o, p);
          });
        });
      } else {
        for_each_sign_pattern(n, [&](const SignPattern&) { ++patterns; });
        const auto classes = enumerate_w_classes(n, threads);
        detail::write_output(out_path, out, [&](std::ostream& o) {
          for (std::size_t k = 0; k < classes.size(); ++k) {
            if (k) o << '\n';
            write_sign_change_matrix(o, classes[k]);
          }
        });
        out << "patterns=" << patterns << " classes=" << classes.size() << '\n';
        return kOk;
      }
      out << "patterns=" << patterns << '\n';
      return kOk;
    }

    if (*certify) {
      CertificateReport r;
      if (!w_file.empty()) {
        const auto ws = detail::load_w(w_file);
        r = certify_classes(ws.front().n, ws);
      } else {
        r = certify_dimension(n, threads);
      }
      out << "classes=" << r.num_classes << " certified_upper="
          << (r.certified_upper ? format_full(*r.certified_upper) : std::string("unbounded"))
          << " lower=" << format_full(r.lower) << " conclusion=" << detail::strip_spaces(r.conclusion) << '\n';
      detail::write_json(out_path, to_json(r));
      return r.certified() ? kOk : kVerificationFailed;
    }

    if (*witness) {
      const auto r = tridiagonal_witness(n, seed, std::optional<ScanConfig>{[&] {
                                           ScanConfig s = ScanConfig::for_dimension(n);
                                           s.step = scan.step;
                                           s.endpoint_tol = scan.endpoint_tol;
                                           s.entry_tol = scan.entry_tol;
                                           return s;
                                         }()},
                                         tol);
      out << "verified=" << r.verified() << " empirical_critexp=" << format_full(r.empirical_critexp);
      if (r.negative_window)
        out << " negative_window=(" << format_full(r.negative_window->first) << ","
            << format_full(r.negative_window->second) << ")";
      out << '\n';
      for (const auto& c : r.claims) out << (c.verified ? "  [ok]   " : "  [FAIL] ") << c.description << '\n';
      detail::write_json(out_path, to_json(r));
      if (!matrix_out.empty())
        detail::write_output(matrix_out, out, [&](std::ostream& o) { write_matrix(o, r.matrix, "tridiagonal witness"); });
      return r.verified() ? kOk : kVerificationFailed;
    }

    if (*scan_cmd) {
      const auto a = detail::load_matrix(file, tol);
      const int dim = static_cast<int>(a.size());
      ScanConfig s = ScanConfig::for_dimension(dim);
      s.step = scan.step;
      s.endpoint_tol = scan.endpoint_tol;
      s.entry_tol = scan.entry_tol;
      if (t_min) s.t_min = *t_min;
      if (t_max) s.t_max = *t_max;
      std::vector<std::pair<std::size_t, std::size_t>> picked;
      for (const auto& e : entries) picked.push_back(detail::parse_entry(e, a.size()));
      if (picked.empty())
        for (std::size_t i = 0; i < a.size(); ++i)
          for (std::size_t j = i; j < a.size(); ++j) picked.emplace_back(i, j);
      detail::write_output(out_path, out, [&](std::ostream& o) { emit_scan(o, a, s, picked, tol); });
      return kOk;
    }

    if (*search) {
      const auto family = parse_family(family_name);
      const auto s = search_critical_exponent(n, trials, seed, *family, threads, tol);
      out << "trials=" << s.trials << " family=" << to_string(s.family) << " max_found=" << format_full(s.max_found)
          << " argmax_distinct_eigenvalues=" << s.argmax_distinct_eigenvalues << '\n';
      for (const auto& [edge, count] : s.histogram) out << "  [" << edge << ", " << edge + 0.25 << "): " << count << '\n';
      detail::write_json(out_path, to_json(s));
      if (!matrix_out.empty())
        detail::write_output(matrix_out, out, [&](std::ostream& o) { write_matrix(o, s.argmax, "search argmax"); });
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace dncrit::cli
