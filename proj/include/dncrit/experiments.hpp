#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dncrit/bounds.hpp"
#include "dncrit/enumerate.hpp"
#include "dncrit/error.hpp"
#include "dncrit/exppoly.hpp"
#include "dncrit/matcore.hpp"
#include "dncrit/signchange.hpp"

namespace dncrit {

// ---------------------------------------------------------------------------
// Deterministic randomness.

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return mix_seed(mix_seed(seed) ^ (index + 1) * 0xD1B54A32D192ED03ULL);
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// ---------------------------------------------------------------------------
// Generators.

/// B B^T with B an n x rank matrix of entries drawn by `draw`.
template <class Draw>
SymMatrix gram(std::size_t n, std::size_t rank, Draw&& draw) {
  std::vector<double> b(n * rank);
  for (double& x : b) x = draw();
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < rank; ++k) s += b[i * rank + k] * b[j * rank + k];
      a(i, j) = a(j, i) = s;
    }
  return SymMatrix::from(a, 0.0);
}

/// B B^T with B uniform in [0, 1]^(n x rank); doubly nonnegative by construction.
inline SymMatrix random_dn(int n, int rank, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::DimensionTooSmall, "n must be positive");
  if (rank < 1 || rank > n) throw Error(ErrorCode::BadRank, "rank must lie in [1, n]");
  Rng rng(seed);
  return gram(static_cast<std::size_t>(n), static_cast<std::size_t>(rank), [&] { return uniform(rng, 0.0, 1.0); });
}

/// Irreducible, strictly diagonally dominant tridiagonal matrix: off-diagonals
/// in [0.5, 1.5], diagonal = adjacent off-diagonal sum + [0.1, 1].
inline SymMatrix random_tridiagonal(int n, Rng& rng) {
  const auto sn = static_cast<std::size_t>(n);
  Matrix a(sn);
  for (std::size_t i = 0; i + 1 < sn; ++i) a(i, i + 1) = a(i + 1, i) = uniform(rng, 0.5, 1.5);
  for (std::size_t i = 0; i < sn; ++i) {
    double s = 0.0;
    if (i > 0) s += a(i, i - 1);
    if (i + 1 < sn) s += a(i, i + 1);
    a(i, i) = s + uniform(rng, 0.1, 1.0);
  }
  return SymMatrix::from(a, 0.0);
}

/// Path-graph matrix with constant diagonal and off-diagonal.
inline SymMatrix tridiagonal(int n, double off, double diag) {
  const auto sn = static_cast<std::size_t>(n);
  Matrix a(sn);
  for (std::size_t i = 0; i < sn; ++i) {
    a(i, i) = diag;
    if (i + 1 < sn) a(i, i + 1) = a(i + 1, i) = off;
  }
  return SymMatrix::from(a, 0.0);
}

enum class Family { gram, tridiagonal, mixed };

inline std::optional<Family> parse_family(const std::string& s) {
  if (s == "gram") return Family::gram;
  if (s == "tridiagonal") return Family::tridiagonal;
  if (s == "mixed") return Family::mixed;
  return std::nullopt;
}

inline std::string to_string(Family f) {
  switch (f) {
    case Family::gram: return "gram";
    case Family::tridiagonal: return "tridiagonal";
    case Family::mixed: return "mixed";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Matrices with at most three distinct eigenvalues.

enum class ThreeEigenvalueKind { cycle4, cycle5, custom };

/// a I + b P + c J, where P projects onto block-constant vectors of a
/// partition of {1..n}. Eigenvalues: a + b + c n (on 1), a + b (rest of range P),
/// a (kernel of P). Entries: a + b/|B| + c on the diagonal, b/|B| + c within a
/// block, c across blocks.
struct ThreeEigenvalueParams {
  std::vector<int> blocks{2, 2};
  double a = 1.0;
  double b = 0.5;
  double c = 0.25;
};

inline SymMatrix cycle_plus_2i(int k) {
  const auto sk = static_cast<std::size_t>(k);
  Matrix m(sk);
  for (std::size_t i = 0; i < sk; ++i) {
    m(i, i) = 2.0;
    m(i, (i + 1) % sk) = 1.0;
    m((i + 1) % sk, i) = 1.0;
  }
  return SymMatrix::from(m, 0.0);
}

inline SymMatrix three_eigenvalue_matrix(ThreeEigenvalueKind kind, const ThreeEigenvalueParams& params = {},
                                         const Tolerances& tol = {}) {
  if (kind == ThreeEigenvalueKind::cycle4) return cycle_plus_2i(4);
  if (kind == ThreeEigenvalueKind::cycle5) return cycle_plus_2i(5);

  std::size_t n = 0;
  for (int s : params.blocks) {
    if (s < 1) throw Error(ErrorCode::Malformed, "block sizes must be positive");
    n += static_cast<std::size_t>(s);
  }
  if (n == 0) throw Error(ErrorCode::Malformed, "empty partition");
  std::vector<std::size_t> block_of, block_size;
  for (std::size_t b = 0; b < params.blocks.size(); ++b)
    for (int k = 0; k < params.blocks[b]; ++k) {
      block_of.push_back(b);
      block_size.push_back(static_cast<std::size_t>(params.blocks[b]));
    }
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double v = params.c;
      if (block_of[i] == block_of[j]) v += params.b / static_cast<double>(block_size[i]);
      if (i == j) v += params.a;
      m(i, j) = v;
    }
  SymMatrix a = SymMatrix::from(m, tol.sym);
  const auto dec = spectral_decompose(a, tol);
  if (count_distinct_eigenvalues(dec, tol) > 3)
    throw Error(ErrorCode::TooManyEigenvalues, "construction has more than three distinct eigenvalues");
  const auto dn = check_dn(a, tol);
  if (!dn.is_dn) throw Error(ErrorCode::NotDn, "construction is not doubly nonnegative");
  return a;
}

/// Random DN parameters for three_eigenvalue_matrix(custom). b may be negative
/// (down to -a), with c raised enough to keep every entry nonnegative.
inline ThreeEigenvalueParams random_three_eigenvalue_params(std::uint64_t seed) {
  Rng rng(seed);
  ThreeEigenvalueParams p;
  const int n = uniform_int(rng, 3, 6);
  p.blocks.clear();
  int left = n;
  while (left > 0) {
    const int s = uniform_int(rng, 1, left);
    p.blocks.push_back(s);
    left -= s;
  }
  const int smallest = *std::min_element(p.blocks.begin(), p.blocks.end());
  p.a = uniform(rng, 0.1, 2.0);
  p.b = uniform(rng, -p.a, 2.0);
  p.c = std::max(0.0, -p.b / smallest) + uniform(rng, 0.0, 1.0);
  return p;
}

// ---------------------------------------------------------------------------
// Reports.

struct Claim {
  std::string description;
  bool verified = false;
};

struct WitnessReport {
  SymMatrix matrix;
  std::vector<Claim> claims;
  std::optional<std::pair<double, double>> negative_window;
  double min_value = 0.0;
  double argmin_t = 0.0;
  double empirical_critexp = 0.0;
  ScanConfig scan;

  bool verified() const {
    return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.verified; });
  }
};

struct PerturbationReport {
  double epsilon = 0.0;
  int truncation = 0;
  std::pair<double, double> verified_range{0.0, 0.0};
  bool pass = false;
  double min_value = 0.0;  // smallest entry of (eps A + I)^t relative to its largest entry
  double argmin_t = 0.0;
  double series_residual = 0.0;  // truncated binomial series vs spectral power at the first grid t
  ScanConfig scan;
};

// ---------------------------------------------------------------------------
// Empirical critical exponents.

/// Largest entry critical exponent of A over the scan.
inline double empirical_critical_exponent(const SpectralDecomposition& dec, const ScanConfig& scan,
                                          const Tolerances& tol = {}) {
  double m = 0.0;
  for (std::size_t i = 0; i < dec.size(); ++i)
    for (std::size_t j = i + 1; j < dec.size(); ++j)
      m = std::max(m, entry_critical_exponent(entry_exppoly(dec, i, j, tol), scan));
  return m;
}

inline double empirical_critical_exponent(const SymMatrix& a, const ScanConfig& scan, const Tolerances& tol = {}) {
  return empirical_critical_exponent(spectral_decompose(a, tol), scan, tol);
}

// ---------------------------------------------------------------------------
// Lower-bound witness.

/// Random tridiagonal DN matrix whose (1, n) entry of A^t is negative on
/// (n-3, n-2) and nonnegative from n-2 on.
inline WitnessReport tridiagonal_witness(int n, std::uint64_t seed, std::optional<ScanConfig> scan_override = {},
                                         const Tolerances& tol = {}) {
  if (n < 3) throw Error(ErrorCode::DimensionTooSmall, "tridiagonal witness needs n >= 3");
  Rng rng(seed);
  WitnessReport r;
  r.matrix = random_tridiagonal(n, rng);
  r.scan = scan_override.value_or(ScanConfig::for_dimension(n));
  r.scan.validate();

  const auto dec = spectral_decompose(r.matrix, tol);
  const auto corner = entry_exppoly(dec, 0, static_cast<std::size_t>(n - 1), tol);
  const double lo = n - 3.0, hi = n - 2.0;
  auto threshold = [&](double t) { return r.scan.entry_tol * corner.magnitude(t); };

  const double mid_t = n - 2.5;
  const double mid_value = corner.eval(mid_t);
  r.claims.push_back({"(A^t)_1n < 0 at t = n - 2.5", mid_value < -threshold(mid_t)});

  bool tail_ok = true;
  r.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r.scan.grid_size(); ++k) {
    const double t = r.scan.grid_point(k);
    const double v = corner.eval(t);
    if (v < r.min_value) {
      r.min_value = v;
      r.argmin_t = t;
    }
    if (t >= hi - 1e-12 && v < -threshold(t)) tail_ok = false;
  }
  r.claims.push_back({"(A^t)_1n >= -tol for all grid t >= n - 2", tail_ok});

  const auto neg = negative_intervals(corner, r.scan);
  for (const auto& iv : neg.intervals)
    if (iv.first <= mid_t && mid_t <= iv.second) r.negative_window = iv;
  const double slack = 1e-6;
  r.claims.push_back({"negative window around n - 2.5 lies within (n - 3, n - 2)",
                      r.negative_window && r.negative_window->first >= lo - slack &&
                          r.negative_window->second <= hi + slack});
  r.empirical_critexp = entry_critical_exponent(corner, r.scan);
  r.claims.push_back({"entry critical exponent of (1, n) equals n - 2",
                      std::abs(r.empirical_critexp - hi) <= slack});
  return r;
}

// ---------------------------------------------------------------------------
// Checks for the additional theorems.

namespace detail {

inline void require_dn(const SymMatrix& a, const Tolerances& tol) {
  if (!check_dn(a, tol).is_dn) throw Error(ErrorCode::NotDn, "matrix is not doubly nonnegative");
}

}  // namespace detail

/// A DN matrix with at most three distinct eigenvalues has A^t DN for t >= 1.
inline WitnessReport check_three_eigenvalue_theorem(const SymMatrix& a, ScanConfig scan, const Tolerances& tol = {}) {
  scan.validate();
  detail::require_dn(a, tol);
  const auto dec = spectral_decompose(a, tol);
  if (count_distinct_eigenvalues(dec, tol) > 3)
    throw Error(ErrorCode::TooManyEigenvalues, "matrix has more than three distinct eigenvalues");
  scan.t_min = std::max(scan.t_min, 1.0);

  WitnessReport r;
  r.matrix = a;
  r.scan = scan;
  r.min_value = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t k = 0; k < scan.grid_size(); ++k) {
    const double t = scan.grid_point(k);
    const auto p = fractional_power(dec, t, tol);
    const double m = p.matrix().min_entry();
    if (m < r.min_value) {
      r.min_value = m;
      r.argmin_t = t;
    }
    if (m < -scan.entry_tol * p.matrix().max_abs()) ok = false;
  }
  r.claims.push_back({"min entry of A^t >= -tol for all grid t in [1, t_max]", ok});
  r.empirical_critexp = empirical_critical_exponent(dec, ScanConfig{0.01, scan.t_max, scan.step, scan.endpoint_tol, scan.entry_tol}, tol);
  r.claims.push_back({"empirical critical exponent <= 1", r.empirical_critexp <= 1.0 + 1e-6});
  return r;
}

/// B = A + r x_1 x_1^T satisfies B^t >= A^t entry-wise.
inline WitnessReport check_monotonicity(const SymMatrix& a, double r_shift, const ScanConfig& scan,
                                        const Tolerances& tol = {}) {
  scan.validate();
  if (r_shift < 0.0) throw Error(ErrorCode::Malformed, "shift r must be nonnegative");
  detail::require_dn(a, tol);
  const auto dec = spectral_decompose(a, tol);
  if (dec.size() > 1 && dec.eigenvalues[0] - dec.eigenvalues[1] <= tol.merge * dec.scale())
    throw Error(ErrorCode::RepeatedTopEigenvalue, "largest eigenvalue is not simple");

  const std::size_t n = a.size();
  Matrix shift(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) shift(i, j) = r_shift * dec.eigenvectors(i, 0) * dec.eigenvectors(j, 0);
  const SymMatrix b = SymMatrix::from(a.matrix() + shift, tol.sym);
  const auto dec_b = spectral_decompose(b, tol);

  WitnessReport r;
  r.matrix = b;
  r.scan = scan;
  r.min_value = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t k = 0; k < scan.grid_size(); ++k) {
    const double t = scan.grid_point(k);
    const Matrix pb = fractional_power(dec_b, t, tol).matrix();
    const Matrix diff = pb - fractional_power(dec, t, tol).matrix();
    const double m = diff.min_entry();
    if (m < r.min_value) {
      r.min_value = m;
      r.argmin_t = t;
    }
    if (m < -scan.entry_tol * pb.max_abs()) ok = false;
  }
  r.claims.push_back({"B^t - A^t >= -tol entry-wise on the grid", ok});
  return r;
}

/// Generalized binomial coefficient t (t-1) ... (t-k+1) / k!.
inline double binomial_coefficient(double t, int k) {
  double c = 1.0;
  for (int m = 0; m < k; ++m) c *= (t - m) / (m + 1);
  return c;
}

/// (eps A + I)^t is DN for t >= n - 2 with eps = min_ij (A^{n-1})_ij / (A^n)_ij.
inline PerturbationReport check_perturbation(const SymMatrix& a, const ScanConfig& scan, const Tolerances& tol = {},
                                             int truncation = 60) {
  scan.validate();
  if (!is_irreducible(a)) throw Error(ErrorCode::NotIrreducible, "matrix is reducible");
  detail::require_dn(a, tol);
  const std::size_t n = a.size();

  const Matrix lower_power = integer_power(a.matrix(), static_cast<unsigned>(n - 1));
  const Matrix upper_power = lower_power * a.matrix();
  double eps = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lower_power.data().size(); ++k) {
    const double num = lower_power.data()[k], den = upper_power.data()[k];
    if (!(num > 0.0) || !(den > 0.0)) throw Error(ErrorCode::NotIrreducible, "matrix is not primitive");
    eps = std::min(eps, num / den);
  }

  PerturbationReport r;
  r.epsilon = eps;
  r.truncation = truncation;
  r.scan = scan;
  const double t_lo = std::max(0.0, static_cast<double>(n) - 2.0);
  r.verified_range = {t_lo, scan.t_max};

  const SymMatrix shifted = SymMatrix::from(eps * a.matrix() + Matrix::identity(n), tol.sym);
  const auto dec = spectral_decompose(shifted, tol);

  ScanConfig grid = scan;
  grid.t_min = t_lo;
  r.pass = grid.t_min < grid.t_max;
  r.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; r.pass && k < grid.grid_size(); ++k) {
    const double t = grid.grid_point(k);
    const Matrix p = fractional_power(dec, t, tol).matrix();
    const double rel = p.min_entry() / p.max_abs();
    if (rel < r.min_value) {
      r.min_value = rel;
      r.argmin_t = t;
    }
  }
  r.pass = r.pass && r.min_value >= -scan.entry_tol;

  // Diagnostic only: the binomial series converges slowly when eps * lambda_1 is near 1.
  const double t_probe = grid.t_min;
  const Matrix scaled = eps * a.matrix();
  Matrix term = Matrix::identity(n), sum(n);
  for (int k = 0; k <= truncation; ++k) {
    sum += binomial_coefficient(t_probe, k) * term;
    term = term * scaled;
  }
  r.series_residual = max_abs_diff(sum, fractional_power(dec, t_probe, tol).matrix());
  return r;
}

// ---------------------------------------------------------------------------
// Random search.

/// Random DN matrix from a family. "gram" mixes full-rank, low-rank, sparse and
/// heavy-tailed Gram matrices; "mixed" adds tridiagonal and three-eigenvalue
/// constructions.
inline SymMatrix sample_dn(int n, Family family, std::uint64_t seed) {
  Rng rng(seed);
  const auto sn = static_cast<std::size_t>(n);
  auto sample_gram = [&] {
    const int rank = uniform_int(rng, 1, n);
    const int style = uniform_int(rng, 0, 3);
    return gram(sn, static_cast<std::size_t>(rank), [&] {
      const double u = uniform(rng, 0.0, 1.0);
      switch (style) {
        case 1: return u * u * u * u;
        case 2: return uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : u;
        default: return u;
      }
    });
  };
  switch (family) {
    case Family::gram: return sample_gram();
    case Family::tridiagonal: return random_tridiagonal(n, rng);
    case Family::mixed: {
      const int pick = uniform_int(rng, 0, 5);
      if (pick == 0 && n >= 1) return random_tridiagonal(n, rng);
      return sample_gram();
    }
  }
  return sample_gram();
}

/// Invertible DN matrix with well-separated eigenvalues and eigenvector entries
/// bounded away from zero, so that its W is a sound certificate input.
inline SymMatrix random_generic_dn(int n, std::uint64_t seed, double min_eigvec_entry = 1e-3,
                                   const Tolerances& tol = {}) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(trial_seed(seed, attempt));
    const int style = uniform_int(rng, 0, 2);
    const SymMatrix a = gram(static_cast<std::size_t>(n), static_cast<std::size_t>(n), [&] {
      const double u = uniform(rng, 0.0, 1.0);
      return style == 1 ? u * u * u : style == 2 ? (uniform(rng, 0.0, 1.0) < 0.3 ? 0.0 : u) : u;
    });
    const auto dec = spectral_decompose(a, tol);
    const auto g = genericity(dec, tol, min_eigvec_entry);
    if (!g.generic() || dec.eigenvalues.back() < 1e-6 * dec.scale()) continue;
    bool separated = true;
    for (std::size_t k = 0; k + 1 < dec.size(); ++k)
      separated = separated && dec.eigenvalues[k] - dec.eigenvalues[k + 1] > 1e-6 * dec.scale();
    if (separated) return a;
  }
}

struct SearchSummary {
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  Family family = Family::mixed;
  double max_found = 0.0;
  SymMatrix argmax;
  int argmax_distinct_eigenvalues = 0;
  std::map<double, int> histogram;  // lower edge of 0.25-wide bins -> count
  ScanConfig scan;
};

inline SearchSummary search_critical_exponent(int n, int trials, std::uint64_t seed, Family family,
                                              unsigned threads = 0, const Tolerances& tol = {}) {
  if (n < 1) throw Error(ErrorCode::DimensionTooSmall, "n must be positive");
  if (n > kMaxEnumerationDim) throw Error(ErrorCode::DimensionTooLarge, "search is capped at n = 6");
  SearchSummary s;
  s.n = n;
  s.trials = trials;
  s.seed = seed;
  s.family = family;
  s.scan = ScanConfig::for_dimension(n);

  std::vector<double> found(static_cast<std::size_t>(std::max(trials, 0)));
  detail::run_partitioned(found.size(), threads, [&](unsigned, std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k)
      found[k] = empirical_critical_exponent(sample_dn(n, family, trial_seed(seed, k)), s.scan, tol);
  });

  std::size_t best = 0;
  for (std::size_t k = 0; k < found.size(); ++k) {
    if (found[k] > found[best]) best = k;
    s.histogram[std::floor(found[k] * 4.0) / 4.0] += 1;
  }
  if (!found.empty()) {
    s.max_found = found[best];
    s.argmax = sample_dn(n, family, trial_seed(seed, best));
    s.argmax_distinct_eigenvalues = count_distinct_eigenvalues(spectral_decompose(s.argmax, tol), tol);
  }
  return s;
}

}  // namespace dncrit
