#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "dncrit/error.hpp"
#include "dncrit/signchange.hpp"

namespace dncrit {

inline constexpr int kMaxEnumerationDim = 6;
inline constexpr int kMaxCanonicalDim = 8;

/// Sign pattern of an eigenvector matrix U, columns ordered by decreasing
/// eigenvalue. Row i is a bit mask: bit k set means s[i][k] = -1.
struct SignPattern {
  int n = 0;
  std::vector<std::uint32_t> rows;

  int sign(int i, int k) const { return (rows[static_cast<std::size_t>(i)] >> k) & 1U ? -1 : 1; }

  friend bool operator==(const SignPattern&, const SignPattern&) = default;
};

namespace detail {

inline bool distinct_rows(const std::vector<std::uint32_t>& rows) {
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b)
      if (rows[a] == rows[b]) return false;
  return true;
}

inline bool distinct_columns(int n, const std::vector<std::uint32_t>& rows) {
  std::vector<std::uint32_t> cols(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if ((rows[static_cast<std::size_t>(i)] >> k) & 1U) cols[static_cast<std::size_t>(k)] |= 1U << i;
  return distinct_rows(cols);
}

inline void check_enumeration_dim(int n) {
  if (n < 1) throw Error(ErrorCode::DimensionTooSmall, "dimension must be at least 1");
  if (n > kMaxEnumerationDim)
    throw Error(ErrorCode::DimensionTooLarge, "enumeration is capped at n = " + std::to_string(kMaxEnumerationDim));
}

}  // namespace detail

/// Streams every admissible pattern exactly once: first row and first column
/// all +1, rows pairwise distinct, columns pairwise distinct. The free
/// (n-1)x(n-1) block counts in binary, row-major, most significant cell first,
/// +1 before -1.
class SignPatternEnumerator {
 public:
  explicit SignPatternEnumerator(int n) : n_(n) {
    detail::check_enumeration_dim(n);
    free_ = static_cast<unsigned>((n - 1) * (n - 1));
    end_ = std::uint64_t{1} << free_;
  }

  std::optional<SignPattern> next() {
    while (counter_ < end_) {
      SignPattern p = decode(counter_++);
      if (detail::distinct_rows(p.rows) && detail::distinct_columns(n_, p.rows)) return p;
    }
    return std::nullopt;
  }

 private:
  SignPattern decode(std::uint64_t c) const {
    SignPattern p{n_, std::vector<std::uint32_t>(static_cast<std::size_t>(n_), 0)};
    const int m = n_ - 1;
    for (int idx = 0; idx < m * m; ++idx) {
      if ((c >> (free_ - 1 - static_cast<unsigned>(idx))) & 1U)
        p.rows[static_cast<std::size_t>(idx / m + 1)] |= 1U << (idx % m + 1);
    }
    return p;
  }

  int n_;
  unsigned free_ = 0;
  std::uint64_t counter_ = 0;
  std::uint64_t end_ = 0;
};

template <class Visitor>
void for_each_sign_pattern(int n, Visitor&& visit) {
  SignPatternEnumerator e(n);
  while (auto p = e.next()) visit(*p);
}

inline std::vector<SignPattern> enumerate_sign_patterns(int n) {
  std::vector<SignPattern> out;
  for_each_sign_pattern(n, [&](const SignPattern& p) { out.push_back(p); });
  return out;
}

/// w_ij = sign changes of the Hadamard product of rows i and j.
inline SignChangeMatrix pattern_to_w(const SignPattern& p) {
  const int n = p.n;
  const std::uint32_t inner = n > 1 ? (1U << (n - 1)) - 1U : 0U;
  SignChangeMatrix w(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::uint32_t prod = p.rows[static_cast<std::size_t>(i)] ^ p.rows[static_cast<std::size_t>(j)];
      w(i, j) = w(j, i) = std::popcount((prod ^ (prod >> 1)) & inner);
    }
  return w;
}

/// Lexicographically smallest row-major flattening of P W P^T over all
/// permutations P.
inline SignChangeMatrix canonicalize_w(const SignChangeMatrix& w) {
  const int n = w.n;
  if (n > kMaxCanonicalDim)
    throw Error(ErrorCode::DimensionTooLarge, "canonical form is capped at n = " + std::to_string(kMaxCanonicalDim));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  SignChangeMatrix best = w;
  do {
    // Early exit on the first entry that is larger than the incumbent.
    bool smaller = false;
    bool larger = false;
    for (int i = 0; i < n && !smaller && !larger; ++i)
      for (int j = 0; j < n; ++j) {
        const int v = w(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        if (v < best(i, j)) { smaller = true; break; }
        if (v > best(i, j)) { larger = true; break; }
      }
    if (smaller)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          best(i, j) = w(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace detail {

inline std::uint64_t pack_w(const SignChangeMatrix& w) {
  // Upper triangle, 3 bits per entry (entries <= 5 for n <= 6).
  std::uint64_t key = 0;
  for (int i = 0; i < w.n; ++i)
    for (int j = i + 1; j < w.n; ++j) key = (key << 3U) | static_cast<std::uint64_t>(w(i, j));
  return key;
}

inline unsigned resolve_threads(unsigned threads) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  return threads;
}

template <class Work>
void run_partitioned(std::size_t count, unsigned threads, Work&& work) {
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    work(0, 0, count);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = count * t / threads, hi = count * (t + 1) / threads;
    pool.emplace_back([&work, t, lo, hi] { work(t, lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Canonical W classes over all admissible sign patterns, sorted.
///
/// Permuting rows 2..n of a pattern keeps it admissible and permutes W by a
/// similarity, so only patterns whose rows 2..n are increasing bit masks are
/// visited. enumerate_w_classes_exhaustive walks the full pattern stream.
inline std::vector<SignChangeMatrix> enumerate_w_classes(int n, unsigned threads = 0) {
  detail::check_enumeration_dim(n);
  if (n == 1) return {SignChangeMatrix(1)};

  // Row 0 is all +1 (mask 0). Rows 1..n-1 are distinct nonzero masks with bit 0 clear.
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t m = 1; m < (1U << n); ++m)
    if ((m & 1U) == 0) candidates.push_back(m);

  std::vector<std::vector<std::uint32_t>> selections;
  std::vector<std::uint32_t> chosen;
  auto choose = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(chosen.size()) == n - 1) {
      selections.push_back(chosen);
      return;
    }
    for (std::size_t k = start; k < candidates.size(); ++k) {
      chosen.push_back(candidates[k]);
      self(self, k + 1);
      chosen.pop_back();
    }
  };
  choose(choose, 0);

  const unsigned workers = detail::resolve_threads(threads);
  std::vector<std::set<SignChangeMatrix>> partial(workers);
  detail::run_partitioned(selections.size(), workers, [&](unsigned t, std::size_t lo, std::size_t hi) {
    std::unordered_set<std::uint64_t> seen;
    for (std::size_t s = lo; s < hi; ++s) {
      SignPattern p{n, {0U}};
      p.rows.insert(p.rows.end(), selections[s].begin(), selections[s].end());
      if (!detail::distinct_columns(n, p.rows)) continue;
      const SignChangeMatrix w = pattern_to_w(p);
      if (!seen.insert(detail::pack_w(w)).second) continue;
      partial[t].insert(canonicalize_w(w));
    }
  });
  std::set<SignChangeMatrix> merged;
  for (auto& s : partial) merged.insert(s.begin(), s.end());
  return {merged.begin(), merged.end()};
}

/// Same result as enumerate_w_classes, computed from every pattern of the
/// full stream. Intended as a cross-check.
inline std::vector<SignChangeMatrix> enumerate_w_classes_exhaustive(int n) {
  std::set<SignChangeMatrix> classes;
  std::unordered_set<std::uint64_t> seen;
  for_each_sign_pattern(n, [&](const SignPattern& p) {
    const SignChangeMatrix w = pattern_to_w(p);
    if (seen.insert(detail::pack_w(w)).second) classes.insert(canonicalize_w(w));
  });
  return {classes.begin(), classes.end()};
}

/// Rows of '+'/'-' characters, one pattern per block.
inline void write_sign_pattern(std::ostream& out, const SignPattern& p) {
  for (int i = 0; i < p.n; ++i) {
    for (int k = 0; k < p.n; ++k) out << (p.sign(i, k) > 0 ? '+' : '-');
    out << '\n';
  }
}

}  // namespace dncrit
