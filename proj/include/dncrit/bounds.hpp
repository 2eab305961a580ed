#pragma once

namespace dncrit {

/// Maximum number of negative components a single column of A^t can have on
/// t > 1: (n^2 - 4n + 3)/2 for odd n, (n^2 - 5n + 6)/2 for even n.
constexpr double component_count_bound(int n) {
  return n % 2 != 0 ? (n * n - 4.0 * n + 3.0) / 2.0 : (n * n - 5.0 * n + 6.0) / 2.0;
}

/// Quadratic upper bound on the critical exponent, component_count_bound(n) + 1.
constexpr double crude_bound(int n) {
  return n % 2 != 0 ? (n * n - 4.0 * n + 5.0) / 2.0 : (n * n - 5.0 * n + 8.0) / 2.0;
}

/// Tridiagonal matrices force the critical exponent to be at least n - 2.
constexpr double lower_bound(int n) { return n - 2.0; }

}  // namespace dncrit
