#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dncrit/experiments.hpp"
#include "dncrit/matcore.hpp"
#include "test_helpers.hpp"

using namespace dncrit;
using dncrit::testing::make_sym;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected dncrit::Error";
  return ErrorCode::Malformed;
}

}  // namespace

TEST(ParseMatrix, ReadsSymmetricMatrix) {
  const auto a = parse_matrix("2\n2 1\n1 2");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a(0, 0), 2.0);
  EXPECT_EQ(a(0, 1), 1.0);
  EXPECT_EQ(a(1, 0), 1.0);
}

TEST(ParseMatrix, SkipsCommentsAndBlankLines) {
  const auto a = parse_matrix("# header\n\n3\n# mid\n1 0 0\n0 1 0\n0 0 1\n");
  EXPECT_EQ(a, SymMatrix::identity(3));
}

TEST(ParseMatrix, Errors) {
  EXPECT_EQ(code_of([] { parse_matrix("2\n1 2\n3 4"); }), ErrorCode::NotSymmetric);
  EXPECT_EQ(code_of([] { parse_matrix("2\n1 2"); }), ErrorCode::Malformed);
  EXPECT_EQ(code_of([] { parse_matrix("2\n1 x\n1 2"); }), ErrorCode::Malformed);
  EXPECT_EQ(code_of([] { parse_matrix("2\n1 2 3\n2 1"); }), ErrorCode::Malformed);
  EXPECT_EQ(code_of([] { parse_matrix(""); }), ErrorCode::Malformed);
  EXPECT_EQ(code_of([] { parse_matrix("1.5\n1"); }), ErrorCode::Malformed);
}

TEST(ParseMatrix, SymmetrizesTinyAsymmetry) {
  const auto a = parse_matrix("2\n1 0.5\n0.50000000000001 1");
  EXPECT_EQ(a(0, 1), a(1, 0));
  EXPECT_NEAR(a(0, 1), 0.500000000000005, 1e-16);
}

TEST(CheckDn, Examples) {
  auto r = check_dn(make_sym({{2, 1}, {1, 2}}));
  EXPECT_TRUE(r.is_dn);
  EXPECT_TRUE(r.is_invertible);
  EXPECT_TRUE(r.is_irreducible);
  EXPECT_EQ(r.num_distinct_eigenvalues, 2);

  r = check_dn(make_sym({{1, 2}, {2, 1}}));
  EXPECT_FALSE(r.is_psd);
  EXPECT_FALSE(r.is_dn);
  EXPECT_NEAR(r.min_eigenvalue, -1.0, 1e-14);

  r = check_dn(make_sym({{1, -1}, {-1, 1}}));
  EXPECT_TRUE(r.is_psd);
  EXPECT_FALSE(r.is_nonnegative);
  EXPECT_FALSE(r.is_invertible);
}

TEST(SpectralDecompose, Examples) {
  auto d = spectral_decompose(SymMatrix::identity(3));
  EXPECT_EQ(d.eigenvalues, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(d.eigenvectors, Matrix::identity(3));

  d = spectral_decompose(make_sym({{2, 1}, {1, 2}}));
  EXPECT_NEAR(d.eigenvalues[0], 3.0, 1e-15);
  EXPECT_NEAR(d.eigenvalues[1], 1.0, 1e-15);
  EXPECT_NEAR(d.eigenvectors(0, 0), std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(d.eigenvectors(1, 0), std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_GT(d.eigenvectors(0, 1), 0.0);  // sign convention

  d = spectral_decompose(dncrit::testing::ones(3));
  EXPECT_NEAR(d.eigenvalues[0], 3.0, 1e-14);
  EXPECT_NEAR(d.eigenvalues[1], 0.0, 1e-14);
  EXPECT_NEAR(d.eigenvalues[2], 0.0, 1e-14);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(d.eigenvectors(i, 0), 1.0 / std::sqrt(3.0), 1e-14);
}

TEST(SpectralDecompose, InvariantsOnRandomSymmetric) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto a = dncrit::testing::random_symmetric(n, rng);
    const auto d = spectral_decompose(a);
    const Matrix& u = d.eigenvectors;
    EXPECT_LE(max_abs_diff(u.transpose() * u, Matrix::identity(n)), 1e-12);
    const Matrix recon = u * Matrix::diagonal(d.eigenvalues) * u.transpose();
    EXPECT_LE(max_abs_diff(recon, a.matrix()), 1e-10 * a.matrix().max_abs());
    EXPECT_TRUE(std::is_sorted(d.eigenvalues.rbegin(), d.eigenvalues.rend()));

    // Independent oracle: Eigen's self-adjoint solver.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dncrit::testing::to_eigen(a.matrix()));
    for (std::size_t k = 0; k < n; ++k)
      EXPECT_NEAR(d.eigenvalues[k], es.eigenvalues()(static_cast<Eigen::Index>(n - 1 - k)), 1e-12);
  }
}

TEST(SpectralDecompose, NoConvergenceWhenSweepsExhausted) {
  Tolerances tol;
  tol.max_sweeps = 0;
  EXPECT_EQ(code_of([&] { spectral_decompose(make_sym({{2, 1}, {1, 2}}), tol); }), ErrorCode::NoConvergence);
}

TEST(FractionalPower, Examples) {
  const auto i3 = SymMatrix::identity(3);
  EXPECT_LE(max_abs_diff(fractional_power(i3, std::numbers::pi).matrix(), i3.matrix()), 1e-15);

  const auto a = make_sym({{2, 1}, {1, 2}});
  const auto sq = fractional_power(a, 2.0);
  EXPECT_NEAR(sq(0, 0), 5.0, 1e-13);
  EXPECT_NEAR(sq(0, 1), 4.0, 1e-13);

  const auto root = fractional_power(a, 0.5);
  EXPECT_NEAR(root(0, 0), (std::sqrt(3.0) + 1) / 2, 1e-14);
  EXPECT_NEAR(root(0, 1), (std::sqrt(3.0) - 1) / 2, 1e-14);
  EXPECT_NEAR(root(0, 0), 1.36603, 1e-5);

  const auto j = fractional_power(dncrit::testing::ones(3), 2.5);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(j(r, c), std::pow(3.0, 1.5), 1e-12);
}

TEST(FractionalPower, ZeroConventionsAndErrors) {
  const auto j = dncrit::testing::ones(2);
  const auto d = spectral_decompose(j);
  // 0^0 = 1: A^0 is the identity even for singular A.
  EXPECT_LE(max_abs_diff(fractional_power(d, 0.0).matrix(), Matrix::identity(2)), 1e-15);
  EXPECT_EQ(code_of([&] { fractional_power(d, -1.0); }), ErrorCode::ZeroToNegativePower);
  EXPECT_EQ(code_of([] { fractional_power(make_sym({{1, 2}, {2, 1}}), 0.5); }), ErrorCode::NegativeEigenvalue);
  // Inverse of an invertible matrix.
  const auto a = make_sym({{2, 1}, {1, 2}});
  EXPECT_LE(max_abs_diff(fractional_power(a, -1.0).matrix() * a.matrix(), Matrix::identity(2)), 1e-14);
}

TEST(FractionalPower, PropertiesOnRandomDn) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ts(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    const auto a = random_dn(n, 1 + trial % n, 1000 + trial);
    const auto d = spectral_decompose(a);

    // Identity power.
    EXPECT_LE(max_abs_diff(fractional_power(d, 1.0).matrix(), a.matrix()), 1e-10 * a.matrix().max_abs());

    const double t = ts(rng), s = ts(rng);
    const auto at = fractional_power(d, t).matrix(), as = fractional_power(d, s).matrix();
    const auto ats = fractional_power(d, t + s).matrix();
    EXPECT_LE(max_abs_diff(at * as, ats), 1e-8 * ats.max_abs()) << "n=" << n << " t=" << t << " s=" << s;

    // PSD preservation and agreement with the Eigen oracle.
    const auto dt = spectral_decompose(SymMatrix::from(at));
    EXPECT_GE(dt.eigenvalues.back(), -1e-9 * at.max_abs());
    const auto oracle = dncrit::testing::oracle_power(a.matrix(), t);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(at(i, j), oracle(i, j), 1e-9 * at.max_abs());

    // Integer powers agree with repeated multiplication.
    EXPECT_LE(max_abs_diff(fractional_power(d, 3.0).matrix(), integer_power(a.matrix(), 3)),
              1e-11 * integer_power(a.matrix(), 3).max_abs());
  }
}

TEST(IsIrreducible, Examples) {
  EXPECT_TRUE(is_irreducible(tridiagonal(4, 1.0, 2.0)));
  EXPECT_FALSE(is_irreducible(dncrit::testing::diag({1, 2})));
  EXPECT_TRUE(is_irreducible(dncrit::testing::ones(3)));
  EXPECT_TRUE(is_irreducible(SymMatrix::identity(1)));
  EXPECT_FALSE(is_irreducible(make_sym({{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}})));
}

TEST(PrimitivityIndex, Examples) {
  EXPECT_EQ(primitivity_index(dncrit::testing::ones(3)), 1);
  EXPECT_EQ(primitivity_index(tridiagonal(4, 1.0, 2.0)), 3);
  EXPECT_EQ(code_of([] { primitivity_index(dncrit::testing::diag({1, 2})); }), ErrorCode::NotIrreducible);
  EXPECT_EQ(code_of([] { primitivity_index(make_sym({{1, 2}, {2, 1}})); }), ErrorCode::NotDn);
}

TEST(PrimitivityIndex, AtMostNMinusOneAndMatchesNumericPowers) {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    Rng rng(trial);
    const auto a = trial % 2 ? random_tridiagonal(n, rng) : random_dn(n, n, static_cast<std::uint64_t>(trial));
    if (!is_irreducible(a)) continue;
    const int k = primitivity_index(a);
    EXPECT_LE(k, n - 1);
    // Oracle: first numeric integer power with every entry positive.
    int oracle = 1;
    Matrix p = a.matrix();
    while (p.min_entry() <= 0.0) {
      p = p * a.matrix();
      ++oracle;
    }
    EXPECT_EQ(k, oracle);
  }
}
