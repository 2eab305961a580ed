#include <gtest/gtest.h>

#include <cmath>

#include "dncrit/experiments.hpp"
#include "dncrit/exppoly.hpp"
#include "dncrit/signchange.hpp"
#include "test_helpers.hpp"

using namespace dncrit;
using dncrit::testing::make_sym;

namespace {

ScanConfig scan_range(double lo, double hi, double step = 0.01) {
  ScanConfig s;
  s.t_min = lo;
  s.t_max = hi;
  s.step = step;
  return s;
}

/// Entries of A^t from an Eigen eigendecomposition, evaluated on a grid.
struct OracleGrid {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd u;

  explicit OracleGrid(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dncrit::testing::to_eigen(a));
    lambda = es.eigenvalues();
    u = es.eigenvectors();
  }

  // Value and the rounding scale: sum_k |u_ik u_jk| lambda_k^t, floored at
  // 1e-4 lambda_1^t so that structurally zero entries (reducible inputs),
  // which the solver only resolves to ~1e-17, do not count as sign changes.
  std::pair<double, double> entry(Eigen::Index i, Eigen::Index j, double t) const {
    double v = 0.0, s = 0.0;
    const double top = std::max(1.0, lambda.maxCoeff());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      if (lambda(k) <= 1e-10 * top) continue;
      const double term = u(i, k) * u(j, k) * std::pow(lambda(k), t);
      v += term;
      s += std::abs(term);
    }
    return {v, std::max(s, 1e-4 * std::pow(lambda.maxCoeff(), t))};
  }
};

}  // namespace

TEST(EntryExpPoly, TwoByTwo) {
  const auto dec = spectral_decompose(make_sym({{2, 1}, {1, 2}}));
  const auto p = entry_exppoly(dec, 0, 1);
  ASSERT_EQ(p.terms().size(), 2u);
  EXPECT_NEAR(p.terms()[0].base, 3.0, 1e-15);
  EXPECT_NEAR(p.terms()[0].coefficient, 0.5, 1e-15);
  EXPECT_NEAR(p.terms()[1].base, 1.0, 1e-15);
  EXPECT_NEAR(p.terms()[1].coefficient, -0.5, 1e-15);
  EXPECT_FALSE(p.singular());
  EXPECT_EQ(descartes_bound(p), 1);
}

TEST(EntryExpPoly, DiagonalCoefficientsNonnegative) {
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_dn(2 + trial % 5, 2 + trial % 5, static_cast<std::uint64_t>(trial));
    const auto dec = spectral_decompose(a);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto p = entry_exppoly(dec, i, i);
      for (const auto& t : p.terms()) EXPECT_GE(t.coefficient, 0.0);
      EXPECT_EQ(descartes_bound(p), 0);
    }
  }
}

TEST(EntryExpPoly, IdentityGivesZeroPolynomial) {
  const auto p = entry_exppoly(spectral_decompose(SymMatrix::identity(2)), 0, 1);
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_EQ(p.terms()[0].coefficient, 0.0);
  EXPECT_EQ(descartes_bound(p), 0);
}

TEST(EntryExpPoly, MergesRepeatedEigenvalues) {
  // J_3 + I: eigenvalues 4 (once) and 1 (twice); off-diagonal of the
  // projector onto 1^perp is -1/3.
  const auto a = SymMatrix::from(Matrix(3, 1.0) + Matrix::identity(3));
  const auto p = entry_exppoly(spectral_decompose(a), 0, 2);
  ASSERT_EQ(p.terms().size(), 2u);
  EXPECT_NEAR(p.terms()[0].coefficient, 1.0 / 3, 1e-14);
  EXPECT_NEAR(p.terms()[1].base, 1.0, 1e-14);
  EXPECT_NEAR(p.terms()[1].coefficient, -1.0 / 3, 1e-14);
}

TEST(EntryExpPoly, SingularDropsZeroBase) {
  const auto p = entry_exppoly(spectral_decompose(dncrit::testing::ones(3)), 0, 1);
  EXPECT_TRUE(p.singular());
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_NEAR(p.terms()[0].base, 3.0, 1e-14);
  EXPECT_NEAR(p.eval(0.0), 0.0, 1e-14);  // A^0 = I with 0^0 = 1
  EXPECT_NEAR(p.eval(2.0), 3.0, 1e-13);
  EXPECT_THROW(p.eval(-1.0), Error);
}

TEST(EntryExpPoly, IndexOutOfRange) {
  const auto dec = spectral_decompose(SymMatrix::identity(2));
  try {
    entry_exppoly(dec, 0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(DescartesBound, Examples) {
  EXPECT_EQ(descartes_bound(ExpPoly::from_terms({{3, 1}, {2, -2}, {1, 3}})), 2);
  EXPECT_EQ(descartes_bound(ExpPoly::from_terms({{3, 0.5}, {1, -0.5}})), 1);
  EXPECT_EQ(descartes_bound(ExpPoly::from_terms({{3, 1}, {2, 0}, {1, 1}})), 0);
  EXPECT_EQ(descartes_bound(ExpPoly::from_terms({{3, 1}, {2, -1e-20}, {1, 1}}, 1e-12)), 0);
}

TEST(EvalExpPoly, Examples) {
  const auto p = ExpPoly::from_terms({{3, 0.5}, {1, -0.5}});
  EXPECT_DOUBLE_EQ(eval_exppoly(p, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(eval_exppoly(p, 0.0), 0.0);
  EXPECT_NEAR(eval_exppoly(ExpPoly::from_terms({{3, 1.0 / 3}}), 2.0), 3.0, 1e-15);
}

TEST(NegativeIntervals, Examples) {
  const auto p = ExpPoly::from_terms({{3, 0.5}, {1, -0.5}});
  EXPECT_TRUE(negative_intervals(p, scan_range(0.01, 5)).intervals.empty());
  EXPECT_EQ(entry_critical_exponent(p, scan_range(0.01, 5)), 0.0);

  const auto dec = spectral_decompose(tridiagonal(4, 1.0, 2.0));
  const auto corner = entry_exppoly(dec, 0, 3);
  const auto neg = negative_intervals(corner, scan_range(0.01, 4));
  ASSERT_EQ(neg.intervals.size(), 1u);
  // (A^1)_14 = (A^2)_14 = 0 exactly, so the endpoints are the integers 1 and 2.
  EXPECT_NEAR(neg.intervals[0].first, 1.0, 1e-9);
  EXPECT_NEAR(neg.intervals[0].second, 2.0, 1e-9);
  EXPECT_LT(corner.eval(0.5 * (neg.intervals[0].first + neg.intervals[0].second)), 0.0);
  EXPECT_NEAR(entry_critical_exponent(corner, scan_range(0.01, 4)), 2.0, 1e-9);

  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(negative_intervals(entry_exppoly(dec, i, i), scan_range(0.01, 4)).intervals.empty());
    EXPECT_EQ(entry_critical_exponent(entry_exppoly(dec, i, i), scan_range(0.01, 4)), 0.0);
  }
}

TEST(NegativeIntervals, TwoComponentsFindsBothAndOrdersThem) {
  // Tridiagonal n = 6 corner entry: roots at 0..4, negative on (1,2) and (3,4).
  const auto dec = spectral_decompose(tridiagonal(6, 1.0, 2.5));
  const auto neg = negative_intervals(entry_exppoly(dec, 0, 5), scan_range(0.01, 8));
  ASSERT_EQ(neg.intervals.size(), 2u);
  EXPECT_NEAR(neg.intervals[0].first, 1.0, 1e-8);
  EXPECT_NEAR(neg.intervals[0].second, 2.0, 1e-8);
  EXPECT_NEAR(neg.intervals[1].first, 3.0, 1e-8);
  EXPECT_NEAR(neg.intervals[1].second, 4.0, 1e-8);
}

TEST(NegativeIntervals, RunTouchingScanEdgesUsesGridEndpoints) {
  const auto p = ExpPoly::from_terms({{2, 1}, {1, -4}});  // negative for t < 2
  const auto neg = negative_intervals(p, scan_range(0.5, 1.5, 0.1));
  ASSERT_EQ(neg.intervals.size(), 1u);
  EXPECT_DOUBLE_EQ(neg.intervals[0].first, 0.5);
  EXPECT_NEAR(neg.intervals[0].second, 1.5, 1e-12);
}

TEST(NegativeIntervals, RejectsBadScan) {
  const auto p = ExpPoly::from_terms({{2, 1}});
  EXPECT_THROW(negative_intervals(p, scan_range(1, 0.5)), Error);
  EXPECT_THROW(negative_intervals(p, scan_range(0, 1, 0.0)), Error);
}

TEST(ExpPolyProperties, ConsistencyAnchorAndDescartes) {
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 2 + trial % 5;
    const auto a = sample_dn(n, Family::mixed, static_cast<std::uint64_t>(trial));
    const auto dec = spectral_decompose(a);
    const bool invertible = check_dn(a).is_invertible;
    const OracleGrid oracle(a.matrix());
    const auto kmax = component_count_bound(n) + 2;
    for (double t : {0.3, 1.0, 1.7, 2.5, 4.0}) {
      const auto at = fractional_power(dec, t).matrix();
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
          EXPECT_NEAR(entry_exppoly(dec, i, j).eval(t), at(i, j), 1e-9 * std::max(1.0, at.max_abs()));
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        const auto p = entry_exppoly(dec, i, j);
        EXPECT_NEAR(p.eval(1.0), a(i, j), 1e-9 * std::max(1.0, a.matrix().max_abs()));
        if (invertible) {
          EXPECT_LE(std::abs(p.eval(0.0)), 1e-9);
        }

        // Sign alternations of the oracle's values on a 0.01 grid over (0, k(n)+2].
        int alternations = 0, last = 0;
        for (int k = 1; k * 0.01 <= kmax + 1e-9; ++k) {
          const auto [v, scale] = oracle.entry(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), k * 0.01);
          if (std::abs(v) <= 1e-9 * scale) continue;
          const int s = v > 0 ? 1 : -1;
          if (last != 0 && s != last) ++alternations;
          last = s;
        }
        EXPECT_LE(alternations, descartes_bound(p)) << "trial " << trial << " entry " << i << "," << j;
      }
  }
}
