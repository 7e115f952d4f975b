#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "spud/errors.hpp"
#include "spud/matrix.hpp"
#include "spud/random.hpp"

using spud::Matrix;

namespace {

double rel_diff(const Matrix& a, const Matrix& b) {
  return spud::frobenius_norm(a - b) / std::max(1.0, spud::frobenius_norm(b));
}

}  // namespace

TEST(Matrix, RejectsNonFiniteEntries) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Matrix(2, 2, nan), spud::InvalidArgument);
  EXPECT_THROW(Matrix(1, 2, std::vector<double>{1.0, inf}), spud::InvalidArgument);
  EXPECT_THROW((Matrix{{1.0, nan}}), spud::InvalidArgument);
}

TEST(Matrix, RejectsMismatchedDataLength) {
  EXPECT_THROW(Matrix(2, 3, std::vector<double>(5)), spud::InvalidArgument);
  EXPECT_THROW((Matrix{{1.0, 2.0}, {3.0}}), spud::InvalidArgument);
}

TEST(Matrix, RowMajorLayout) {
  const Matrix m{{1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m.data()[3], 4.0);
  EXPECT_EQ(m.col(1), (std::vector<double>{2, 5}));
  EXPECT_EQ(m.transpose(), (Matrix{{1, 4}, {2, 5}, {3, 6}}));
}

TEST(Matmul, IdentityIsNeutral) {
  const Matrix m{{1, -2, 3}, {0.5, 4, -1}, {7, 0, 2}};
  EXPECT_EQ(spud::matmul(Matrix::identity(3), m), m);
}

TEST(Matmul, HandExample) {
  EXPECT_EQ(spud::matmul(Matrix{{1, 2}, {3, 4}}, Matrix{{0}, {1}}), (Matrix{{2}, {4}}));
}

TEST(Matmul, MatchesTripleLoop) {
  const Matrix a = spud::gen_dense_gaussian(5, 5, spud::Seed(11));
  const Matrix b = spud::gen_dense_gaussian(5, 5, spud::Seed(12));
  const Matrix got = spud::matmul(a, b);
  const Matrix want = oracle::triple_loop_matmul(a, b);
  for (std::size_t i = 0; i < 25; ++i) EXPECT_NEAR(got.data()[i], want.data()[i], 1e-12);
}

TEST(Matmul, DimensionMismatchThrows) {
  EXPECT_THROW(spud::matmul(Matrix(2, 3), Matrix(2, 3)), spud::InvalidArgument);
  EXPECT_THROW(Matrix(2, 3) + Matrix(3, 2), spud::InvalidArgument);
}

TEST(Matmul, AssociativityProperty) {
  for (std::uint32_t t = 0; t < 20; ++t) {
    const spud::Seed s(99, {t});
    const Matrix a = spud::gen_dense_gaussian(4, 6, s.child(0));
    const Matrix b = spud::gen_dense_gaussian(6, 3, s.child(1));
    const Matrix c = spud::gen_dense_gaussian(3, 5, s.child(2));
    EXPECT_LE(rel_diff(spud::matmul(spud::matmul(a, b), c), spud::matmul(a, spud::matmul(b, c))),
              1e-9);
  }
}

TEST(Rank, IdentityAndZero) {
  EXPECT_EQ(spud::rank(Matrix::identity(4), 1e-10), 4u);
  EXPECT_EQ(spud::rank(Matrix(3, 3)), 0u);
}

TEST(Rank, DependentRowsAgreeWithDeterminant) {
  const Matrix m{{1, 2}, {2, 4}};
  EXPECT_EQ(oracle::det2(m), 0.0);
  EXPECT_EQ(spud::rank(m), 1u);
  const Matrix full{{1, 2}, {3, 4}};
  EXPECT_NE(oracle::det2(full), 0.0);
  EXPECT_EQ(spud::rank(full), 2u);
}

TEST(Rank, RectangularAndTolerance) {
  EXPECT_EQ(spud::rank(Matrix{{1, 0, 0, 1}, {0, 1, 0, 1}}), 2u);
  const Matrix nearly{{1, 0}, {0, 1e-12}};
  EXPECT_EQ(spud::rank(nearly, 1e-10), 1u);
  EXPECT_EQ(spud::rank(nearly, 1e-13), 2u);
  EXPECT_THROW(spud::rank(nearly, 0.0), spud::InvalidArgument);
}

TEST(Rank, ProductNeverExceedsFactors) {
  for (std::uint32_t t = 0; t < 30; ++t) {
    const spud::Seed s(5, {t});
    const std::size_t inner = 1 + t % 4;
    const Matrix a = spud::gen_dense_gaussian(5, inner, s.child(0));
    const Matrix b = spud::gen_dense_gaussian(inner, 6, s.child(1));
    const std::size_t ra = spud::rank(a), rb = spud::rank(b);
    EXPECT_LE(spud::rank(spud::matmul(a, b)), std::min(ra, rb));
  }
}

TEST(Solve, IdentityAndDiagonal) {
  const Matrix b{{1, 2}, {3, 4}, {5, 6}};
  EXPECT_EQ(spud::solve(Matrix::identity(3), b), b);
  const Matrix x = spud::solve(Matrix{{2, 0}, {0, 4}}, Matrix{{2}, {8}});
  EXPECT_DOUBLE_EQ(x(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(x(1, 0), 2.0);
}

TEST(Solve, MultiplyBackResidual) {
  const Matrix a = spud::gen_dense_gaussian(6, 6, spud::Seed(3)) + 6.0 * Matrix::identity(6);
  const Matrix b = spud::gen_dense_gaussian(6, 2, spud::Seed(4));
  const Matrix x = spud::solve(a, b);
  EXPECT_LE(spud::frobenius_norm(spud::matmul(a, x) - b), 1e-8 * spud::frobenius_norm(b));
}

TEST(Solve, RoundTripProperty) {
  for (std::uint32_t t = 0; t < 20; ++t) {
    const spud::Seed s(17, {t});
    const Matrix a = spud::gen_dense_gaussian(7, 7, s.child(0));
    const Matrix x = spud::gen_dense_gaussian(7, 3, s.child(1));
    EXPECT_LE(rel_diff(spud::solve(a, spud::matmul(a, x)), x), 1e-8);
  }
}

TEST(Solve, SingularCarriesPivot) {
  try {
    spud::solve(Matrix{{1, 2}, {2, 4}}, Matrix{{1}, {1}});
    FAIL() << "expected SingularMatrix";
  } catch (const spud::SingularMatrix& e) {
    EXPECT_LE(std::abs(e.pivot()), 1e-10 * 4.0);
  }
}

TEST(Solve, ShapeErrors) {
  EXPECT_THROW(spud::solve(Matrix(2, 3), Matrix(2, 1)), spud::InvalidArgument);
  EXPECT_THROW(spud::solve(Matrix::identity(2), Matrix(3, 1)), spud::InvalidArgument);
}

TEST(Inverse, ProductIsIdentity) {
  const Matrix a{{4, 7}, {2, 6}};
  const Matrix inv = spud::inverse(a);
  EXPECT_LE(spud::frobenius_norm(spud::matmul(a, inv) - Matrix::identity(2)), 1e-12);
  EXPECT_NEAR(inv(0, 0), 0.6, 1e-15);
}

TEST(Inverse, AgreesWithCofactorDeterminantSign) {
  const Matrix a = spud::gen_dense_gaussian(4, 4, spud::Seed(8));
  const double det = oracle::cofactor_det(a);
  ASSERT_GT(std::abs(det), 1e-6);
  const Matrix inv = spud::inverse(a);
  EXPECT_NEAR(oracle::cofactor_det(inv) * det, 1.0, 1e-9);
}

TEST(NullVector, FindsKernel) {
  const Matrix m{{1, 2, 3}, {2, 4, 6}};
  const auto v = spud::null_vector(m);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_GT(spud::norm2(v), 0.0);
  const Matrix mv = spud::matmul(m, Matrix::column(v));
  EXPECT_LE(mv.max_abs(), 1e-12);
  EXPECT_TRUE(spud::null_vector(Matrix::identity(3)).empty());
}

TEST(Slicing, BlocksAndStacks) {
  const Matrix m{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  EXPECT_EQ(spud::row_block(m, 1, 2), (Matrix{{4, 5, 6}, {7, 8, 9}}));
  EXPECT_EQ(spud::col_block(m, 2, 1), (Matrix{{3}, {6}, {9}}));
  const std::vector<std::size_t> idx{2, 0};
  EXPECT_EQ(spud::select_rows(m, idx), (Matrix{{7, 8, 9}, {1, 2, 3}}));
  EXPECT_EQ(spud::select_cols(m, idx), (Matrix{{3, 1}, {6, 4}, {9, 7}}));
  EXPECT_EQ(spud::vstack(spud::row_block(m, 0, 1), spud::row_block(m, 1, 2)), m);
  EXPECT_EQ(spud::hstack(spud::col_block(m, 0, 2), spud::col_block(m, 2, 1)), m);
  EXPECT_THROW(spud::row_block(m, 2, 2), spud::InvalidArgument);
  EXPECT_THROW(spud::hstack(m, Matrix(2, 1)), spud::InvalidArgument);
}

TEST(Norms, VectorAndFrobenius) {
  const std::vector<double> v{3, -4};
  EXPECT_DOUBLE_EQ(spud::norm1(v), 7.0);
  EXPECT_DOUBLE_EQ(spud::norm2(v), 5.0);
  EXPECT_DOUBLE_EQ(spud::max_abs(v), 4.0);
  EXPECT_DOUBLE_EQ(spud::frobenius_norm(Matrix{{1, 2}, {2, 4}}), 5.0);
  EXPECT_DOUBLE_EQ(spud::default_tolerance(Matrix{{1, -8}}), 8e-10);
}
