#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "triqi/errors.hpp"
#include "triqi/secular.hpp"
#include "triqi/spectral.hpp"
#include "triqi/states.hpp"

namespace triqi {
namespace {

Vector random_unit(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

Matrix dense_of(const RealVector& d, double w, const Vector& v) {
  Matrix m = d.cast<Complex>().asDiagonal();
  m += w * v * v.adjoint();
  return m;
}

void expect_matches_dense(const RealVector& d, double w, const Vector& v, double tol) {
  const SecularRoot r = rank_one_update(d, w, v);
  const RealVector ev = r.eigenvalues();
  const RealVector ref = eigh(dense_of(d, w, v)).eigenvalues;
  ASSERT_EQ(ev.size(), ref.size());
  EXPECT_NEAR((ev - ref).cwiseAbs().maxCoeff(), 0.0, tol);
  // The active eigenvectors form a unitary and diagonalize the active block.
  const Eigen::Index m = r.active_eigenvectors.cols();
  if (m > 0) {
    EXPECT_NEAR((r.active_eigenvectors.adjoint() * r.active_eigenvectors - Matrix::Identity(m, m)).cwiseAbs().maxCoeff(),
                0.0, 1e-12);
  }
  const auto id = [](double x) { return x; };
  const Matrix rebuilt = materialize(r.apply(id, LocalFrame::identity(1)), SpaceDescriptor({static_cast<std::size_t>(d.size())}),
                                     kDefaultDenseLimit);
  EXPECT_NEAR((rebuilt - dense_of(d, w, v)).cwiseAbs().maxCoeff(), 0.0, tol);
}

TEST(RankOneUpdate, MatchesDenseOnRandomInputs) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const RealVector d = (RealVector::Random(30).array() + 1.0).matrix();
    expect_matches_dense(d, 0.7, random_unit(30, seed), 1e-13);
    expect_matches_dense(d, -0.7, random_unit(30, seed + 10), 1e-13);
  }
}

TEST(RankOneUpdate, RepeatedEntriesAreDeflated) {
  RealVector d(12);
  d << 0.1, 0.1, 0.1, 0.2, 0.2, 0.0, 0.0, 0.0, 0.3, 0.3, 0.3, 0.3;
  const Vector v = random_unit(12, 42);
  const SecularRoot r = rank_one_update(d, 0.4, v);
  EXPECT_EQ(r.deflated_repeated, 12u - 4u);
  EXPECT_EQ(r.secular_roots, 4u);
  expect_matches_dense(d, 0.4, v, 1e-14);
}

TEST(RankOneUpdate, VanishingComponentsStayPut) {
  RealVector d = RealVector::LinSpaced(8, 0.0, 0.7);
  Vector v = Vector::Zero(8);
  v(2) = 0.6;
  v(5) = Complex(0.0, 0.8);
  const SecularRoot r = rank_one_update(d, 0.5, v);
  EXPECT_EQ(r.active, (std::vector<std::size_t>{2, 5}));
  expect_matches_dense(d, 0.5, v, 1e-15);
}

TEST(RankOneUpdate, Interlacing) {
  const RealVector d = (RealVector::Random(25).array() * 0.5 + 0.5).matrix();
  const Vector v = random_unit(25, 3);
  const RealVector ev = rank_one_update(d, 0.3, v).eigenvalues();
  std::vector<double> sorted(d.data(), d.data() + d.size());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    EXPECT_GE(ev(static_cast<Eigen::Index>(i)), sorted[i] - 1e-12);
    const double upper = i + 1 < sorted.size() ? sorted[i + 1] : sorted[i] + 0.3;
    EXPECT_LE(ev(static_cast<Eigen::Index>(i)), upper + 1e-12);
  }
}

TEST(SqrtDiagPlusRankOne, CommutingCase) {
  const int n = 10;
  const double eta = 0.2;
  const RealVector d = RealVector::Constant(n, 1.0 / n);
  Vector v = Vector::Zero(n);
  v(3) = 1.0;
  const RealVector ev = sqrt_diag_plus_rank_one(d, eta, v).eigenvalues();
  EXPECT_NEAR(ev(n - 1), (1.0 - eta) / n + eta, 1e-15);
  for (int i = 0; i < n - 1; ++i) EXPECT_NEAR(ev(i), (1.0 - eta) / n, 1e-15);
}

TEST(SqrtDiagPlusRankOne, EtaZeroIsElementwiseRoot) {
  RealVector d(4);
  d << 0.1, 0.4, 0.2, 0.3;
  const SecularRoot r = sqrt_diag_plus_rank_one(d, 0.0, random_unit(4, 1));
  const DiagPlusLowRankRep s = principal_sqrt(r);
  EXPECT_TRUE(s.terms.empty());
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s.diagonal(i), std::sqrt(d(i)));
}

TEST(SqrtDiagPlusRankOne, PrincipalRootSquaresBack) {
  RealVector d = RealVector::LinSpaced(16, 0.0, 1.5);
  d /= d.sum();
  const Vector v = random_unit(16, 9);
  const double eta = 0.05;
  const DiagPlusLowRankRep s = principal_sqrt(sqrt_diag_plus_rank_one(d, eta, v));
  const Matrix root = materialize(s, SpaceDescriptor({16}), kDefaultDenseLimit);
  EXPECT_NEAR((root * root - dense_of((1.0 - eta) * d, eta, v)).cwiseAbs().maxCoeff(), 0.0, 1e-13);
  EXPECT_GE(eigh(root).eigenvalues.minCoeff(), -1e-14);
}

TEST(SqrtDiagPlusRankOne, RejectsBadInputs) {
  const RealVector d = RealVector::Constant(3, 0.2);
  const Vector v = random_unit(3, 2);
  EXPECT_THROW(sqrt_diag_plus_rank_one(d, 1.5, v), UsageError);
  EXPECT_THROW(sqrt_diag_plus_rank_one(-d, 0.5, v), UsageError);
  EXPECT_THROW(sqrt_diag_plus_rank_one(d, 0.5, 2.0 * v), UsageError);
  EXPECT_THROW(rank_one_update(d, 0.5, random_unit(4, 2)), UsageError);
}

ProtocolParams thermal5(std::size_t cutoff) {
  ProtocolParams p;
  p.theta = 0.1;
  p.eta = 0.01;
  p.nbar2 = p.nbar3 = 5.0;
  p.cutoffs = {2, cutoff, cutoff};
  p.max_tail = 1.0;
  return p;
}

// Reference values: tests/oracle/oracle.py, thermal (x) thermal at nbar = 5, cutoff 8.
TEST(SqrtDiagPlusRankOne, ThermalBackgroundMatchesOracle) {
  const auto f = hypothesis_h1(thermal5(8)).framed();
  ASSERT_TRUE(f.has_value());
  const RealVector ev = rank_one_update(f->diagonal, f->terms[0].weight, f->terms[0].vector).eigenvalues();
  const auto n = ev.size();
  EXPECT_NEAR(ev(n - 1), 0.056529527747486874, 1e-15);
  EXPECT_NEAR(ev(n - 2), 0.038910936538026186, 1e-15);
  EXPECT_NEAR(ev(n - 3), 0.03891093653802613, 1e-15);
}

TEST(SqrtDiagPlusRankOne, ThermalBackgroundLargeCutoffMatchesDense) {
  const ProtocolParams p = thermal5(16);
  const DensityOperator rho1 = hypothesis_h1(p);
  const auto f = rho1.framed();
  const RealVector ev = rank_one_update(f->diagonal, f->terms[0].weight, f->terms[0].vector).eigenvalues();
  const RealVector ref = eigh(rho1.to_dense()).eigenvalues;
  EXPECT_NEAR((ev - ref).cwiseAbs().maxCoeff(), 0.0, 1e-14);

  // Cutoff 32 runs structured only; its spectrum still sums to one and interlaces.
  const auto g = hypothesis_h1(thermal5(32)).framed();
  const SecularRoot r = rank_one_update(g->diagonal, g->terms[0].weight, g->terms[0].vector);
  EXPECT_NEAR(r.eigenvalues().sum(), 1.0, 1e-12);
  EXPECT_GE(r.eigenvalues().minCoeff(), -1e-15);
}

}  // namespace
}  // namespace triqi
