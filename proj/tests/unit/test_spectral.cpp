#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "triqi/errors.hpp"
#include "triqi/spectral.hpp"
#include "triqi/states.hpp"

namespace triqi {
namespace {

ProtocolParams golden_params(IdlerVariant idler = IdlerVariant::paper_pure) {
  ProtocolParams p;
  p.theta = 0.1;
  p.eta = 0.05;
  p.nbar2 = p.nbar3 = 3.0;
  p.cutoffs = {2, 6, 6};
  p.max_tail = 1.0;
  p.idler = idler;
  return p;
}

Matrix random_density(Eigen::Index n, Eigen::Index rank, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(n, rank);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

TEST(Eigh, DiagonalAndPauliX) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const EigenSystem e = eigh(d);
  EXPECT_NEAR(e.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues(1), 2.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues(2), 3.0, 1e-15);

  Matrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const EigenSystem ex = eigh(x);
  EXPECT_NEAR(ex.eigenvalues(0), -1.0, 1e-15);
  EXPECT_NEAR(ex.eigenvalues(1), 1.0, 1e-15);
}

TEST(Eigh, ReconstructionAndUnitarity) {
  const Matrix rho = random_density(40, 40, 7);
  const EigenSystem e = eigh(rho);
  const Matrix rec = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
  EXPECT_LE((rec - rho).cwiseAbs().maxCoeff(), 1e-10 * rho.cwiseAbs().maxCoeff());
  EXPECT_LE((e.eigenvectors.adjoint() * e.eigenvectors - Matrix::Identity(40, 40)).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index i = 1; i < 40; ++i) EXPECT_LE(e.eigenvalues(i - 1), e.eigenvalues(i));
}

TEST(Eigh, RejectsNonHermitianAndOversized) {
  Matrix a(2, 2);
  a << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(eigh(a), UsageError);
  EXPECT_THROW(eigh(Matrix::Identity(10, 10), 5), NumericError);
}

// Reference values: tests/oracle/oracle.py.
TEST(Eigh, GoldenRho1Spectrum) {
  const Matrix rho1 = hypothesis_h1(golden_params()).to_dense();
  const RealVector ev = eigh(rho1).eigenvalues;
  const auto n = ev.size();
  EXPECT_NEAR(ev(n - 1), 0.1372353593839976, 1e-14);
  EXPECT_NEAR(ev(n - 2), 0.06590199307752023, 1e-14);
  EXPECT_NEAR(ev(n - 3), 0.06590199307752023, 1e-14);
  EXPECT_NEAR(ev(n - 4), 0.0494286974180715, 1e-14);
  EXPECT_NEAR(ev.sum(), 1.0, 1e-12);
}

TEST(SupportPower, ConventionZeroToTheZeroIsZero) {
  RealVector v(3);
  v << 0.5, 0.5, 0.0;
  const RealVector p0 = support_power(v, 0.0);
  EXPECT_EQ(p0(0), 1.0);
  EXPECT_EQ(p0(1), 1.0);
  EXPECT_EQ(p0(2), 0.0);
  v(2) = 1e-14;  // below 1e-12 relative: treated as an exact zero
  EXPECT_EQ(support_power(v, 0.0)(2), 0.0);
  EXPECT_EQ(support_power(v, 0.5)(2), 0.0);
  v(2) = -1e-9;
  EXPECT_THROW(support_power(v, 0.5), NumericError);
}

TEST(MatrixPower, ExamplesAndExponentRange) {
  RealVector v(3);
  v << 0.5, 0.5, 0.0;
  const DensityOperator d = DensityOperator::diagonal(SpaceDescriptor({3}), v);
  const Matrix p0 = matrix_power(d, 0.0).to_dense();
  EXPECT_EQ(p0(0, 0), Complex(1.0));
  EXPECT_EQ(p0(1, 1), Complex(1.0));
  EXPECT_EQ(p0(2, 2), Complex(0.0));
  EXPECT_THROW(matrix_power(d, 1.5), UsageError);

  const DensityOperator rho1 = hypothesis_h1(golden_params());
  EXPECT_NEAR((matrix_power(rho1, 1.0).to_dense() - rho1.to_dense()).cwiseAbs().maxCoeff(), 0.0, 1e-14);

  const DensityOperator proj = DensityOperator::pure(three_photon_state(0.4, SpaceDescriptor({2, 3, 3})));
  for (double s : {0.1, 0.5, 1.0}) {
    EXPECT_NEAR((matrix_power(proj, s).to_dense() - proj.to_dense()).cwiseAbs().maxCoeff(), 0.0, 1e-14);
  }
}

TEST(MatrixPower, ComplementaryPowersReconstruct) {
  const DensityOperator dense = DensityOperator::dense(SpaceDescriptor({12}), random_density(12, 5, 3));
  const std::vector<DensityOperator> ops = {hypothesis_h0(golden_params()), hypothesis_h1(golden_params()),
                                            hypothesis_h1(golden_params(IdlerVariant::traced)), dense};
  for (const auto& rho : ops) {
    for (double s : {0.0, 0.25, 0.5, 0.8}) {
      const Matrix a = matrix_power(rho, s).to_dense();
      const Matrix b = matrix_power(rho, 1.0 - s).to_dense();
      const Matrix r = rho.to_dense();
      EXPECT_NEAR((a * b - r).cwiseAbs().maxCoeff(), 0.0, 1e-10);
    }
    const DensityOperator h = matrix_power(rho, 0.5);
    EXPECT_NEAR(trace_product(h, h).value, rho.trace(), 1e-10);
  }
}

TEST(MatrixPower, StructuredMatchesDense) {
  const DensityOperator rho1 = hypothesis_h1(golden_params());
  EXPECT_EQ(matrix_power(rho1, 0.5).structure(), Structure::diag_plus_low_rank);
  const Matrix dense = DensityOperator::dense(rho1.space(), rho1.to_dense()).to_dense();
  const EigenSystem e = eigh(dense);
  const Matrix ref = e.eigenvectors * support_power(e.eigenvalues, 0.3).cast<Complex>().asDiagonal() *
                     e.eigenvectors.adjoint();
  EXPECT_NEAR((matrix_power(rho1, 0.3).to_dense() - ref).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(TraceProduct, Examples) {
  // Tr(rho * support projector) = 1.
  RealVector v(4);
  v << 0.2, 0.3, 0.5, 0.0;
  const DensityOperator rho = DensityOperator::diagonal(SpaceDescriptor({4}), v);
  const TraceProduct t = trace_product(rho, matrix_power(rho, 0.0));
  EXPECT_NEAR(t.value, 1.0, 1e-15);

  // Tr(P0 P1) = |<psi0|psi1>|^2.
  const SpaceDescriptor s({2, 2, 2});
  const Ket a = three_photon_state(0.2, s);
  const Ket b = three_photon_state(0.9, s);
  const TraceProduct tp = trace_product(DensityOperator::pure(a), DensityOperator::pure(b));
  EXPECT_NEAR(tp.value, std::norm(a.amplitudes().dot(b.amplitudes())), 1e-14);
  EXPECT_LE(tp.imaginary_residue, 1e-10);

  EXPECT_THROW(trace_product(rho, DensityOperator::pure(a)), UsageError);
}

// Reference value: tests/oracle/oracle.py (q_half of the golden set).
TEST(TraceProduct, GoldenRootTrace) {
  const DensityOperator rho0 = hypothesis_h0(golden_params());
  const DensityOperator rho1 = hypothesis_h1(golden_params());
  const DensityOperator r0 = DensityOperator::dense(rho0.space(), matrix_power(rho0, 0.5).to_dense(), false);
  const DensityOperator r1 = DensityOperator::dense(rho1.space(), matrix_power(rho1, 0.5).to_dense(), false);
  const TraceProduct t = trace_product(r0, r1);
  EXPECT_NEAR(t.value, 0.9969204941134269, 1e-12);
  EXPECT_LE(t.imaginary_residue, 1e-10);
}

TEST(Spectrum, StructuredMatchesDense) {
  for (auto idler : {IdlerVariant::paper_pure, IdlerVariant::traced}) {
    const DensityOperator rho1 = hypothesis_h1(golden_params(idler));
    const RealVector s = spectrum(rho1);
    const RealVector d = eigh(rho1.to_dense()).eigenvalues;
    EXPECT_NEAR((s - d).cwiseAbs().maxCoeff(), 0.0, 1e-14);
  }
}

TEST(Invariants, DetectViolations) {
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;
  const InvariantReport r = check_invariants(DensityOperator::dense(SpaceDescriptor({2}), bad));
  EXPECT_FALSE(r.positive);
  EXPECT_TRUE(r.unit_trace);
  Matrix half = Matrix::Identity(2, 2) * 0.4;
  EXPECT_FALSE(check_invariants(DensityOperator::dense(SpaceDescriptor({2}), half)).unit_trace);
  Matrix skew = Matrix::Identity(2, 2) * 0.5;
  skew(0, 1) = 1e-9;
  EXPECT_FALSE(check_invariants(DensityOperator::dense(SpaceDescriptor({2}), skew)).hermitian);
}

}  // namespace
}  // namespace triqi
