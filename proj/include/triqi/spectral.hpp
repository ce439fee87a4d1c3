#pragma once

#include "triqi/density.hpp"

namespace triqi {

/// Ascending eigenvalues; eigenvector columns form a unitary.
struct EigenSystem {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

/// Dense Hermitian eigendecomposition (tridiagonalization + implicit QR).
/// Rejects inputs that are not Hermitian within `hermitian_tol` relative to
/// the largest entry, and dimensions above the dense limit.
EigenSystem eigh(const Matrix& a, std::size_t dense_limit = kDefaultDenseLimit, double hermitian_tol = 1e-10);

inline constexpr double kSupportTol = 1e-12;
inline constexpr double kNegativeTol = 1e-10;

struct PowerOptions {
  double support_tol = kSupportTol;    // relative to the largest eigenvalue
  double negative_tol = kNegativeTol;  // relative to the largest eigenvalue
  std::size_t dense_limit = kDefaultDenseLimit;
};

/// lambda -> lambda^s restricted to the support. Eigenvalues below
/// support_tol * lambda_max are treated as exact zeros and 0^s = 0 for every
/// s, including s = 0, so rho^0 is the support projector. Throws NumericError
/// when an eigenvalue is below -negative_tol * lambda_max.
double support_power(double lambda, double s, double lambda_max, const PowerOptions& opts = {});
RealVector support_power(const RealVector& eigenvalues, double s, const PowerOptions& opts = {});

/// rho^s for s in [0, 1], keeping structure where possible: diagonal stays
/// diagonal, product frames stay framed, a single rank-one update goes
/// through the secular solver. Everything else is materialized densely.
DensityOperator matrix_power(const DensityOperator& rho, double s, const PowerOptions& opts = {});

struct TraceProduct {
  double value = 0.0;
  double imaginary_residue = 0.0;
};

/// Re Tr(AB). Structured when both operators share a frame and at least one
/// of them is diagonal in it.
TraceProduct trace_product(const DensityOperator& a, const DensityOperator& b,
                           std::size_t dense_limit = kDefaultDenseLimit);

/// Full spectrum, ascending; structured for framed diagonal and single
/// rank-one updates.
RealVector spectrum(const DensityOperator& rho, std::size_t dense_limit = kDefaultDenseLimit);

struct InvariantReport {
  double hermiticity_error = 0.0;  // max |A - A^dagger|, 0 for structured operators
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double trace = 0.0;
  bool hermitian = true;
  bool positive = true;
  bool unit_trace = true;
  bool ok() const { return hermitian && positive && unit_trace; }
};

/// Hermitian to 1e-12, PSD to -1e-10 * lambda_max, unit trace to 1e-12 when
/// the operator is flagged trace-normalized.
InvariantReport check_invariants(const DensityOperator& rho, std::size_t dense_limit = kDefaultDenseLimit);

}  // namespace triqi
