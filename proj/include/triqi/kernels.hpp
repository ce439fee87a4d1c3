#pragma once

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path selected by `Exec`. Both paths compute each output element with
// the same operation order, so they agree bit for bit; reductions are done
// serially over per-element partials to keep results independent of the
// thread count.

#include <cstddef>
#include <span>

#include "triqi/fock.hpp"

namespace triqi::kernels {

enum class Exec { serial, parallel };

/// Tr(A B) for square matrices of equal size.
Complex trace_product(const Matrix& a, const Matrix& b, Exec exec = Exec::parallel);

/// sum_i a_i sum_j w_ij b_j.
double bilinear(const RealVector& a, const Eigen::MatrixXd& w, const RealVector& b, Exec exec = Exec::parallel);

/// Applies the local operator `u` to `mode` of every column of `block`
/// (rows indexed by the basis of `space`).
void apply_mode(Matrix& block, const SpaceDescriptor& space, std::size_t mode, const Matrix& u,
                Exec exec = Exec::parallel);

/// Reduced matrix on the sorted, duplicate-free `keep` modes.
Matrix partial_trace(const Matrix& rho, const SpaceDescriptor& space, std::span<const std::size_t> keep,
                     Exec exec = Exec::parallel);

/// Root of 1 + weight * sum_j z2_j / (d_j - lambda) = 0, stored as
/// lambda = d[origin] + offset so that differences d_j - lambda keep full
/// relative accuracy near the poles.
struct SecularRootValue {
  std::size_t origin = 0;
  double offset = 0.0;
  int iterations = 0;
  bool converged = false;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// One root per interval (d_i, d_{i+1}) and one in (d_last, d_last + weight*|z|^2].
/// Requires strictly increasing d, z2 > 0, weight > 0.
void secular_roots(const RealVector& d, const RealVector& z2, double weight, std::span<SecularRootValue> out,
                   int max_iterations = 2000, Exec exec = Exec::parallel);

}  // namespace triqi::kernels
