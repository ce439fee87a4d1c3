#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "triqi/density.hpp"
#include "triqi/kernels.hpp"

namespace triqi {

struct SecularOptions {
  double deflation_gap = 1e-13;  // relative gap below which diagonal entries count as repeated
  int max_iterations = 2000;
  kernels::Exec exec = kernels::Exec::parallel;
};

/// Eigensystem of diag(base) + weight * v v^dagger.
///
/// Indices where v vanishes keep their diagonal entry and unit eigenvector.
/// The remaining "active" indices carry a small dense eigenproblem: repeated
/// diagonal entries are deflated with Givens rotations and the rest is solved
/// through the secular equation, with eigenvectors rebuilt from the Lowner
/// recomputation of the update vector so they stay orthogonal.
struct SecularRoot {
  RealVector base;
  double weight = 0.0;
  Vector update;

  std::vector<std::size_t> active;  // ascending index order
  RealVector active_eigenvalues;    // ascending
  Matrix active_eigenvectors;       // columns, in `active` coordinates
  std::size_t deflated_repeated = 0;
  std::size_t secular_roots = 0;

  /// All eigenvalues, ascending.
  RealVector eigenvalues() const;
  /// f(diag(base) + weight v v^dagger) with the given frame attached.
  DiagPlusLowRankRep apply(const std::function<double(double)>& f, const LocalFrame& frame) const;
};

SecularRoot rank_one_update(const RealVector& base, double weight, const Vector& v, const SecularOptions& opts = {});

/// Eigensystem of (1 - eta) diag(d) + eta v v^dagger; d >= 0, eta in [0, 1],
/// v of unit norm. Pair with principal_sqrt() for the PSD square root.
SecularRoot sqrt_diag_plus_rank_one(const RealVector& d, double eta, const Vector& v, const SecularOptions& opts = {});

/// Principal square root in the identity frame.
DiagPlusLowRankRep principal_sqrt(const SecularRoot& root);

}  // namespace triqi
