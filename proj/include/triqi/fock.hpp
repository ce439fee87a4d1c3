#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace triqi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

inline constexpr std::size_t kDefaultDenseLimit = 4096;

/// Truncated multimode Fock space. Mode m holds levels 0..cutoff(m)-1.
///
/// Basis ordering is row-major with mode 0 slowest: the index of the
/// occupation tuple (n_0, ..., n_{M-1}) is sum_m n_m * stride(m) with
/// stride(M-1) = 1. This ordering is frozen; golden files depend on it.
class SpaceDescriptor {
 public:
  SpaceDescriptor() = default;
  explicit SpaceDescriptor(std::vector<std::size_t> cutoffs);

  /// Checked constructor: `modes` must match the number of cutoffs.
  static SpaceDescriptor build(std::size_t modes, std::span<const std::size_t> cutoffs);

  std::size_t modes() const { return cutoffs_.size(); }
  std::size_t cutoff(std::size_t mode) const;
  const std::vector<std::size_t>& cutoffs() const { return cutoffs_; }
  std::size_t total_dim() const { return total_dim_; }
  std::size_t stride(std::size_t mode) const;

  std::size_t index(std::span<const std::size_t> occupation) const;
  std::vector<std::size_t> occupation(std::size_t index) const;
  std::size_t level(std::size_t index, std::size_t mode) const {
    return (index / strides_[mode]) % cutoffs_[mode];
  }

  /// Descriptor of the listed modes (in the given order).
  SpaceDescriptor subspace(std::span<const std::size_t> modes) const;
  /// Concatenation: modes of `this` followed by modes of `other`.
  SpaceDescriptor concat(const SpaceDescriptor& other) const;

  /// Throws NumericError when total_dim exceeds the dense materialization limit.
  void require_dense(std::size_t dense_limit) const;

  bool operator==(const SpaceDescriptor& other) const { return cutoffs_ == other.cutoffs_; }

 private:
  std::vector<std::size_t> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t total_dim_ = 0;
};

/// Unit-norm amplitude vector over a SpaceDescriptor.
class Ket {
 public:
  /// Normalizes `amplitudes`; throws on size mismatch or zero norm.
  Ket(SpaceDescriptor space, Vector amplitudes);

  static Ket basis(SpaceDescriptor space, std::span<const std::size_t> occupation);

  const SpaceDescriptor& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::span<const std::size_t> occupation) const;
  /// Norm of the amplitudes handed to the constructor, before normalization.
  double input_norm() const { return input_norm_; }

 private:
  SpaceDescriptor space_;
  Vector amplitudes_;
  double input_norm_ = 1.0;
};

/// Ladder operator a_mode on the full space: a|n> = sqrt(n)|n-1>, identity on
/// the other modes. creation() is its transpose, so a^dagger maps the top
/// level to zero (truncation drops the population above the cutoff).
SparseMatrix annihilation(const SpaceDescriptor& space, std::size_t mode);
SparseMatrix creation(const SpaceDescriptor& space, std::size_t mode);
SparseMatrix number_operator(const SpaceDescriptor& space, std::size_t mode);

/// Tensor product of kets; the result lives on the concatenated space.
Ket tensor_ket(std::span<const Ket> factors);

}  // namespace triqi
