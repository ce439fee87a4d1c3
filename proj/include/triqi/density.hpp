#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "triqi/fock.hpp"

namespace triqi {

/// Product basis change U_0 (x) U_1 (x) ... ; an empty factor is the identity.
struct LocalFrame {
  std::vector<Matrix> factors;

  static LocalFrame identity(std::size_t modes) { return LocalFrame{std::vector<Matrix>(modes)}; }
  bool is_identity() const;
  bool operator==(const LocalFrame& other) const;
};

/// Maps frame coordinates to basis coordinates (or back when `adjoint`).
Vector apply_frame(const LocalFrame& frame, const SpaceDescriptor& space, const Vector& v, bool adjoint = false);

struct RankOneTerm {
  double weight = 0.0;
  Vector vector;
};

class DensityOperator;

struct DenseRep {
  Matrix matrix;
};
struct DiagonalRep {
  RealVector values;
};
/// Factors cover consecutive groups of modes, in order.
struct TensorProductRep {
  std::vector<DensityOperator> factors;
};
/// F (diag(diagonal) + sum_k w_k v_k v_k^dagger) F^dagger, with the
/// diagonal and the vectors expressed in the frame F.
struct DiagPlusLowRankRep {
  LocalFrame frame;
  RealVector diagonal;
  std::vector<RankOneTerm> terms;
};

enum class Structure { dense, diagonal, tensor_product, diag_plus_low_rank };

/// Hermitian operator on a truncated Fock space with a structural tag.
/// Immutable once built. `trace_normalized` marks genuine density operators;
/// matrix functions of them (rho^s) carry the flag cleared.
class DensityOperator {
 public:
  using Rep = std::variant<DenseRep, DiagonalRep, TensorProductRep, DiagPlusLowRankRep>;

  static DensityOperator dense(SpaceDescriptor space, Matrix matrix, bool trace_normalized = true);
  static DensityOperator diagonal(SpaceDescriptor space, RealVector values, bool trace_normalized = true);
  static DensityOperator tensor_product(std::vector<DensityOperator> factors);
  static DensityOperator diag_plus_low_rank(SpaceDescriptor space, DiagPlusLowRankRep rep,
                                            bool trace_normalized = true);
  /// |psi><psi| as a zero diagonal plus one rank-one term.
  static DensityOperator pure(const Ket& ket);

  const SpaceDescriptor& space() const { return space_; }
  const Rep& rep() const { return rep_; }
  Structure structure() const { return static_cast<Structure>(rep_.index()); }
  bool trace_normalized() const { return trace_normalized_; }

  double trace() const;
  Matrix to_dense(std::size_t dense_limit = kDefaultDenseLimit) const;

  /// Frame form when every factor is diagonalizable mode by mode (dense
  /// factors must be single-mode). Tensor products are diagonalized factor by
  /// factor; the result has no rank-one terms in that case.
  std::optional<DiagPlusLowRankRep> framed() const;

 private:
  DensityOperator(SpaceDescriptor space, Rep rep, bool normalized)
      : space_(std::move(space)), rep_(std::move(rep)), trace_normalized_(normalized) {}

  SpaceDescriptor space_;
  Rep rep_;
  bool trace_normalized_ = true;
};

Matrix materialize(const DiagPlusLowRankRep& rep, const SpaceDescriptor& space, std::size_t dense_limit);

/// Reduced operator on `keep` (sorted, duplicate-free, nonempty).
/// Diagonal and tensor-product operators whose factors align with `keep`
/// stay structured; everything else goes through the dense kernel.
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep,
                              std::size_t dense_limit = kDefaultDenseLimit);

}  // namespace triqi
