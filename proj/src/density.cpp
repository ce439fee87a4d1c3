#include "triqi/density.hpp"

#include <cmath>

#include <fmt/format.h>

#include "triqi/errors.hpp"
#include "triqi/kernels.hpp"
#include "triqi/spectral.hpp"

namespace triqi {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

RealVector kron(const RealVector& a, const RealVector& b) {
  RealVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

void validate_keep(const SpaceDescriptor& space, std::span<const std::size_t> keep) {
  if (keep.empty()) throw UsageError("partial_trace: keep set is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= space.modes()) throw UsageError(fmt::format("partial_trace: mode {} out of range", keep[i]));
    if (i > 0 && keep[i] <= keep[i - 1]) throw UsageError("partial_trace: keep must be sorted and unique");
  }
}

}  // namespace

bool LocalFrame::is_identity() const {
  for (const auto& f : factors) {
    if (f.size() != 0) return false;
  }
  return true;
}

bool LocalFrame::operator==(const LocalFrame& other) const {
  if (factors.size() != other.factors.size()) return false;
  for (std::size_t m = 0; m < factors.size(); ++m) {
    const Matrix& a = factors[m];
    const Matrix& b = other.factors[m];
    if (a.size() == 0 && b.size() == 0) continue;
    if (a.size() == 0 || b.size() == 0) {
      const Matrix& u = a.size() == 0 ? b : a;
      if (!u.isIdentity(0.0)) return false;
      continue;
    }
    if (a.rows() != b.rows() || a.cols() != b.cols() || a != b) return false;
  }
  return true;
}

Vector apply_frame(const LocalFrame& frame, const SpaceDescriptor& space, const Vector& v, bool adjoint) {
  if (frame.factors.size() != space.modes()) throw UsageError("frame does not match the space");
  Matrix block = v;
  for (std::size_t m = 0; m < space.modes(); ++m) {
    const Matrix& u = frame.factors[m];
    if (u.size() == 0) continue;
    if (adjoint) {
      kernels::apply_mode(block, space, m, u.adjoint());
    } else {
      kernels::apply_mode(block, space, m, u);
    }
  }
  return block.col(0);
}

DensityOperator DensityOperator::dense(SpaceDescriptor space, Matrix matrix, bool trace_normalized) {
  if (static_cast<std::size_t>(matrix.rows()) != space.total_dim() || matrix.rows() != matrix.cols()) {
    throw UsageError(fmt::format("dense operator is {}x{}, space dimension is {}", matrix.rows(), matrix.cols(),
                                 space.total_dim()));
  }
  return DensityOperator(std::move(space), DenseRep{std::move(matrix)}, trace_normalized);
}

DensityOperator DensityOperator::diagonal(SpaceDescriptor space, RealVector values, bool trace_normalized) {
  if (static_cast<std::size_t>(values.size()) != space.total_dim()) {
    throw UsageError("diagonal operator does not match the space dimension");
  }
  return DensityOperator(std::move(space), DiagonalRep{std::move(values)}, trace_normalized);
}

DensityOperator DensityOperator::tensor_product(std::vector<DensityOperator> factors) {
  if (factors.empty()) throw UsageError("tensor product needs at least one factor");
  SpaceDescriptor space = factors.front().space();
  bool normalized = factors.front().trace_normalized();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    space = space.concat(factors[f].space());
    normalized = normalized && factors[f].trace_normalized();
  }
  return DensityOperator(std::move(space), TensorProductRep{std::move(factors)}, normalized);
}

DensityOperator DensityOperator::diag_plus_low_rank(SpaceDescriptor space, DiagPlusLowRankRep rep,
                                                    bool trace_normalized) {
  const auto dim = static_cast<Eigen::Index>(space.total_dim());
  if (rep.frame.factors.empty()) rep.frame = LocalFrame::identity(space.modes());
  if (rep.frame.factors.size() != space.modes()) throw UsageError("frame does not match the space");
  for (std::size_t m = 0; m < space.modes(); ++m) {
    const Matrix& u = rep.frame.factors[m];
    if (u.size() != 0 && (static_cast<std::size_t>(u.rows()) != space.cutoff(m) || u.rows() != u.cols())) {
      throw UsageError(fmt::format("frame factor for mode {} has the wrong shape", m));
    }
  }
  if (rep.diagonal.size() != dim) throw UsageError("diagonal does not match the space dimension");
  for (const auto& t : rep.terms) {
    if (t.vector.size() != dim) throw UsageError("rank-one vector does not match the space dimension");
  }
  return DensityOperator(std::move(space), std::move(rep), trace_normalized);
}

DensityOperator DensityOperator::pure(const Ket& ket) {
  DiagPlusLowRankRep rep{LocalFrame::identity(ket.space().modes()),
                         RealVector::Zero(static_cast<Eigen::Index>(ket.space().total_dim())),
                         {RankOneTerm{1.0, ket.amplitudes()}}};
  return diag_plus_low_rank(ket.space(), std::move(rep), true);
}

double DensityOperator::trace() const {
  return std::visit(Overloaded{
                        [](const DenseRep& r) { return r.matrix.trace().real(); },
                        [](const DiagonalRep& r) { return r.values.sum(); },
                        [](const TensorProductRep& r) {
                          double t = 1.0;
                          for (const auto& f : r.factors) t *= f.trace();
                          return t;
                        },
                        [](const DiagPlusLowRankRep& r) {
                          double t = r.diagonal.sum();
                          for (const auto& term : r.terms) t += term.weight * term.vector.squaredNorm();
                          return t;
                        },
                    },
                    rep_);
}

Matrix materialize(const DiagPlusLowRankRep& rep, const SpaceDescriptor& space, std::size_t dense_limit) {
  space.require_dense(dense_limit);
  Matrix m = rep.diagonal.cast<Complex>().asDiagonal();
  for (const auto& t : rep.terms) m.noalias() += t.weight * t.vector * t.vector.adjoint();
  if (rep.frame.is_identity()) return m;
  // F M F^dagger: apply F to the columns, then to the columns of the adjoint.
  for (std::size_t k = 0; k < space.modes(); ++k) {
    if (rep.frame.factors[k].size() != 0) kernels::apply_mode(m, space, k, rep.frame.factors[k]);
  }
  Matrix t = m.adjoint();
  for (std::size_t k = 0; k < space.modes(); ++k) {
    if (rep.frame.factors[k].size() != 0) kernels::apply_mode(t, space, k, rep.frame.factors[k]);
  }
  return t.adjoint();
}

Matrix DensityOperator::to_dense(std::size_t dense_limit) const {
  space_.require_dense(dense_limit);
  return std::visit(Overloaded{
                        [](const DenseRep& r) -> Matrix { return r.matrix; },
                        [](const DiagonalRep& r) -> Matrix { return r.values.cast<Complex>().asDiagonal(); },
                        [&](const TensorProductRep& r) -> Matrix {
                          Matrix out = r.factors.front().to_dense(dense_limit);
                          for (std::size_t f = 1; f < r.factors.size(); ++f) {
                            out = kron(out, r.factors[f].to_dense(dense_limit));
                          }
                          return out;
                        },
                        [&](const DiagPlusLowRankRep& r) -> Matrix { return materialize(r, space_, dense_limit); },
                    },
                    rep_);
}

std::optional<DiagPlusLowRankRep> DensityOperator::framed() const {
  return std::visit(Overloaded{
                        [&](const DenseRep& r) -> std::optional<DiagPlusLowRankRep> {
                          if (space_.modes() != 1) return std::nullopt;
                          EigenSystem es = eigh(r.matrix, space_.total_dim());
                          return DiagPlusLowRankRep{LocalFrame{{es.eigenvectors}}, es.eigenvalues, {}};
                        },
                        [&](const DiagonalRep& r) -> std::optional<DiagPlusLowRankRep> {
                          return DiagPlusLowRankRep{LocalFrame::identity(space_.modes()), r.values, {}};
                        },
                        [&](const TensorProductRep& r) -> std::optional<DiagPlusLowRankRep> {
                          DiagPlusLowRankRep out;
                          out.diagonal = RealVector::Ones(1);
                          for (const auto& f : r.factors) {
                            auto ff = f.framed();
                            if (!ff || !ff->terms.empty()) return std::nullopt;
                            out.frame.factors.insert(out.frame.factors.end(), ff->frame.factors.begin(),
                                                     ff->frame.factors.end());
                            out.diagonal = kron(out.diagonal, ff->diagonal);
                          }
                          return out;
                        },
                        [](const DiagPlusLowRankRep& r) -> std::optional<DiagPlusLowRankRep> { return r; },
                    },
                    rep_);
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep, std::size_t dense_limit) {
  const SpaceDescriptor& space = rho.space();
  validate_keep(space, keep);
  SpaceDescriptor reduced = space.subspace(keep);

  if (const auto* d = std::get_if<DiagonalRep>(&rho.rep())) {
    RealVector out = RealVector::Zero(static_cast<Eigen::Index>(reduced.total_dim()));
    std::vector<std::size_t> occ(keep.size());
    for (std::size_t i = 0; i < space.total_dim(); ++i) {
      for (std::size_t k = 0; k < keep.size(); ++k) occ[k] = space.level(i, keep[k]);
      out(static_cast<Eigen::Index>(reduced.index(occ))) += d->values(static_cast<Eigen::Index>(i));
    }
    return DensityOperator::diagonal(std::move(reduced), std::move(out), rho.trace_normalized());
  }

  if (const auto* tp = std::get_if<TensorProductRep>(&rho.rep())) {
    std::vector<bool> kept(space.modes(), false);
    for (auto m : keep) kept[m] = true;
    std::vector<DensityOperator> factors;
    bool aligned = true;
    std::size_t first = 0;
    for (const auto& f : tp->factors) {
      const std::size_t n = f.space().modes();
      std::size_t count = 0;
      for (std::size_t m = first; m < first + n; ++m) count += kept[m] ? 1 : 0;
      if (count == n) {
        factors.push_back(f);
      } else if (count != 0 || std::abs(f.trace() - 1.0) > 1e-15) {
        aligned = false;
        break;
      }
      first += n;
    }
    if (aligned) {
      if (factors.size() == 1) return factors.front();
      return DensityOperator::tensor_product(std::move(factors));
    }
  }

  Matrix dense = rho.to_dense(dense_limit);
  return DensityOperator::dense(std::move(reduced), kernels::partial_trace(dense, space, keep), rho.trace_normalized());
}

}  // namespace triqi
