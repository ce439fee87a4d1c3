#include "triqi/fock.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "triqi/errors.hpp"

namespace triqi {

SpaceDescriptor::SpaceDescriptor(std::vector<std::size_t> cutoffs) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw UsageError("space needs at least one mode");
  strides_.assign(cutoffs_.size(), 1);
  total_dim_ = 1;
  for (std::size_t m = cutoffs_.size(); m-- > 0;) {
    if (cutoffs_[m] == 0) throw UsageError(fmt::format("mode {} has zero cutoff", m));
    strides_[m] = total_dim_;
    if (total_dim_ > std::numeric_limits<std::size_t>::max() / cutoffs_[m]) {
      throw UsageError("space dimension overflows size_t");
    }
    total_dim_ *= cutoffs_[m];
  }
}

SpaceDescriptor SpaceDescriptor::build(std::size_t modes, std::span<const std::size_t> cutoffs) {
  if (modes == 0) throw UsageError("space needs at least one mode");
  if (cutoffs.size() != modes) {
    throw UsageError(fmt::format("{} modes but {} cutoffs", modes, cutoffs.size()));
  }
  return SpaceDescriptor(std::vector<std::size_t>(cutoffs.begin(), cutoffs.end()));
}

std::size_t SpaceDescriptor::cutoff(std::size_t mode) const {
  if (mode >= modes()) throw UsageError(fmt::format("mode {} out of range ({} modes)", mode, modes()));
  return cutoffs_[mode];
}

std::size_t SpaceDescriptor::stride(std::size_t mode) const {
  if (mode >= modes()) throw UsageError(fmt::format("mode {} out of range ({} modes)", mode, modes()));
  return strides_[mode];
}

std::size_t SpaceDescriptor::index(std::span<const std::size_t> occupation) const {
  if (occupation.size() != modes()) throw UsageError("occupation tuple has wrong length");
  std::size_t idx = 0;
  for (std::size_t m = 0; m < modes(); ++m) {
    if (occupation[m] >= cutoffs_[m]) {
      throw UsageError(fmt::format("level {} on mode {} exceeds cutoff {}", occupation[m], m, cutoffs_[m]));
    }
    idx += occupation[m] * strides_[m];
  }
  return idx;
}

std::vector<std::size_t> SpaceDescriptor::occupation(std::size_t index) const {
  if (index >= total_dim_) throw UsageError(fmt::format("basis index {} out of range", index));
  std::vector<std::size_t> occ(modes());
  for (std::size_t m = 0; m < modes(); ++m) occ[m] = level(index, m);
  return occ;
}

SpaceDescriptor SpaceDescriptor::subspace(std::span<const std::size_t> modes) const {
  std::vector<std::size_t> cuts;
  cuts.reserve(modes.size());
  for (auto m : modes) cuts.push_back(cutoff(m));
  return SpaceDescriptor(std::move(cuts));
}

SpaceDescriptor SpaceDescriptor::concat(const SpaceDescriptor& other) const {
  std::vector<std::size_t> cuts = cutoffs_;
  cuts.insert(cuts.end(), other.cutoffs_.begin(), other.cutoffs_.end());
  return SpaceDescriptor(std::move(cuts));
}

void SpaceDescriptor::require_dense(std::size_t dense_limit) const {
  if (total_dim_ > dense_limit) {
    throw NumericError(fmt::format("dense materialization of dimension {} exceeds the dense limit {}",
                                   total_dim_, dense_limit));
  }
}

Ket::Ket(SpaceDescriptor space, Vector amplitudes) : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != space_.total_dim()) {
    throw UsageError(fmt::format("ket has {} amplitudes, space dimension is {}", amplitudes_.size(),
                                 space_.total_dim()));
  }
  input_norm_ = amplitudes_.norm();
  if (!(input_norm_ > 0.0) || !std::isfinite(input_norm_)) throw NumericError("ket has zero or non-finite norm");
  amplitudes_ /= input_norm_;
}

Ket Ket::basis(SpaceDescriptor space, std::span<const std::size_t> occupation) {
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(space.total_dim()));
  amps(static_cast<Eigen::Index>(space.index(occupation))) = 1.0;
  return Ket(std::move(space), std::move(amps));
}

Complex Ket::amplitude(std::span<const std::size_t> occupation) const {
  return amplitudes_(static_cast<Eigen::Index>(space_.index(occupation)));
}

SparseMatrix annihilation(const SpaceDescriptor& space, std::size_t mode) {
  const std::size_t stride = space.stride(mode);
  const auto dim = static_cast<Eigen::Index>(space.total_dim());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(space.total_dim());
  for (std::size_t i = 0; i < space.total_dim(); ++i) {
    const std::size_t n = space.level(i, mode);
    if (n == 0) continue;
    entries.emplace_back(static_cast<Eigen::Index>(i - stride), static_cast<Eigen::Index>(i),
                         std::sqrt(static_cast<double>(n)));
  }
  SparseMatrix a(dim, dim);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

SparseMatrix creation(const SpaceDescriptor& space, std::size_t mode) {
  return SparseMatrix(annihilation(space, mode).transpose());
}

SparseMatrix number_operator(const SpaceDescriptor& space, std::size_t mode) {
  SparseMatrix n = creation(space, mode) * annihilation(space, mode);
  n.prune(0.0);
  return n;
}

Ket tensor_ket(std::span<const Ket> factors) {
  if (factors.empty()) throw UsageError("tensor_ket needs at least one factor");
  SpaceDescriptor space = factors.front().space();
  Vector amps = factors.front().amplitudes();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const Vector& next = factors[f].amplitudes();
    Vector out(amps.size() * next.size());
    for (Eigen::Index i = 0; i < amps.size(); ++i) out.segment(i * next.size(), next.size()) = amps(i) * next;
    amps = std::move(out);
    space = space.concat(factors[f].space());
  }
  return Ket(std::move(space), std::move(amps));
}

}  // namespace triqi
