#include "triqi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "triqi/errors.hpp"

namespace triqi::kernels {
namespace {

double secular_function(const RealVector& d, const RealVector& z2, double weight, std::size_t origin, double tau) {
  const double base = d(static_cast<Eigen::Index>(origin));
  double acc = 0.0;
  for (Eigen::Index j = 0; j < d.size(); ++j) acc += z2(j) / ((d(j) - base) - tau);
  return 1.0 + weight * acc;
}

SecularRootValue solve_one(const RealVector& d, const RealVector& z2, double weight, std::size_t i,
                           int max_iterations) {
  const auto m = static_cast<std::size_t>(d.size());
  SecularRootValue root;
  double lo = 0.0;
  double hi = 0.0;
  if (i + 1 < m) {
    const double gap = d(static_cast<Eigen::Index>(i + 1)) - d(static_cast<Eigen::Index>(i));
    const double mid = 0.5 * gap;
    if (secular_function(d, z2, weight, i, mid) >= 0.0) {
      root.origin = i;
      lo = 0.0;
      hi = mid;
    } else {
      root.origin = i + 1;
      lo = -mid;
      hi = 0.0;
    }
  } else {
    root.origin = i;
    lo = 0.0;
    hi = weight * z2.sum();
  }
  // f is increasing in tau between the poles: negative left of the root.
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (secular_function(d, z2, weight, root.origin, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  root.iterations = it;
  root.offset = 0.5 * (lo + hi);
  root.bracket_lo = lo;
  root.bracket_hi = hi;
  root.converged = it < max_iterations;
  return root;
}

}  // namespace

Complex trace_product(const Matrix& a, const Matrix& b, Exec exec) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw UsageError("trace_product: dimension mismatch");
  }
  const Eigen::Index n = a.rows();
  std::vector<Complex> partial(static_cast<std::size_t>(n));
  // Tr(AB) = sum_i sum_j A_ij B_ji; row i of A against column i of B.
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) partial[static_cast<std::size_t>(i)] = a.row(i).transpose().cwiseProduct(b.col(i)).sum();
  } else {
    for (Eigen::Index i = 0; i < n; ++i) partial[static_cast<std::size_t>(i)] = a.row(i).transpose().cwiseProduct(b.col(i)).sum();
  }
  Complex total = 0.0;
  for (const auto& p : partial) total += p;
  return total;
}

double bilinear(const RealVector& a, const Eigen::MatrixXd& w, const RealVector& b, Exec exec) {
  if (w.rows() != a.size() || w.cols() != b.size()) throw UsageError("bilinear: dimension mismatch");
  const Eigen::Index n = a.size();
  std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
  auto row = [&](Eigen::Index i) {
    if (a(i) == 0.0) return 0.0;
    return a(i) * w.row(i).dot(b);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) partial[static_cast<std::size_t>(i)] = row(i);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) partial[static_cast<std::size_t>(i)] = row(i);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void apply_mode(Matrix& block, const SpaceDescriptor& space, std::size_t mode, const Matrix& u, Exec exec) {
  const std::size_t c = space.cutoff(mode);
  if (static_cast<std::size_t>(u.rows()) != c || static_cast<std::size_t>(u.cols()) != c) {
    throw UsageError("apply_mode: local operator does not match the mode cutoff");
  }
  if (static_cast<std::size_t>(block.rows()) != space.total_dim()) throw UsageError("apply_mode: row count mismatch");
  const std::size_t stride = space.stride(mode);
  const std::size_t outer = space.total_dim() / (c * stride);
  const auto fibers = static_cast<std::ptrdiff_t>(outer * stride);
  const Eigen::Index cols = block.cols();
  auto fiber = [&](std::ptrdiff_t f, Vector& in, Vector& out) {
    const std::size_t o = static_cast<std::size_t>(f) / stride;
    const std::size_t r = static_cast<std::size_t>(f) % stride;
    const std::size_t base = o * c * stride + r;
    for (Eigen::Index col = 0; col < cols; ++col) {
      for (std::size_t k = 0; k < c; ++k) in(static_cast<Eigen::Index>(k)) = block(static_cast<Eigen::Index>(base + k * stride), col);
      out.noalias() = u * in;
      for (std::size_t k = 0; k < c; ++k) block(static_cast<Eigen::Index>(base + k * stride), col) = out(static_cast<Eigen::Index>(k));
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      Vector in(static_cast<Eigen::Index>(c)), out(static_cast<Eigen::Index>(c));
#pragma omp for schedule(static)
      for (std::ptrdiff_t f = 0; f < fibers; ++f) fiber(f, in, out);
    }
  } else {
    Vector in(static_cast<Eigen::Index>(c)), out(static_cast<Eigen::Index>(c));
    for (std::ptrdiff_t f = 0; f < fibers; ++f) fiber(f, in, out);
  }
}

Matrix partial_trace(const Matrix& rho, const SpaceDescriptor& space, std::span<const std::size_t> keep, Exec exec) {
  if (static_cast<std::size_t>(rho.rows()) != space.total_dim() || rho.rows() != rho.cols()) {
    throw UsageError("partial_trace: matrix does not match the space");
  }
  std::vector<bool> kept(space.modes(), false);
  for (auto m : keep) kept[m] = true;
  std::vector<std::size_t> traced;
  for (std::size_t m = 0; m < space.modes(); ++m) {
    if (!kept[m]) traced.push_back(m);
  }
  // Full-space offsets of every kept tuple and every traced tuple.
  auto offsets = [&](const std::vector<std::size_t>& modes) {
    std::vector<std::size_t> off{0};
    for (auto m : modes) {
      std::vector<std::size_t> next;
      next.reserve(off.size() * space.cutoff(m));
      for (auto o : off) {
        for (std::size_t n = 0; n < space.cutoff(m); ++n) next.push_back(o + n * space.stride(m));
      }
      off = std::move(next);
    }
    return off;
  };
  const std::vector<std::size_t> keep_modes(keep.begin(), keep.end());
  const auto off_keep = offsets(keep_modes);
  const auto off_trace = offsets(traced);
  const auto dk = static_cast<std::ptrdiff_t>(off_keep.size());
  Matrix out(dk, dk);
  auto row = [&](std::ptrdiff_t r) {
    for (std::ptrdiff_t col = 0; col < dk; ++col) {
      Complex acc = 0.0;
      for (auto t : off_trace) {
        acc += rho(static_cast<Eigen::Index>(off_keep[static_cast<std::size_t>(r)] + t),
                   static_cast<Eigen::Index>(off_keep[static_cast<std::size_t>(col)] + t));
      }
      out(r, col) = acc;
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < dk; ++r) row(r);
  } else {
    for (std::ptrdiff_t r = 0; r < dk; ++r) row(r);
  }
  return out;
}

void secular_roots(const RealVector& d, const RealVector& z2, double weight, std::span<SecularRootValue> out,
                   int max_iterations, Exec exec) {
  const auto m = static_cast<std::ptrdiff_t>(d.size());
  if (z2.size() != d.size() || static_cast<std::ptrdiff_t>(out.size()) != m) {
    throw UsageError("secular_roots: size mismatch");
  }
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      out[static_cast<std::size_t>(i)] = solve_one(d, z2, weight, static_cast<std::size_t>(i), max_iterations);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      out[static_cast<std::size_t>(i)] = solve_one(d, z2, weight, static_cast<std::size_t>(i), max_iterations);
    }
  }
}

}  // namespace triqi::kernels
