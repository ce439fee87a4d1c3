#include "triqi/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "triqi/errors.hpp"

namespace triqi {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Solves diag(d) + weight z z^T on the active block, weight > 0, z > 0.
// Returns eigenvalues (unsorted) and real eigenvectors in sorted-active
// coordinates; `order` maps sorted position -> active position.
struct RealBlock {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  std::size_t deflated = 0;
  std::size_t roots = 0;
};

RealBlock solve_block(const std::vector<double>& d, const std::vector<double>& z, double weight,
                      const SecularOptions& opts) {
  const std::size_t m = d.size();
  RealBlock out;
  out.values.resize(m);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<double> zz = z;

  // Givens deflation of repeated diagonal entries; each group keeps one
  // representative carrying the combined weight.
  std::vector<std::size_t> reps;
  std::vector<std::size_t> deflated;
  for (std::size_t k = 0; k < m; ++k) {
    if (!reps.empty()) {
      const std::size_t r = reps.back();
      const double scale = std::max(std::abs(d[r]), std::abs(d[k]));
      if (std::abs(d[k] - d[r]) <= opts.deflation_gap * scale) {
        const double h = std::hypot(zz[r], zz[k]);
        const double c = zz[r] / h;
        const double s = zz[k] / h;
        const Eigen::VectorXd br = basis.col(static_cast<Eigen::Index>(r));
        const Eigen::VectorXd bk = basis.col(static_cast<Eigen::Index>(k));
        basis.col(static_cast<Eigen::Index>(r)) = c * br + s * bk;
        basis.col(static_cast<Eigen::Index>(k)) = -s * br + c * bk;
        zz[r] = h;
        zz[k] = 0.0;
        deflated.push_back(k);
        continue;
      }
    }
    reps.push_back(k);
  }

  out.vectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::size_t col = 0;
  for (auto k : deflated) {
    out.values[col] = d[k];
    out.vectors.col(static_cast<Eigen::Index>(col)) = basis.col(static_cast<Eigen::Index>(k));
    ++col;
  }
  out.deflated = deflated.size();

  const std::size_t r = reps.size();
  RealVector dr(static_cast<Eigen::Index>(r));
  RealVector z2(static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < r; ++i) {
    dr(static_cast<Eigen::Index>(i)) = d[reps[i]];
    z2(static_cast<Eigen::Index>(i)) = zz[reps[i]] * zz[reps[i]];
  }
  std::vector<kernels::SecularRootValue> roots(r);
  kernels::secular_roots(dr, z2, weight, roots, opts.max_iterations, opts.exec);
  for (std::size_t i = 0; i < r; ++i) {
    if (!roots[i].converged) {
      throw NumericError(fmt::format("secular root {} did not converge after {} iterations; bracket [{:.17g}, {:.17g}] "
                                     "around d[{}] = {:.17g}",
                                     i, roots[i].iterations, roots[i].bracket_lo, roots[i].bracket_hi,
                                     roots[i].origin, dr(static_cast<Eigen::Index>(roots[i].origin))));
    }
  }
  // lambda_j - d_i with the root stored relative to its origin pole.
  auto shifted = [&](std::size_t j, std::size_t i) {
    return (dr(static_cast<Eigen::Index>(roots[j].origin)) - dr(static_cast<Eigen::Index>(i))) + roots[j].offset;
  };

  // Lowner: recompute z so that the computed roots are exact eigenvalues of a
  // nearby problem, which keeps the eigenvectors orthogonal.
  std::vector<double> zhat(r);
  for (std::size_t i = 0; i < r; ++i) {
    double prod = shifted(i, i) / weight;
    for (std::size_t j = 0; j < r; ++j) {
      if (j == i) continue;
      prod *= shifted(j, i) / (dr(static_cast<Eigen::Index>(j)) - dr(static_cast<Eigen::Index>(i)));
    }
    zhat[i] = std::sqrt(std::max(prod, 0.0));
  }

  for (std::size_t j = 0; j < r; ++j) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < r; ++i) u(static_cast<Eigen::Index>(i)) = zhat[i] / -shifted(j, i);
    const double n = u.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw NumericError(fmt::format("secular eigenvector {} degenerate (norm {})", j, n));
    }
    u /= n;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < r; ++i) v += u(static_cast<Eigen::Index>(i)) * basis.col(static_cast<Eigen::Index>(reps[i]));
    out.values[col] = dr(static_cast<Eigen::Index>(roots[j].origin)) + roots[j].offset;
    out.vectors.col(static_cast<Eigen::Index>(col)) = v;
    ++col;
  }
  out.roots = r;
  return out;
}

}  // namespace

RealVector SecularRoot::eigenvalues() const {
  RealVector all = base;
  for (auto k : active) all(static_cast<Eigen::Index>(k)) = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(base.size()));
  for (Eigen::Index i = 0; i < all.size(); ++i) {
    if (!std::isnan(all(i))) vals.push_back(all(i));
  }
  for (Eigen::Index i = 0; i < active_eigenvalues.size(); ++i) vals.push_back(active_eigenvalues(i));
  std::sort(vals.begin(), vals.end());
  return Eigen::Map<RealVector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

DiagPlusLowRankRep SecularRoot::apply(const std::function<double(double)>& f, const LocalFrame& frame) const {
  DiagPlusLowRankRep rep;
  rep.frame = frame;
  rep.diagonal = base.unaryExpr(f);
  for (auto k : active) rep.diagonal(static_cast<Eigen::Index>(k)) = 0.0;
  for (Eigen::Index j = 0; j < active_eigenvalues.size(); ++j) {
    const double w = f(active_eigenvalues(j));
    if (w == 0.0) continue;
    Vector v = Vector::Zero(base.size());
    for (std::size_t a = 0; a < active.size(); ++a) {
      v(static_cast<Eigen::Index>(active[a])) = active_eigenvectors(static_cast<Eigen::Index>(a), j);
    }
    rep.terms.push_back(RankOneTerm{w, std::move(v)});
  }
  return rep;
}

SecularRoot rank_one_update(const RealVector& base, double weight, const Vector& v, const SecularOptions& opts) {
  if (v.size() != base.size()) throw UsageError("rank_one_update: vector and diagonal differ in size");
  SecularRoot out;
  out.base = base;
  out.weight = weight;
  out.update = v;
  out.active_eigenvalues.resize(0);
  out.active_eigenvectors.resize(0, 0);
  if (weight == 0.0 || base.size() == 0) return out;

  // A negative weight is the positive problem for -diag(base), negated.
  const double sign = weight > 0.0 ? 1.0 : -1.0;
  const double w = std::abs(weight);
  const double vnorm = v.norm();
  const double scale = std::max(base.cwiseAbs().maxCoeff(), w * vnorm * vnorm);
  const double ztol = 8.0 * kEps * scale;

  std::vector<std::size_t> active;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (w * std::abs(v(k)) * vnorm > ztol) active.push_back(static_cast<std::size_t>(k));
  }
  out.active = active;
  if (active.empty()) return out;

  // Sort the active block by the (sign-adjusted) diagonal; ties by index.
  std::vector<std::size_t> order(active.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sign * base(static_cast<Eigen::Index>(active[a])) < sign * base(static_cast<Eigen::Index>(active[b]));
  });
  std::vector<double> d(active.size());
  std::vector<double> z(active.size());
  std::vector<Complex> phase(active.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    const Complex vk = v(static_cast<Eigen::Index>(active[order[p]]));
    d[p] = sign * base(static_cast<Eigen::Index>(active[order[p]]));
    z[p] = std::abs(vk);
    phase[p] = vk / z[p];
  }

  RealBlock block = solve_block(d, z, w, opts);
  out.deflated_repeated = block.deflated;
  out.secular_roots = block.roots;

  const std::size_t m = active.size();
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return sign * block.values[a] < sign * block.values[b]; });
  out.active_eigenvalues.resize(static_cast<Eigen::Index>(m));
  out.active_eigenvectors = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t src = perm[c];
    out.active_eigenvalues(static_cast<Eigen::Index>(c)) = sign * block.values[src];
    for (std::size_t p = 0; p < m; ++p) {
      out.active_eigenvectors(static_cast<Eigen::Index>(order[p]), static_cast<Eigen::Index>(c)) =
          phase[p] * block.vectors(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(src));
    }
  }
  return out;
}

SecularRoot sqrt_diag_plus_rank_one(const RealVector& d, double eta, const Vector& v, const SecularOptions& opts) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("sqrt_diag_plus_rank_one: eta must lie in [0, 1]");
  if (d.size() > 0 && d.minCoeff() < 0.0) throw UsageError("sqrt_diag_plus_rank_one: diagonal must be nonnegative");
  if (std::abs(v.norm() - 1.0) > 1e-12) throw UsageError("sqrt_diag_plus_rank_one: update vector must be unit norm");
  return rank_one_update((1.0 - eta) * d, eta, v, opts);
}

DiagPlusLowRankRep principal_sqrt(const SecularRoot& root) {
  auto f = [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; };
  return root.apply(f, LocalFrame{});
}

}  // namespace triqi
