#include "triqi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "triqi/errors.hpp"
#include "triqi/kernels.hpp"

namespace triqi {

QsEvaluator::QsEvaluator(const DensityOperator& rho0, const DensityOperator& rho1, const QsOptions& opts)
    : opts_(opts) {
  if (!(rho0.space() == rho1.space())) throw UsageError("Q_s: operators live on different spaces");
  if (opts.allow_structured) {
    auto f0 = rho0.framed();
    auto f1 = rho1.framed();
    if (f0 && f1 && f0->frame == f1->frame) {
      const DiagPlusLowRankRep* diag = nullptr;
      const DiagPlusLowRankRep* upd = nullptr;
      if (f0->terms.empty() && f1->terms.size() <= 1) {
        diag = &*f0;
        upd = &*f1;
        diag_is_rho0_ = true;
      } else if (f1->terms.empty() && f0->terms.size() <= 1) {
        diag = &*f1;
        upd = &*f0;
        diag_is_rho0_ = false;
      }
      if (diag != nullptr) {
        SecularRoot root = upd->terms.empty()
                               ? rank_one_update(upd->diagonal, 0.0, Vector::Zero(upd->diagonal.size()))
                               : rank_one_update(upd->diagonal, upd->terms[0].weight, upd->terms[0].vector);
        std::vector<bool> is_active(static_cast<std::size_t>(diag->diagonal.size()), false);
        for (auto k : root.active) is_active[k] = true;

        diag_top_ = diag->diagonal.size() > 0 ? diag->diagonal.maxCoeff() : 0.0;
        other_top_ = -std::numeric_limits<double>::infinity();
        std::map<std::pair<double, double>, double> pairs;
        for (Eigen::Index k = 0; k < diag->diagonal.size(); ++k) {
          if (is_active[static_cast<std::size_t>(k)]) continue;
          other_top_ = std::max(other_top_, root.base(k));
          pairs[{diag->diagonal(k), root.base(k)}] += 1.0;
        }
        if (root.active_eigenvalues.size() > 0) other_top_ = std::max(other_top_, root.active_eigenvalues.maxCoeff());
        for (const auto& [key, count] : pairs) {
          pair_diag_.push_back(key.first);
          pair_other_.push_back(key.second);
          pair_count_.push_back(count);
        }
        active_diag_.resize(static_cast<Eigen::Index>(root.active.size()));
        for (std::size_t a = 0; a < root.active.size(); ++a) {
          active_diag_(static_cast<Eigen::Index>(a)) = diag->diagonal(static_cast<Eigen::Index>(root.active[a]));
        }
        active_values_ = root.active_eigenvalues;
        active_weights_ = root.active_eigenvectors.cwiseAbs2();
        structured_ = true;
        return;
      }
    }
  }
  const std::size_t limit = opts.power.dense_limit;
  EigenSystem e0 = eigh(rho0.to_dense(limit), limit);
  EigenSystem e1 = eigh(rho1.to_dense(limit), limit);
  eig0_ = e0.eigenvalues;
  eig1_ = e1.eigenvalues;
  overlap_ = (e0.eigenvectors.adjoint() * e1.eigenvectors).cwiseAbs2();
}

double QsEvaluator::operator()(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw UsageError(fmt::format("Q_s: s = {} outside [0, 1]", s));
  return structured_ ? structured_value(s) : dense_value(s);
}

double QsEvaluator::structured_value(double s) const {
  const double ed = diag_is_rho0_ ? s : 1.0 - s;
  const double eo = 1.0 - ed;
  const PowerOptions& p = opts_.power;
  double total = 0.0;
  for (std::size_t i = 0; i < pair_diag_.size(); ++i) {
    const double a = support_power(pair_diag_[i], ed, diag_top_, p);
    if (a == 0.0) continue;
    total += pair_count_[i] * a * support_power(pair_other_[i], eo, other_top_, p);
  }
  if (active_values_.size() > 0) {
    const RealVector other = active_values_.unaryExpr([&](double x) { return support_power(x, eo, other_top_, p); });
    const RealVector diag = active_diag_.unaryExpr([&](double x) { return support_power(x, ed, diag_top_, p); });
    total += kernels::bilinear(diag, active_weights_, other, kernels::Exec::serial);
  }
  return total;
}

double QsEvaluator::dense_value(double s) const {
  return kernels::bilinear(support_power(eig0_, s, opts_.power), overlap_, support_power(eig1_, 1.0 - s, opts_.power));
}

double q_s(const DensityOperator& rho0, const DensityOperator& rho1, double s, const QsOptions& opts) {
  return QsEvaluator(rho0, rho1, opts)(s);
}

ChernoffResult chernoff(const QsEvaluator& q, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw UsageError("chernoff: tol must be > 0");
  ChernoffResult r;
  const int steps = static_cast<int>(std::lround(1.0 / kPrescanStep));
  for (int i = 0; i <= steps; ++i) {
    const double s = static_cast<double>(i) / steps;
    r.prescan.emplace_back(s, q(s));
  }
  r.min_second_difference = std::numeric_limits<double>::infinity();
  for (int i = 1; i < steps; ++i) {
    const double d2 = r.prescan[static_cast<std::size_t>(i - 1)].second - 2.0 * r.prescan[static_cast<std::size_t>(i)].second +
                      r.prescan[static_cast<std::size_t>(i + 1)].second;
    r.min_second_difference = std::min(r.min_second_difference, d2);
  }
  r.convexity_certified = r.min_second_difference >= -kConvexitySlack;

  std::size_t best = 0;
  for (std::size_t i = 1; i < r.prescan.size(); ++i) {
    if (r.prescan[i].second < r.prescan[best].second) best = i;
  }
  double a = std::max(0.0, r.prescan[best].first - kPrescanStep);
  double b = std::min(1.0, r.prescan[best].first + kPrescanStep);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = q(c);
  double fd = q(d);
  while (b - a > tol) {
    if (++r.iterations > max_iterations) {
      throw NumericError(fmt::format("chernoff: golden section did not converge in {} iterations; last bracket "
                                     "[{:.17g}, {:.17g}]",
                                     max_iterations, a, b));
    }
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = q(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = q(d);
    }
  }
  r.bracket_lo = a;
  r.bracket_hi = b;
  const double mid = 0.5 * (a + b);
  std::vector<std::pair<double, double>> candidates = {{mid, q(mid)}, {c, fc}, {d, fd}};
  candidates.insert(candidates.end(), r.prescan.begin(), r.prescan.end());
  r.s_star = candidates.front().first;
  r.q_star = candidates.front().second;
  for (const auto& [s, v] : candidates) {
    if (v < r.q_star) {
      r.s_star = s;
      r.q_star = v;
    }
  }
  r.exponent = std::max(0.0, -std::log(r.q_star));
  return r;
}

ChernoffResult chernoff(const DensityOperator& rho0, const DensityOperator& rho1, double tol, const QsOptions& opts) {
  return chernoff(QsEvaluator(rho0, rho1, opts), tol);
}

double bhattacharyya_from_q(double q_half, double shots) {
  if (!(shots >= 1.0)) throw UsageError("bhattacharyya: shot count must be >= 1");
  return 0.5 * std::pow(q_half, shots);
}

double bhattacharyya_bound(const DensityOperator& rho0, const DensityOperator& rho1, double shots,
                           const QsOptions& opts) {
  if (!(shots >= 1.0)) throw UsageError("bhattacharyya: shot count must be >= 1");
  return bhattacharyya_from_q(q_s(rho0, rho1, 0.5, opts), shots);
}

double povm_error(const DensityOperator& rho0, const DensityOperator& rho1, const Matrix& e0, const Matrix& e1,
                  double pi0, std::size_t dense_limit) {
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw UsageError("povm_error: pi0 must lie in [0, 1]");
  if (!(rho0.space() == rho1.space())) throw UsageError("povm_error: operators live on different spaces");
  const auto n = static_cast<Eigen::Index>(rho0.space().total_dim());
  if (e0.rows() != n || e0.cols() != n || e1.rows() != n || e1.cols() != n) {
    throw UsageError("povm_error: POVM elements do not match the space");
  }
  const double completeness = (e0 + e1 - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (completeness > 1e-10) {
    throw UsageError(fmt::format("povm_error: E0 + E1 differs from the identity by {:.3e}", completeness));
  }
  for (const Matrix* e : {&e0, &e1}) {
    if (eigh(*e, dense_limit).eigenvalues.minCoeff() < -1e-10) throw UsageError("povm_error: POVM element is not PSD");
  }
  const Matrix r0 = rho0.to_dense(dense_limit);
  const Matrix r1 = rho1.to_dense(dense_limit);
  return pi0 * (e1 * r0).trace().real() + (1.0 - pi0) * (e0 * r1).trace().real();
}

double helstrom_optimum(const DensityOperator& rho0, const DensityOperator& rho1, double pi0, std::size_t dense_limit) {
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw UsageError("helstrom: pi0 must lie in [0, 1]");
  if (!(rho0.space() == rho1.space())) throw UsageError("helstrom: operators live on different spaces");
  const double pi1 = 1.0 - pi0;
  auto f0 = rho0.framed();
  auto f1 = rho1.framed();
  if (f0 && f1 && f0->frame == f1->frame && f0->terms.size() + f1->terms.size() <= 1) {
    const RealVector d = pi1 * f1->diagonal - pi0 * f0->diagonal;
    double weight = 0.0;
    Vector v = Vector::Zero(d.size());
    if (!f1->terms.empty()) {
      weight = pi1 * f1->terms[0].weight;
      v = f1->terms[0].vector;
    } else if (!f0->terms.empty()) {
      weight = -pi0 * f0->terms[0].weight;
      v = f0->terms[0].vector;
    }
    const SecularRoot root = rank_one_update(d, weight, v);
    std::vector<bool> is_active(static_cast<std::size_t>(d.size()), false);
    for (auto k : root.active) is_active[k] = true;
    double norm = 0.0;
    for (Eigen::Index k = 0; k < d.size(); ++k) {
      if (!is_active[static_cast<std::size_t>(k)]) norm += std::abs(d(k));
    }
    norm += root.active_eigenvalues.cwiseAbs().sum();
    return 0.5 * (1.0 - norm);
  }
  const Matrix diff = pi1 * rho1.to_dense(dense_limit) - pi0 * rho0.to_dense(dense_limit);
  return 0.5 * (1.0 - eigh(diff, dense_limit).eigenvalues.cwiseAbs().sum());
}

ClosedFormBound paper_bound_3gamma(double eta, double nbar, double shots, double theta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("paper_bound_3gamma: eta must lie in [0, 1]");
  if (!(nbar > 0.0)) throw UsageError("paper_bound_3gamma: nbar must be > 0");
  if (!(shots >= 0.0)) throw UsageError("paper_bound_3gamma: shot count must be >= 0");
  ClosedFormBound b;
  b.exponent = shots * std::sqrt(eta) / nbar;
  b.value = 0.5 * std::exp(-b.exponent);
  if (nbar < kScaleSeparation) b.warnings.emplace_back("nbar >> 1 violated");
  if (kScaleSeparation * eta > 1.0) b.warnings.emplace_back("eta << 1 violated");
  if (kScaleSeparation * theta > 1.0) b.warnings.emplace_back("theta << 1 violated");
  if (eta * nbar * nbar < kScaleSeparation) b.warnings.emplace_back("1/nbar^2 << eta violated");
  b.note = "independent of the signal mean photon number per mode";
  return b;
}

ClosedFormBound paper_bound_2gamma(double kappa, double ns, double nbar, double shots) {
  if (!(kappa >= 0.0)) throw UsageError("paper_bound_2gamma: kappa must be >= 0");
  if (!(ns >= 0.0)) throw UsageError("paper_bound_2gamma: N_S must be >= 0");
  if (!(nbar > 0.0)) throw UsageError("paper_bound_2gamma: nbar must be > 0");
  if (!(shots >= 0.0)) throw UsageError("paper_bound_2gamma: shot count must be >= 0");
  ClosedFormBound b;
  b.exponent = shots * kappa * ns / nbar;
  b.value = 0.5 * std::exp(-b.exponent);
  if (!(kappa > 0.0) || kScaleSeparation * kappa > 1.0) b.warnings.emplace_back("0 < kappa << 1 violated");
  if (kScaleSeparation * ns > 1.0) b.warnings.emplace_back("N_S << 1 violated");
  b.note = "stated validity reads N_S << 1 and N_B << 1 while the comparison assumes nbar >> 1; evaluated as printed";
  return b;
}

double advantage_ratio(double ns) {
  if (!(ns > 0.0 && ns < 1.0)) throw UsageError(fmt::format("advantage_ratio: N_S = {} outside (0, 1)", ns));
  constexpr double eta = 0.01;
  constexpr double nbar = 100.0;
  const double e3 = paper_bound_3gamma(eta, nbar, 1.0).exponent;
  const double e2 = paper_bound_2gamma(std::sqrt(eta), ns, nbar, 1.0).exponent;
  return e3 / e2;
}

BoundReport bound_report(const HypothesisPair& pair, double tol) {
  const ProtocolParams& p = pair.params;
  BoundReport r;
  r.params = p;
  r.regime = pair.flags;
  r.shots = p.shots;

  QsOptions opts;
  opts.power.dense_limit = p.dense_limit;
  const QsEvaluator q(pair.rho0, pair.rho1, opts);
  const ChernoffResult c = chernoff(q, tol);
  r.q_curve = c.prescan;
  r.s_star = c.s_star;
  r.q_star = c.q_star;
  r.exponent = c.exponent;
  r.convexity_certified = c.convexity_certified;
  r.structured = q.structured();
  r.q_half = q(0.5);
  r.q_zero = c.prescan.front().second;
  r.q_one = c.prescan.back().second;
  r.helstrom = helstrom_optimum(pair.rho0, pair.rho1, 0.5, p.dense_limit);

  const ClosedFormBound p3 = paper_bound_3gamma(p.eta, p.nbar(), p.shots, p.theta);
  const ClosedFormBound p2 = paper_bound_2gamma(p.kappa_value(), p.ns_value(), p.nbar(), p.shots);
  r.closed_form_3g = p3.value;
  r.closed_form_2g = p2.value;
  const double ns = p.ns_value();
  if (ns > 0.0 && ns < 1.0) {
    r.ratio = advantage_ratio(ns);
  } else {
    r.ratio = std::numeric_limits<double>::quiet_NaN();
    r.warnings.emplace_back("N_S outside (0, 1): no advantage ratio");
  }
  for (const auto& v : pair.flags.violations()) r.warnings.push_back(v);
  if (!c.convexity_certified) r.warnings.emplace_back("Q_s prescan not convex; minimum refined locally only");
  r.notes.push_back(p3.note);
  r.notes.push_back(p2.note);
  if (p.background == BackgroundVariant::flat) {
    r.notes.emplace_back("flat background: uniform over round(nbar) levels per mode; the (1 + alpha(nbar)/nbar) "
                         "substitution factor is taken as 1");
  }
  if (p.nbar2 != p.nbar3) r.notes.emplace_back("closed forms use nbar = (nbar2 + nbar3) / 2");
  return r;
}

}  // namespace triqi
