#include "triqi/appendix.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "triqi/bounds.hpp"
#include "triqi/errors.hpp"
#include "triqi/spectral.hpp"

namespace triqi {

std::string_view to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::matches_paper_order:
      return "matches_paper_order";
    case Verdict::deviates:
      return "deviates";
    case Verdict::regime_violated:
      return "regime_violated";
  }
  return "?";
}

double appendix_trace_formula(double eta, double nbar) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("appendix_trace_formula: eta must lie in [0, 1]");
  if (!(nbar > 0.0)) throw UsageError("appendix_trace_formula: nbar must be > 0");
  return 1.0 - std::sqrt(eta) / nbar;
}

namespace {

const RealVector& diagonal_values(const DensityOperator& rho) {
  const auto* d = std::get_if<DiagonalRep>(&rho.rep());
  if (d == nullptr) throw NumericError("background factor is not diagonal");
  return d->values;
}

}  // namespace

PaperSignTerms paper_sign_terms(const ProtocolParams& params, const SignChoice& signs) {
  params.validate();
  PaperSignTerms t;
  t.warnings = params.regime().violations();

  const auto cut = params.resolved_cutoffs();
  const DensityOperator bg = background_state(params);
  const auto& factors = std::get<TensorProductRep>(bg.rep()).factors;
  const RealVector& p2 = diagonal_values(factors[0]);
  const RealVector& p3 = diagonal_values(factors[1]);

  const DensityOperator idler = idler_state(params.theta, params.idler, cut[0]);
  const Matrix sigma = idler.to_dense();
  const EigenSystem es = eigh(sigma);
  const RealVector root_values = support_power(es.eigenvalues, 0.5);
  const Matrix sigma_root = es.eigenvectors * root_values.asDiagonal() * es.eigenvectors.adjoint();

  const double s0 = sign_value(signs.rho0);
  const double s_bg = sign_value(signs.background_terms);
  const double s_psi = sign_value(signs.psi_term);

  // Tr[R R] = Tr[rho0] = Tr[sigma] * sum_j p2_j * sum_k p3_k.
  t.background_line = s0 * s_bg * sigma.trace().real() * p2.sum() * p3.sum();

  // <Psi|R|Psi>: B is diagonal, so only |000> and |111> diagonal entries survive.
  const double c = std::cos(params.theta);
  const double s = std::sin(params.theta);
  t.psi_overlap = c * c * sigma_root(0, 0).real() * std::sqrt(p2(0) * p3(0)) +
                  s * s * sigma_root(1, 1).real() * std::sqrt(p2(1) * p3(1));
  t.psi_cross_term = s0 * s_psi * std::sqrt(params.eta) * t.psi_overlap;

  double low = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) low += p2(j) * p3(k);
  }
  t.low_block_correction = -s0 * s_bg * low * sigma.trace().real();
  t.total = t.background_line + t.psi_cross_term;
  return t;
}

double paper_sign_trace(const ProtocolParams& params, const SignChoice& signs) {
  return paper_sign_terms(params, signs).total;
}

double principal_trace(const ProtocolParams& params) {
  const HypothesisPair pair = build_hypotheses(params);
  QsOptions opts;
  opts.power.dense_limit = params.dense_limit;
  return QsEvaluator(pair.rho0, pair.rho1, opts)(0.5);
}

double principal_trace_dense(const ProtocolParams& params) {
  const HypothesisPair pair = build_hypotheses(params);
  QsOptions opts;
  opts.power.dense_limit = params.dense_limit;
  opts.allow_structured = false;
  return QsEvaluator(pair.rho0, pair.rho1, opts)(0.5);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class F>
double guarded(std::vector<std::string>& incomplete, std::string_view what, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    incomplete.push_back(fmt::format("{}: {}", what, e.what()));
    return kNaN;
  }
}

}  // namespace

TraceAudit audit(const ProtocolParams& params, const SignChoice& signs) {
  TraceAudit a;
  a.params = params;
  a.signs = signs;
  try {
    params.validate();
  } catch (const std::exception& e) {
    a.incomplete.emplace_back(fmt::format("params: {}", e.what()));
    a.analytic_paper = a.paper_sign_numeric = a.principal_numeric = kNaN;
    a.verdict = Verdict::deviates;
    return a;
  }
  a.flags = params.regime();
  const double nbar = params.nbar();
  const double theta = params.theta;
  const double sqrt_eta = std::sqrt(params.eta);

  a.analytic_paper = appendix_trace_formula(params.eta, nbar);
  a.paper_sign_numeric = guarded(a.incomplete, "paper_sign_trace", [&] {
    a.paper_terms = paper_sign_terms(params, signs);
    return a.paper_terms.total;
  });
  a.principal_numeric = guarded(a.incomplete, "principal_trace", [&] { return principal_trace(params); });

  a.error_terms = {{"theta^2 sqrt(eta)", theta * theta * sqrt_eta},
                   {"1/nbar^2", 1.0 / (nbar * nbar)},
                   {"theta^3", theta * theta * theta}};
  a.tolerance = kAuditTolFactor * (theta * theta * sqrt_eta + 1.0 / (nbar * nbar));
  a.paper_sign_deviation = std::abs(a.paper_sign_numeric - a.analytic_paper);
  a.principal_gap = a.principal_numeric - a.analytic_paper;
  a.warnings = a.flags.violations();

  a.gap_order = kNaN;
  a.gap_coefficient = kNaN;
  if (params.eta > 0.0) {
    // Least-squares slope of log|gap| against log(eta) over eta * {1/4, 1/2, 1}.
    const double scales[] = {0.25, 0.5, 1.0};
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (double f : scales) {
      ProtocolParams q = params;
      q.eta = params.eta * f;
      const double gap = guarded(a.incomplete, fmt::format("gap fit at eta={}", q.eta), [&] {
        return std::abs(principal_trace(q) - appendix_trace_formula(q.eta, nbar));
      });
      if (!(gap > 0.0) || !std::isfinite(gap)) continue;
      const double x = std::log(q.eta);
      const double y = std::log(gap);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n >= 2) {
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      a.gap_order = slope;
      a.gap_coefficient = std::exp((sy - slope * sx) / n);
    } else {
      a.incomplete.emplace_back("gap fit: fewer than two usable points");
    }
  }

  if (params.eta == 0.0) {
    a.verdict = Verdict::matches_paper_order;
  } else if (!a.flags.all()) {
    a.verdict = Verdict::regime_violated;
  } else if (a.paper_sign_deviation <= a.tolerance) {
    a.verdict = Verdict::matches_paper_order;
  } else {
    a.verdict = Verdict::deviates;
  }
  return a;
}

ProtocolParams appendix_regime_point() {
  ProtocolParams p;
  p.theta = 0.01;
  p.eta = 0.01;
  p.nbar2 = 50.0;
  p.nbar3 = 50.0;
  p.background = BackgroundVariant::flat;
  p.idler = IdlerVariant::paper_pure;
  return p;
}

}  // namespace triqi
