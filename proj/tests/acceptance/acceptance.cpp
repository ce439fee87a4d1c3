// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "triqi/appendix.hpp"
#include "triqi/bounds.hpp"
#include "triqi/experiments.hpp"
#include "triqi/spectral.hpp"

using namespace triqi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome advantage_factor() {
  const auto t0 = Clock::now();
  const Table t = run_sweep(factor100_spec());
  const double elapsed = seconds_since(t0);
  bool exact = true;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    exact = exact && std::abs(t.number(r, "ratio") - t.number(r, "inv_ns")) <= 1e-12 * t.number(r, "inv_ns");
  }
  double at001 = std::nan("");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.number(r, "ns") == 0.01) at001 = t.number(r, "ratio");
  }
  const bool pass = exact && std::abs(at001 - 100.0) <= 1e-12 && elapsed < 1.0;
  return {pass, fmt::format("ratio(N_S=0.01)={:.17g} ratio==1/N_S:{} runtime={:.3f}s", at001, exact, elapsed)};
}

Outcome closed_forms() {
  const double target = 0.5 * std::exp(-10.0);
  const double b3 = paper_bound_3gamma(0.01, 100.0, 1e4).value;
  const double b2 = paper_bound_2gamma(0.1, 0.01, 100.0, 1e6).value;
  const double e3 = std::abs(b3 - target) / target;
  const double e2 = std::abs(b2 - target) / target;
  return {e3 <= 1e-15 && e2 <= 1e-15, fmt::format("p3g rel.err={:.3g} p2g rel.err={:.3g}", e3, e2)};
}

Outcome paper_sign_reproduction() {
  bool pass = true;
  double worst_margin = 0.0;
  double slowest = 0.0;
  for (auto bg : {BackgroundVariant::thermal, BackgroundVariant::flat}) {
    for (double theta : {0.01, 0.05}) {
      for (double nbar : {20.0, 50.0}) {
        for (double eta : {1e-2, 4e-2}) {
          ProtocolParams p;
          p.theta = theta;
          p.eta = eta;
          p.nbar2 = p.nbar3 = nbar;
          p.background = bg;
          const auto t0 = Clock::now();
          const double dev = std::abs(paper_sign_trace(p) - appendix_trace_formula(eta, nbar));
          slowest = std::max(slowest, seconds_since(t0));
          const double tol = 10.0 * (theta * theta * std::sqrt(eta) + 1.0 / (nbar * nbar));
          worst_margin = std::max(worst_margin, dev / tol);
          pass = pass && dev <= tol;
        }
      }
    }
  }
  pass = pass && slowest < 10.0;
  return {pass, fmt::format("max |dev|/tol={:.3f} over 16 points, slowest point {:.3f}s", worst_margin, slowest)};
}

Outcome audit_completeness() {
  const TraceAudit a = audit(appendix_regime_point());
  const bool values = std::isfinite(a.analytic_paper) && std::isfinite(a.paper_sign_numeric) &&
                      std::isfinite(a.principal_numeric);
  const bool fit = std::isfinite(a.gap_order) && std::isfinite(a.gap_coefficient);
  std::ostringstream text;
  write_text(a, text);
  bool fields = true;
  for (const char* f : {"t_paper", "t_papersign", "t_principal", "flags", "verdict", "gap_order"}) {
    fields = fields && text.str().find(f) != std::string::npos;
  }
  return {values && fit && fields && a.incomplete.empty(),
          fmt::format("t_paper={:.6f} t_papersign={:.6f} t_principal={:.6f} gap~{:.3g}*eta^{:.3f} flags={} verdict={}",
                      a.analytic_paper, a.paper_sign_numeric, a.principal_numeric, a.gap_coefficient, a.gap_order,
                      flags_string(a.flags), to_string(a.verdict))};
}

Outcome qs_properties() {
  const auto t0 = Clock::now();
  QsOptions dense;
  dense.allow_structured = false;
  double worst_sym = 0.0;
  double worst_second = 0.0;
  bool half_above_inf = true;
  double eta0_exponent = 0.0;
  for (auto idler : {IdlerVariant::paper_pure, IdlerVariant::traced}) {
    for (auto bg : {BackgroundVariant::thermal, BackgroundVariant::flat}) {
      for (std::size_t cut : {4u, 8u}) {
        for (double eta : {0.0, 0.02, 0.1, 0.5}) {
          ProtocolParams p;
          p.theta = 0.2;
          p.eta = eta;
          p.nbar2 = 2.0;
          p.nbar3 = 3.0;
          p.cutoffs = {2, cut, cut};
          p.max_tail = 1.0;
          p.background = bg;
          p.idler = idler;
          const HypothesisPair h = build_hypotheses(p);
          const QsEvaluator q01(h.rho0, h.rho1, dense);
          const QsEvaluator q10(h.rho1, h.rho0, dense);
          std::vector<double> g;
          for (int i = 0; i <= 20; ++i) {
            const double s = i / 20.0;
            g.push_back(q01(s));
            worst_sym = std::max(worst_sym, std::abs(g.back() - q10(1.0 - s)));
          }
          for (int i = 1; i < 20; ++i) worst_second = std::min(worst_second, g[i - 1] - 2 * g[i] + g[i + 1]);
          const ChernoffResult c = chernoff(q01);
          half_above_inf = half_above_inf && q01(0.5) >= c.q_star;
          if (eta == 0.0) eta0_exponent = std::max(eta0_exponent, c.exponent);
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  const bool pass = worst_sym <= 1e-10 && worst_second >= -1e-9 && half_above_inf && eta0_exponent < 1e-12 &&
                    elapsed < 30.0;
  return {pass, fmt::format("symmetry {:.2g}, min 2nd diff {:.2g}, Q_1/2>=inf:{}, eta=0 exponent {:.2g}, {:.2f}s",
                            worst_sym, worst_second, half_above_inf, eta0_exponent, elapsed)};
}

Outcome structured_vs_dense() {
  QsOptions dense;
  dense.allow_structured = false;
  double worst = 0.0;
  int pairs = 0;
  bool all_structured = true;
  struct Point {
    double nbar;
    std::size_t cut;
  };
  for (const Point& pt : {Point{3.0, 6}, Point{5.0, 12}, Point{5.0, 20}, Point{20.0, 22}}) {
    for (auto idler : {IdlerVariant::paper_pure, IdlerVariant::traced}) {
      for (auto bg : {BackgroundVariant::thermal, BackgroundVariant::flat}) {
        ProtocolParams p;
        p.theta = 0.1;
        p.eta = 0.05;
        p.nbar2 = p.nbar3 = pt.nbar;
        p.cutoffs = {2, pt.cut, pt.cut};
        p.max_tail = 1.0;
        p.idler = idler;
        p.background = bg;
        if (p.space().total_dim() > 1000) continue;
        const HypothesisPair h = build_hypotheses(p);
        const QsEvaluator fast(h.rho0, h.rho1);
        all_structured = all_structured && fast.structured();
        const double qs = fast(0.5);
        const double qd = QsEvaluator(h.rho0, h.rho1, dense)(0.5);
        worst = std::max(worst, std::abs(qs - qd));
        worst = std::max(worst, std::abs(principal_trace(p) - principal_trace_dense(p)));
        ++pairs;
      }
    }
  }
  return {worst <= 1e-10 && all_structured,
          fmt::format("max |structured - dense| = {:.3g} over {} pairs (Q_1/2 and principal trace)", worst, pairs)};
}

Outcome evolution_order() {
  const Table t = evolution_order_table();
  bool pass = true;
  std::string ratios;
  for (std::size_t r = 1; r < t.rows.size(); ++r) {
    const double ratio = t.number(r, "ratio_full");
    pass = pass && ratio >= 0.125 * 0.8 && ratio <= 0.125 * 1.25;
    ratios += fmt::format(" err({})/err({})={:.4f}", t.number(r, "theta"), t.number(r - 1, "theta"), ratio);
  }
  double photon_dev = std::nan("");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.number(r, "theta") == 0.1) photon_dev = t.number(r, "mean_photon_deviation");
  }
  pass = pass && std::abs(photon_dev) <= 0.1 * 0.1 * 0.1;
  return {pass, fmt::format("window [0.1, 0.15625];{} |<n>-0.01|={:.3g}", ratios, photon_dev)};
}

Outcome state_invariants() {
  bool ok = true;
  int checked = 0;
  for (auto idler : {IdlerVariant::paper_pure, IdlerVariant::traced}) {
    for (auto bg : {BackgroundVariant::thermal, BackgroundVariant::flat}) {
      for (double nbar : {1.0, 3.0, 8.0}) {
        for (double eta : {0.0, 0.05, 1.0}) {
          ProtocolParams p;
          p.theta = 0.1;
          p.eta = eta;
          p.nbar2 = nbar;
          p.nbar3 = nbar + 1.0;
          p.idler = idler;
          p.background = bg;
          const HypothesisPair h = build_hypotheses(p);
          ok = ok && check_invariants(h.rho0).ok() && check_invariants(h.rho1).ok();
          checked += 2;
        }
      }
    }
  }
  double worst_tail = 0.0;
  for (double nbar : {0.5, 1.0, 3.0, 20.0, 50.0, 100.0}) {
    const std::size_t c = auto_thermal_cutoff(nbar, 1e-8, 1u << 16);
    worst_tail = std::max(worst_tail, thermal_tail_mass(nbar, c));
  }
  double worst_idler = 0.0;
  for (double theta : {0.01, 0.1, 0.5}) {
    const DensityOperator psi = DensityOperator::pure(three_photon_state(theta, SpaceDescriptor({2, 3, 3})));
    const std::size_t keep[] = {0};
    const Matrix diff = partial_trace(psi, keep).to_dense() - idler_state(theta, IdlerVariant::traced, 2).to_dense();
    worst_idler = std::max(worst_idler, diff.cwiseAbs().maxCoeff());
  }
  return {ok && worst_tail < 1e-8 && worst_idler <= 1e-12,
          fmt::format("{} operators checked ok:{}, max auto-cutoff tail {:.3g}, traced idler err {:.3g}", checked, ok,
                      worst_tail, worst_idler)};
}

Outcome determinism() {
  auto csv = [](int threads) {
    SweepSpec s = appendix_regime_spec();
    s.threads = threads;
    std::ostringstream out;
    emit(run_sweep(s), Format::csv, out);
    return out.str();
  };
  const std::string a = csv(0);
  const std::string b = csv(0);
  const std::string c = csv(1);
  return {a == b && a == c && !a.empty(),
          fmt::format("{} bytes; repeat identical:{}, single-thread identical:{}", a.size(), a == b, a == c)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"advantage factor", advantage_factor},
      {"closed-form bounds", closed_forms},
      {"paper-sign trace", paper_sign_reproduction},
      {"audit completeness", audit_completeness},
      {"Q_s properties", qs_properties},
      {"structured vs dense", structured_vs_dense},
      {"evolution order", evolution_order},
      {"state invariants", state_invariants},
      {"determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
