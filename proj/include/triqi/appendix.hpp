#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "triqi/states.hpp"

namespace triqi {

enum class Sign { plus, minus };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
std::string_view to_string(Sign s);

/// Branch choices for the hand-built square roots: rho0^{1/2}, the |Psi><Psi|
/// component of rho1^{1/2}, and the background components of rho1^{1/2}.
struct SignChoice {
  Sign rho0 = Sign::plus;
  Sign psi_term = Sign::minus;
  Sign background_terms = Sign::plus;

  static SignChoice paper() { return {}; }
};

/// 1 - sqrt(eta)/nbar.
double appendix_trace_formula(double eta, double nbar);

/// Term-by-term evaluation of Tr[rho0^{1/2} X] where X is the sign-chosen root
///   X = s_bg R + s_psi sqrt(eta) |Psi><Psi|,   rho0^{1/2} = s0 R,
/// and R = sigma^{1/2} (x) B^{1/2} is the principal root of rho0.
struct PaperSignTerms {
  double background_line = 0.0;       // s0 s_bg Tr[R R]
  double psi_overlap = 0.0;           // <Psi|R|Psi>
  double psi_cross_term = 0.0;        // s0 s_psi sqrt(eta) <Psi|R|Psi>
  double low_block_correction = 0.0;  // -s0 s_bg sum_{j,k<=1} b_jk, dropped from the total
  double total = 0.0;                 // background_line + psi_cross_term
  std::vector<std::string> warnings;
};

PaperSignTerms paper_sign_terms(const ProtocolParams& params, const SignChoice& signs = SignChoice::paper());
double paper_sign_trace(const ProtocolParams& params, const SignChoice& signs = SignChoice::paper());

/// Tr[rho0^{1/2} rho1^{1/2}] with principal roots (structured secular path).
double principal_trace(const ProtocolParams& params);
/// Same quantity from dense eigendecompositions; limited by dense_limit.
double principal_trace_dense(const ProtocolParams& params);

enum class Verdict { matches_paper_order, deviates, regime_violated };
std::string_view to_string(Verdict v);

struct ErrorTerm {
  std::string name;
  double magnitude = 0.0;
};

struct TraceAudit {
  ProtocolParams params;
  SignChoice signs;
  RegimeFlags flags;
  double analytic_paper = 0.0;
  double paper_sign_numeric = 0.0;
  double principal_numeric = 0.0;
  PaperSignTerms paper_terms;
  std::vector<ErrorTerm> error_terms;  // theta^2 sqrt(eta), 1/nbar^2, theta^3
  double tolerance = 0.0;              // 10 (theta^2 sqrt(eta) + 1/nbar^2)
  double paper_sign_deviation = 0.0;   // |paper_sign_numeric - analytic_paper|
  double principal_gap = 0.0;          // principal_numeric - analytic_paper
  double gap_order = 0.0;              // log-log slope of |gap| against eta
  double gap_coefficient = 0.0;        // |gap| ~ coefficient * eta^order
  Verdict verdict = Verdict::matches_paper_order;
  std::vector<std::string> incomplete;
  std::vector<std::string> warnings;
};

inline constexpr double kAuditTolFactor = 10.0;

/// Never throws on numeric failure: a failed sub-computation is recorded as
/// NaN with a message in `incomplete`.
TraceAudit audit(const ProtocolParams& params, const SignChoice& signs = SignChoice::paper());

/// theta = 0.01, eta = 0.01, nbar = 50, flat background, paper-pure idler.
ProtocolParams appendix_regime_point();

}  // namespace triqi
