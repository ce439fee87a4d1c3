#pragma once

#include <string>
#include <utility>
#include <vector>

#include "triqi/density.hpp"
#include "triqi/secular.hpp"
#include "triqi/spectral.hpp"
#include "triqi/states.hpp"

namespace triqi {

struct QsOptions {
  PowerOptions power;
  bool allow_structured = true;
};

/// Q_s = Tr(rho0^s rho1^{1-s}) with the support convention 0^0 = 0.
///
/// The spectral work is done once at construction; each evaluation is then
/// O(N) on the structured path (rho0 diagonal in a product frame, rho1 a
/// single rank-one update in the same frame, or the other way round) and
/// O(N^2) on the dense path.
class QsEvaluator {
 public:
  QsEvaluator(const DensityOperator& rho0, const DensityOperator& rho1, const QsOptions& opts = {});

  double operator()(double s) const;
  bool structured() const { return structured_; }

 private:
  double structured_value(double s) const;
  double dense_value(double s) const;

  QsOptions opts_;
  bool structured_ = false;
  bool diag_is_rho0_ = true;

  // Structured path. Entries untouched by the update are compressed into
  // unique (diag-side, update-side) eigenvalue pairs with multiplicities.
  std::vector<double> pair_diag_;
  std::vector<double> pair_other_;
  std::vector<double> pair_count_;
  RealVector active_diag_;         // diag-side eigenvalues on the active indices
  RealVector active_values_;       // update-side eigenvalues of the active block
  Eigen::MatrixXd active_weights_;  // |W_kj|^2
  double diag_top_ = 0.0;
  double other_top_ = 0.0;

  // Dense path.
  RealVector eig0_;
  RealVector eig1_;
  Eigen::MatrixXd overlap_;  // |<e_i|f_j>|^2
};

double q_s(const DensityOperator& rho0, const DensityOperator& rho1, double s, const QsOptions& opts = {});

struct ChernoffResult {
  double s_star = 0.0;
  double q_star = 1.0;
  double exponent = 0.0;  // -log q_star, clamped at 0
  bool convexity_certified = false;
  double min_second_difference = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;
  std::vector<std::pair<double, double>> prescan;  // (s, Q_s) on the 0.05 grid
};

inline constexpr double kPrescanStep = 0.05;
inline constexpr double kConvexitySlack = 1e-9;

/// inf over s in [0, 1] of Q_s: a 0.05-grid prescan certifies convexity
/// (second differences >= -1e-9), then golden-section refines around the grid
/// minimum until the bracket is narrower than `tol`. Grid points, including
/// both endpoints, remain candidates.
ChernoffResult chernoff(const QsEvaluator& q, double tol = 1e-6, int max_iterations = 200);
ChernoffResult chernoff(const DensityOperator& rho0, const DensityOperator& rho1, double tol = 1e-6,
                        const QsOptions& opts = {});

/// 1/2 * q_half^M.
double bhattacharyya_from_q(double q_half, double shots);
double bhattacharyya_bound(const DensityOperator& rho0, const DensityOperator& rho1, double shots,
                           const QsOptions& opts = {});

/// pi0 Tr[E1 rho0] + (1 - pi0) Tr[E0 rho1] for a two-outcome POVM.
double povm_error(const DensityOperator& rho0, const DensityOperator& rho1, const Matrix& e0, const Matrix& e1,
                  double pi0, std::size_t dense_limit = kDefaultDenseLimit);

/// 1/2 (1 - || (1 - pi0) rho1 - pi0 rho0 ||_1).
double helstrom_optimum(const DensityOperator& rho0, const DensityOperator& rho1, double pi0 = 0.5,
                        std::size_t dense_limit = kDefaultDenseLimit);

struct ClosedFormBound {
  double value = 0.5;
  double exponent = 0.0;  // the bound is 1/2 exp(-exponent)
  std::vector<std::string> warnings;
  std::string note;
};

/// 1/2 exp(-M sqrt(eta) / nbar); regime violations become warnings.
ClosedFormBound paper_bound_3gamma(double eta, double nbar, double shots, double theta = 0.0);
/// 1/2 exp(-M kappa N_S / nbar).
ClosedFormBound paper_bound_2gamma(double kappa, double ns, double nbar, double shots);

/// Ratio of the three-photon to the two-mode Gaussian exponent with
/// kappa = sqrt(eta) and n_s = N_S; equals 1/N_S. Requires N_S in (0, 1).
double advantage_ratio(double ns);

struct BoundReport {
  ProtocolParams params;
  RegimeFlags regime;
  std::vector<std::pair<double, double>> q_curve;
  double s_star = 0.0;
  double q_star = 1.0;
  double exponent = 0.0;
  double q_half = 1.0;
  double q_zero = 1.0;
  double q_one = 1.0;
  double helstrom = 0.5;
  double closed_form_3g = 0.5;
  double closed_form_2g = 0.5;
  double ratio = 0.0;  // NaN when N_S is outside (0, 1)
  double shots = 1.0;
  bool convexity_certified = false;
  bool structured = false;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

BoundReport bound_report(const HypothesisPair& pair, double tol = 1e-6);

}  // namespace triqi
