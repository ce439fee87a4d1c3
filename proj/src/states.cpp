#include "triqi/states.hpp"

#include <cmath>

#include <fmt/format.h>

#include "triqi/errors.hpp"
#include "triqi/spectral.hpp"

namespace triqi {

std::string_view to_string(BackgroundVariant v) { return v == BackgroundVariant::thermal ? "thermal" : "flat"; }
std::string_view to_string(IdlerVariant v) { return v == IdlerVariant::paper_pure ? "paper-pure" : "traced"; }

BackgroundVariant parse_background(std::string_view s) {
  if (s == "thermal") return BackgroundVariant::thermal;
  if (s == "flat") return BackgroundVariant::flat;
  throw UsageError(fmt::format("unknown background variant '{}' (thermal|flat)", s));
}

IdlerVariant parse_idler(std::string_view s) {
  if (s == "paper-pure" || s == "paper_pure") return IdlerVariant::paper_pure;
  if (s == "traced") return IdlerVariant::traced;
  throw UsageError(fmt::format("unknown idler variant '{}' (paper-pure|traced)", s));
}

std::vector<std::string> RegimeFlags::violations() const {
  std::vector<std::string> out;
  if (!high_noise) out.emplace_back("nbar >> 1 violated");
  if (!small_theta) out.emplace_back("theta << 1 violated");
  if (!small_eta) out.emplace_back("eta << 1 violated");
  if (!eta_vs_invn2) out.emplace_back("1/nbar^2 << eta violated");
  return out;
}

void ProtocolParams::validate() const {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw UsageError("theta must be >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("eta must lie in [0, 1]");
  if (!(nbar2 > 0.0) || !(nbar3 > 0.0) || !std::isfinite(nbar2) || !std::isfinite(nbar3)) {
    throw UsageError("background mean photon numbers must be > 0");
  }
  if (!cutoffs.empty()) {
    if (cutoffs.size() != 3) throw UsageError("cutoffs must list three modes (idler, signal, signal)");
    for (auto c : cutoffs) {
      if (c < 2) throw UsageError("every mode needs cutoff >= 2 to hold |111>");
    }
  }
  if (!(max_tail > 0.0)) throw UsageError("max_tail must be > 0");
  if (!(shots >= 0.0)) throw UsageError("shot count must be >= 0");
  if (kappa && !(*kappa >= 0.0)) throw UsageError("kappa must be >= 0");
  if (ns && !(*ns >= 0.0)) throw UsageError("N_S must be >= 0");
}

double ProtocolParams::kappa_value() const { return kappa ? *kappa : std::sqrt(eta); }
double ProtocolParams::ns_value() const { return ns ? *ns : theta * theta; }

RegimeFlags ProtocolParams::regime() const {
  const double n = nbar();
  RegimeFlags f;
  f.high_noise = n >= kScaleSeparation;
  f.small_theta = kScaleSeparation * theta <= 1.0;
  f.small_eta = kScaleSeparation * eta <= 1.0;
  f.eta_vs_invn2 = eta * n * n >= kScaleSeparation;
  return f;
}

std::vector<std::size_t> ProtocolParams::resolved_cutoffs() const {
  if (!cutoffs.empty()) return cutoffs;
  auto pick = [&](double nbar) -> std::size_t {
    if (background == BackgroundVariant::flat) return std::max<std::size_t>(flat_levels(nbar), 2);
    return auto_thermal_cutoff(nbar, max_tail, structured_cutoff_cap);
  };
  return {2, pick(nbar2), pick(nbar3)};
}

SpaceDescriptor ProtocolParams::space() const { return SpaceDescriptor(resolved_cutoffs()); }

Ket three_photon_state(double theta, const SpaceDescriptor& space) {
  if (space.modes() != 3) throw UsageError("three_photon_state needs a three-mode space");
  for (std::size_t m = 0; m < 3; ++m) {
    if (space.cutoff(m) < 2) throw UsageError("three_photon_state needs cutoff >= 2 on every mode");
  }
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(space.total_dim()));
  const std::size_t vac[3] = {0, 0, 0};
  const std::size_t one[3] = {1, 1, 1};
  amps(static_cast<Eigen::Index>(space.index(vac))) = std::cos(theta);
  amps(static_cast<Eigen::Index>(space.index(one))) = Complex(0.0, -std::sin(theta));
  return Ket(space, std::move(amps));
}

Evolution evolve_exact(double gt, std::size_t chain_cutoff, double max_leakage) {
  if (chain_cutoff < 4) throw UsageError("evolve_exact needs chain_cutoff >= 4");
  const auto n = static_cast<Eigen::Index>(chain_cutoff);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) h(k + 1, k) = h(k, k + 1) = std::pow(static_cast<double>(k + 1), 1.5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericError("evolve_exact: tridiagonal eigensolve failed");
  const Eigen::MatrixXd& v = es.eigenvectors();
  Vector phase(n);
  for (Eigen::Index k = 0; k < n; ++k) phase(k) = std::exp(Complex(0.0, -gt * es.eigenvalues()(k))) * v(0, k);
  const Vector chain = v.cast<Complex>() * phase;

  Evolution out{Ket::basis(SpaceDescriptor({chain_cutoff, chain_cutoff, chain_cutoff}), std::vector<std::size_t>{0, 0, 0}),
                {},
                std::norm(chain(n - 1))};
  if (out.leakage > max_leakage) {
    throw NumericError(fmt::format("evolve_exact: top-level population {:.3e} exceeds {:.1e}; raise chain_cutoff",
                                   out.leakage, max_leakage));
  }
  SpaceDescriptor space({chain_cutoff, chain_cutoff, chain_cutoff});
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(space.total_dim()));
  for (std::size_t k = 0; k < chain_cutoff; ++k) {
    const std::size_t occ[3] = {k, k, k};
    amps(static_cast<Eigen::Index>(space.index(occ))) = chain(static_cast<Eigen::Index>(k));
    out.chain.push_back(chain(static_cast<Eigen::Index>(k)));
  }
  out.state = Ket(std::move(space), std::move(amps));
  return out;
}

double mean_photon_number(const Ket& ket, std::size_t mode) {
  const SpaceDescriptor& space = ket.space();
  space.cutoff(mode);
  double acc = 0.0;
  for (std::size_t i = 0; i < space.total_dim(); ++i) {
    acc += std::norm(ket.amplitudes()(static_cast<Eigen::Index>(i))) * static_cast<double>(space.level(i, mode));
  }
  return acc;
}

std::vector<double> thermal_distribution(double nbar, std::size_t cutoff) {
  if (!(nbar > 0.0)) throw UsageError("thermal state needs nbar > 0");
  if (cutoff == 0) throw UsageError("thermal state needs cutoff >= 1");
  const double ratio = nbar / (nbar + 1.0);
  std::vector<double> p(cutoff);
  double term = 1.0 / (nbar + 1.0);
  double total = 0.0;
  for (auto& x : p) {
    x = term;
    total += term;
    term *= ratio;
  }
  for (auto& x : p) x /= total;
  return p;
}

double thermal_tail_mass(double nbar, std::size_t cutoff) {
  return std::pow(nbar / (nbar + 1.0), static_cast<double>(cutoff));
}

std::size_t auto_thermal_cutoff(double nbar, double max_tail, std::size_t cap) {
  if (!(nbar > 0.0)) throw UsageError("thermal state needs nbar > 0");
  const double ratio = nbar / (nbar + 1.0);
  auto c = static_cast<std::size_t>(std::max(2.0, std::ceil(std::log(max_tail) / std::log(ratio))));
  while (c > 2 && thermal_tail_mass(nbar, c - 1) < max_tail) --c;
  while (thermal_tail_mass(nbar, c) >= max_tail) ++c;
  if (c > cap) {
    throw NumericError(fmt::format("thermal nbar={} needs cutoff {} for tail < {:.1e}, above the cap {}", nbar, c,
                                   max_tail, cap));
  }
  return c;
}

ThermalState thermal_state(double nbar, std::size_t cutoff, double max_tail) {
  const double tail = thermal_tail_mass(nbar, cutoff);
  if (tail > max_tail) {
    throw NumericError(fmt::format("thermal nbar={} cutoff {}: tail mass {:.3e} above {:.1e}; cutoff too small", nbar,
                                   cutoff, tail, max_tail));
  }
  const auto p = thermal_distribution(nbar, cutoff);
  RealVector values = Eigen::Map<const RealVector>(p.data(), static_cast<Eigen::Index>(p.size()));
  return ThermalState{DensityOperator::diagonal(SpaceDescriptor({cutoff}), std::move(values)), tail};
}

std::size_t flat_levels(double nbar) {
  if (!(nbar > 0.0)) throw UsageError("flat background needs nbar > 0");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(nbar)));
}

DensityOperator flat_state(double nbar, std::size_t cutoff) {
  const std::size_t k = flat_levels(nbar);
  if (cutoff < k) {
    throw NumericError(fmt::format("flat background nbar={} spans {} levels but the cutoff is {}", nbar, k, cutoff));
  }
  RealVector values = RealVector::Zero(static_cast<Eigen::Index>(cutoff));
  values.head(static_cast<Eigen::Index>(k)).setConstant(1.0 / static_cast<double>(k));
  return DensityOperator::diagonal(SpaceDescriptor({cutoff}), std::move(values));
}

DensityOperator background_state(const ProtocolParams& params, BackgroundInfo* info) {
  params.validate();
  const auto cut = params.resolved_cutoffs();
  BackgroundInfo local;
  std::vector<DensityOperator> factors;
  if (params.background == BackgroundVariant::thermal) {
    ThermalState a = thermal_state(params.nbar2, cut[1], params.max_tail);
    ThermalState b = thermal_state(params.nbar3, cut[2], params.max_tail);
    local.tail_mass2 = a.tail_mass;
    local.tail_mass3 = b.tail_mass;
    factors.push_back(std::move(a.rho));
    factors.push_back(std::move(b.rho));
  } else {
    local.flat_levels2 = flat_levels(params.nbar2);
    local.flat_levels3 = flat_levels(params.nbar3);
    factors.push_back(flat_state(params.nbar2, cut[1]));
    factors.push_back(flat_state(params.nbar3, cut[2]));
  }
  if (info != nullptr) *info = local;
  return DensityOperator::tensor_product(std::move(factors));
}

DensityOperator idler_state(double theta, IdlerVariant variant, std::size_t cutoff) {
  if (cutoff < 2) throw UsageError("idler needs cutoff >= 2");
  SpaceDescriptor space({cutoff});
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (variant == IdlerVariant::traced) {
    RealVector values = RealVector::Zero(static_cast<Eigen::Index>(cutoff));
    values(0) = c * c;
    values(1) = s * s;
    return DensityOperator::diagonal(std::move(space), std::move(values));
  }
  Vector u = Vector::Zero(static_cast<Eigen::Index>(cutoff));
  u(0) = c;
  u(1) = Complex(0.0, -s);
  return DensityOperator::dense(std::move(space), u * u.adjoint());
}

namespace {

DensityOperator h0_with_info(const ProtocolParams& params, BackgroundInfo* info) {
  const auto cut = params.resolved_cutoffs();
  DensityOperator bg = background_state(params, info);
  const auto& bg_factors = std::get<TensorProductRep>(bg.rep()).factors;
  return DensityOperator::tensor_product({idler_state(params.theta, params.idler, cut[0]), bg_factors[0], bg_factors[1]});
}

DensityOperator h1_from_h0(const DensityOperator& rho0, const ProtocolParams& params) {
  auto framed = rho0.framed();
  if (!framed) throw NumericError("hypothesis_h0 is not diagonalizable mode by mode");
  const Ket psi = three_photon_state(params.theta, rho0.space());
  DiagPlusLowRankRep rep;
  rep.frame = framed->frame;
  rep.diagonal = (1.0 - params.eta) * framed->diagonal;
  rep.terms.push_back(RankOneTerm{params.eta, apply_frame(framed->frame, rho0.space(), psi.amplitudes(), true)});
  return DensityOperator::diag_plus_low_rank(rho0.space(), std::move(rep));
}

}  // namespace

DensityOperator hypothesis_h0(const ProtocolParams& params) { return h0_with_info(params, nullptr); }

DensityOperator hypothesis_h1(const ProtocolParams& params) { return h1_from_h0(hypothesis_h0(params), params); }

HypothesisPair build_hypotheses(const ProtocolParams& params) {
  BackgroundInfo info;
  DensityOperator rho0 = h0_with_info(params, &info);
  DensityOperator rho1 = h1_from_h0(rho0, params);
  return HypothesisPair{std::move(rho0), std::move(rho1), params, params.regime(), info};
}

}  // namespace triqi
