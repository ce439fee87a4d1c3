#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "triqi/density.hpp"

namespace triqi {

// Mode convention: 0 = idler, 1 and 2 = the two signal returns.

enum class BackgroundVariant { thermal, flat };
enum class IdlerVariant { paper_pure, traced };

std::string_view to_string(BackgroundVariant v);
std::string_view to_string(IdlerVariant v);
BackgroundVariant parse_background(std::string_view s);
IdlerVariant parse_idler(std::string_view s);

/// "a >> b" is read as a >= kScaleSeparation * b.
inline constexpr double kScaleSeparation = 3.0;

struct RegimeFlags {
  bool high_noise = false;    // nbar >> 1
  bool small_theta = false;   // theta << 1
  bool small_eta = false;     // eta << 1
  bool eta_vs_invn2 = false;  // eta >> 1 / nbar^2
  bool all() const { return high_noise && small_theta && small_eta && eta_vs_invn2; }
  std::vector<std::string> violations() const;
};

struct ProtocolParams {
  double theta = 0.1;
  double eta = 0.05;
  double nbar2 = 3.0;
  double nbar3 = 3.0;
  std::vector<std::size_t> cutoffs;  // {idler, signal, signal}; empty selects automatically
  BackgroundVariant background = BackgroundVariant::thermal;
  IdlerVariant idler = IdlerVariant::paper_pure;
  double max_tail = 1e-8;
  std::size_t dense_limit = kDefaultDenseLimit;
  std::size_t structured_cutoff_cap = 4096;

  // Closed-form comparison inputs.
  double shots = 1.0;
  std::optional<double> kappa;  // defaults to sqrt(eta)
  std::optional<double> ns;     // defaults to theta^2

  void validate() const;
  /// Single background figure used by the closed forms: mean of nbar2, nbar3.
  double nbar() const { return 0.5 * (nbar2 + nbar3); }
  double kappa_value() const;
  double ns_value() const;
  RegimeFlags regime() const;
  std::vector<std::size_t> resolved_cutoffs() const;
  SpaceDescriptor space() const;
};

/// cos(theta)|000> - i sin(theta)|111> on a three-mode space (cutoffs >= 2).
Ket three_photon_state(double theta, const SpaceDescriptor& space);

struct Evolution {
  Ket state;                     // on cutoffs {chain, chain, chain}
  std::vector<Complex> chain;    // amplitudes of |nnn>, n = 0..chain-1
  double leakage = 0.0;          // population of the top chain level
};

/// exp(-i gt H/(hbar g))|000> for H = a1 a2 a3 + h.c., restricted to the
/// invariant chain |nnn> where H is tridiagonal with couplings (n+1)^{3/2}.
/// Throws NumericError when the top-level population exceeds `max_leakage`.
Evolution evolve_exact(double gt, std::size_t chain_cutoff, double max_leakage = 1e-8);

double mean_photon_number(const Ket& ket, std::size_t mode);

struct ThermalState {
  DensityOperator rho;
  double tail_mass = 0.0;  // weight above the cutoff before renormalization
};

/// Bose-Einstein populations nbar^n/(nbar+1)^{n+1}, truncated and renormalized.
std::vector<double> thermal_distribution(double nbar, std::size_t cutoff);
double thermal_tail_mass(double nbar, std::size_t cutoff);
/// Smallest cutoff whose tail mass is below max_tail (at least 2).
std::size_t auto_thermal_cutoff(double nbar, double max_tail, std::size_t cap);
ThermalState thermal_state(double nbar, std::size_t cutoff, double max_tail = 1e-8);

/// Number of uniformly weighted levels standing in for I/nbar: round(nbar), at least 1.
std::size_t flat_levels(double nbar);
DensityOperator flat_state(double nbar, std::size_t cutoff);

struct BackgroundInfo {
  double tail_mass2 = 0.0;
  double tail_mass3 = 0.0;
  std::size_t flat_levels2 = 0;
  std::size_t flat_levels3 = 0;
};

/// Two-mode background on the signal modes: thermal (x) thermal, or the flat
/// uniform stand-in over the first round(nbar2) x round(nbar3) levels.
DensityOperator background_state(const ProtocolParams& params, BackgroundInfo* info = nullptr);

/// Idler factor: U|0><0|U^dagger (paper_pure) or diag(cos^2, sin^2) (traced).
DensityOperator idler_state(double theta, IdlerVariant variant, std::size_t cutoff);

DensityOperator hypothesis_h0(const ProtocolParams& params);
/// (1 - eta) rho0 + eta |psi><psi|, stored as a rank-one update in the
/// eigenframe of rho0.
DensityOperator hypothesis_h1(const ProtocolParams& params);

struct HypothesisPair {
  DensityOperator rho0;
  DensityOperator rho1;
  ProtocolParams params;
  RegimeFlags flags;
  BackgroundInfo background;
};

HypothesisPair build_hypotheses(const ProtocolParams& params);

}  // namespace triqi
