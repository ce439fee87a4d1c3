// triqi: command-line front end for the three-photon illumination toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 numeric failure,
// 3 regime violation (only with --strict).

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "triqi/appendix.hpp"
#include "triqi/bounds.hpp"
#include "triqi/errors.hpp"
#include "triqi/experiments.hpp"
#include "triqi/report_io.hpp"
#include "triqi/spectral.hpp"

namespace {

using namespace triqi;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitRegime = 3;

struct CommonArgs {
  std::optional<double> theta, eta, nbar2, nbar3, shots, kappa, ns, max_tail;
  std::optional<std::string> cutoff, background, idler, format;
  std::optional<std::size_t> dense_limit;
  std::string out;
  std::optional<double> tol;
  bool strict = false;
};

void add_point_options(CLI::App* app, CommonArgs& a) {
  app->add_option("--theta", a.theta, "squeezing angle g t");
  app->add_option("--eta", a.eta, "target reflectivity in [0, 1]");
  app->add_option("--nbar2", a.nbar2, "background mean photon number, mode 1");
  app->add_option("--nbar3", a.nbar3, "background mean photon number, mode 2");
  app->add_option("--cutoff", a.cutoff, "signal cutoff N, or idler,signal,signal");
  app->add_option("--background", a.background, "thermal|flat");
  app->add_option("--idler", a.idler, "paper-pure|traced");
  app->add_option("--shots", a.shots, "number of copies M for the closed forms");
  app->add_option("--kappa", a.kappa, "Gaussian transmissivity (default sqrt(eta))");
  app->add_option("--ns", a.ns, "Gaussian signal photon number (default theta^2)");
  app->add_option("--max-tail", a.max_tail, "largest thermal mass allowed above the cutoff (default 1e-8)");
  app->add_option("--dense-limit", a.dense_limit, "largest dimension handled densely");
}

void add_output_options(CLI::App* app, CommonArgs& a) {
  app->add_option("--out", a.out, "output path (default stdout)");
  app->add_option("--format", a.format, "csv|text");
  app->add_option("--tol", a.tol, "Chernoff bracket tolerance");
  app->add_flag("--strict", a.strict, "exit 3 when a regime flag is violated");
}

void apply(const CommonArgs& a, ProtocolParams& p) {
  if (a.theta) p.theta = *a.theta;
  if (a.eta) p.eta = *a.eta;
  if (a.nbar2) p.nbar2 = *a.nbar2;
  if (a.nbar3) p.nbar3 = *a.nbar3;
  if (a.cutoff) set_param(p, "cutoff", *a.cutoff);
  if (a.background) p.background = parse_background(*a.background);
  if (a.idler) p.idler = parse_idler(*a.idler);
  if (a.shots) p.shots = *a.shots;
  if (a.kappa) p.kappa = *a.kappa;
  if (a.ns) p.ns = *a.ns;
  if (a.dense_limit) p.dense_limit = *a.dense_limit;
  if (a.max_tail) p.max_tail = *a.max_tail;
  p.validate();
}

Format format_or(const CommonArgs& a, Format fallback) { return a.format ? parse_format(*a.format) : fallback; }

template <class Writer>
void write_to(const std::string& path, Writer&& w) {
  if (path.empty() || path == "-") {
    w(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  w(out);
  if (!out) throw std::runtime_error(fmt::format("writing '{}' failed", path));
}

bool table_violates_regime(const Table& t) {
  for (const char* name : {"high_noise", "small_theta", "small_eta", "eta_vs_invn2"}) {
    std::size_t col = 0;
    try {
      col = t.column(name);
    } catch (const UsageError&) {
      return false;
    }
    for (const auto& row : t.rows) {
      const auto* v = std::get_if<double>(&row[col]);
      if (v != nullptr && *v != 1.0) return true;
    }
  }
  return false;
}

bool table_has_errors(const Table& t) {
  std::size_t col = 0;
  try {
    col = t.column("error");
  } catch (const UsageError&) {
    return false;
  }
  for (const auto& row : t.rows) {
    const auto* s = std::get_if<std::string>(&row[col]);
    if (s != nullptr && !s->empty()) return true;
  }
  return false;
}

int finish_table(const Table& t, const CommonArgs& a, Format fallback) {
  emit(t, format_or(a, fallback), std::filesystem::path(a.out));
  if (table_has_errors(t)) {
    std::cerr << "triqi: some points failed; see the error column\n";
    return kExitNumeric;
  }
  if (a.strict && table_violates_regime(t)) {
    std::cerr << "triqi: regime violated\n";
    return kExitRegime;
  }
  return kExitOk;
}

int run_state(const CommonArgs& a, std::size_t chain) {
  ProtocolParams p;
  apply(a, p);
  const HypothesisPair pair = build_hypotheses(p);
  const Ket psi = three_photon_state(p.theta, pair.rho0.space());
  const std::size_t zero[] = {0, 0, 0};
  const std::size_t one[] = {1, 1, 1};
  const Evolution e = evolve_exact(p.theta, chain);
  const InvariantReport i0 = check_invariants(pair.rho0, p.dense_limit);
  const InvariantReport i1 = check_invariants(pair.rho1, p.dense_limit);
  const auto cut = p.resolved_cutoffs();

  Table t;
  auto add = [&](std::string name, Cell value) {
    t.columns.push_back(std::move(name));
    if (t.rows.empty()) t.rows.emplace_back();
    t.rows[0].push_back(std::move(value));
  };
  add("theta", p.theta);
  add("eta", p.eta);
  add("nbar2", p.nbar2);
  add("nbar3", p.nbar3);
  add("cutoff", fmt::format("{},{},{}", cut[0], cut[1], cut[2]));
  add("background", std::string(to_string(p.background)));
  add("idler", std::string(to_string(p.idler)));
  add("dim", static_cast<double>(pair.rho0.space().total_dim()));
  add("psi_000_re", psi.amplitude(zero).real());
  add("psi_000_im", psi.amplitude(zero).imag());
  add("psi_111_re", psi.amplitude(one).real());
  add("psi_111_im", psi.amplitude(one).imag());
  for (std::size_t n = 0; n < std::min<std::size_t>(4, e.chain.size()); ++n) {
    add(fmt::format("exact_{0}{0}{0}_re", n), e.chain[n].real());
    add(fmt::format("exact_{0}{0}{0}_im", n), e.chain[n].imag());
  }
  add("exact_chain", static_cast<double>(chain));
  add("exact_leakage", e.leakage);
  add("exact_mean_photon", mean_photon_number(e.state, 0));
  add("tail_mass2", pair.background.tail_mass2);
  add("tail_mass3", pair.background.tail_mass3);
  add("rho0_ok", i0.ok() ? 1.0 : 0.0);
  add("rho0_min_eigenvalue", i0.min_eigenvalue);
  add("rho0_trace", i0.trace);
  add("rho1_ok", i1.ok() ? 1.0 : 0.0);
  add("rho1_min_eigenvalue", i1.min_eigenvalue);
  add("rho1_trace", i1.trace);
  add("flags", flags_string(pair.flags));

  emit(t, format_or(a, Format::text), std::filesystem::path(a.out));
  if (!i0.ok() || !i1.ok()) {
    std::cerr << "triqi: state invariant check failed\n";
    return kExitNumeric;
  }
  if (a.strict && !pair.flags.all()) return kExitRegime;
  return kExitOk;
}

int run_chernoff(const CommonArgs& a) {
  ProtocolParams p;
  apply(a, p);
  const BoundReport r = bound_report(build_hypotheses(p), a.tol.value_or(1e-6));
  if (format_or(a, Format::text) == Format::text) {
    write_to(a.out, [&](std::ostream& o) { write_text(r, o); });
  } else {
    emit(to_table(r), Format::csv, std::filesystem::path(a.out));
  }
  if (a.strict && !r.regime.all()) return kExitRegime;
  return kExitOk;
}

int run_audit(const CommonArgs& a, const std::string& psi_sign) {
  ProtocolParams p = appendix_regime_point();
  apply(a, p);
  SignChoice signs = SignChoice::paper();
  if (psi_sign == "+") {
    signs.psi_term = Sign::plus;
  } else if (psi_sign != "-") {
    throw UsageError("--psi-sign must be + or -");
  }
  const TraceAudit r = audit(p, signs);
  if (format_or(a, Format::text) == Format::text) {
    write_to(a.out, [&](std::ostream& o) { write_text(r, o); });
  } else {
    emit(to_table(r), Format::csv, std::filesystem::path(a.out));
  }
  if (!r.incomplete.empty()) {
    for (const auto& m : r.incomplete) std::cerr << "triqi: incomplete: " << m << '\n';
    return kExitNumeric;
  }
  if (a.strict && r.verdict == Verdict::regime_violated) return kExitRegime;
  return kExitOk;
}

int run_sweep_cmd(const CommonArgs& a, const std::string& config, int threads, const std::string& check_golden,
                  const std::string& update_golden) {
  SweepSpec spec = sweep_spec(load_config(config));
  apply(a, spec.fixed);
  if (threads > 0) spec.threads = threads;
  if (a.format) spec.format = parse_format(*a.format);
  if (a.tol) spec.tol = *a.tol;
  const Table t = run_sweep(spec);
  if (!update_golden.empty()) {
    emit(t, Format::csv, golden_dir() / update_golden);
  }
  if (!check_golden.empty()) {
    const Table expected = read_csv(golden_dir() / check_golden);
    const std::string diff = compare_tables(expected, t, 1e-9);
    if (!diff.empty()) {
      std::cerr << "triqi: golden mismatch: " << diff << '\n';
      return kExitNumeric;
    }
  }
  return finish_table(t, a, spec.format);
}

int run_reproduce(const CommonArgs& a, const std::string& preset) {
  if (preset == "factor100") return finish_table(run_sweep(factor100_spec()), a, Format::csv);
  if (preset == "appendix-regime") {
    SweepSpec s = appendix_regime_spec();
    if (a.tol) s.tol = *a.tol;
    return finish_table(run_sweep(s), a, Format::csv);
  }
  if (preset == "evolution-order") return finish_table(evolution_order_table(), a, Format::csv);
  throw UsageError(fmt::format("unknown preset '{}' (factor100|appendix-regime|evolution-order)", preset));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-photon quantum illumination: states, Chernoff bounds, appendix audit"};
  app.require_subcommand(1);

  CommonArgs state_args, chernoff_args, audit_args, sweep_args, reproduce_args;
  std::size_t chain = 16;
  std::string psi_sign = "-";
  std::string config, preset, check_golden, update_golden;
  int threads = 0;

  auto* state = app.add_subcommand("state", "build the hypotheses and print amplitudes, leakage, invariants");
  add_point_options(state, state_args);
  add_output_options(state, state_args);
  state->add_option("--chain", chain, "chain length for the exact evolution");

  auto* chernoff = app.add_subcommand("chernoff", "bound report for one parameter point");
  add_point_options(chernoff, chernoff_args);
  add_output_options(chernoff, chernoff_args);

  auto* audit_cmd = app.add_subcommand("appendix-audit", "hand-signed vs principal square-root trace audit");
  add_point_options(audit_cmd, audit_args);
  add_output_options(audit_cmd, audit_args);
  audit_cmd->add_option("--psi-sign", psi_sign, "sign of the |Psi><Psi| root component (+|-)");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep from a key=value config file");
  add_point_options(sweep, sweep_args);
  add_output_options(sweep, sweep_args);
  sweep->add_option("--config", config, "config file")->required();
  sweep->add_option("--threads", threads, "worker threads (0: OpenMP default)");
  sweep->add_option("--check-golden", check_golden, "compare with this file in the golden directory");
  sweep->add_option("--update-golden", update_golden, "write the result into the golden directory");

  auto* reproduce = app.add_subcommand("reproduce", "built-in presets");
  add_output_options(reproduce, reproduce_args);
  reproduce->add_option("preset", preset, "factor100|appendix-regime|evolution-order")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*state) return run_state(state_args, chain);
    if (*chernoff) return run_chernoff(chernoff_args);
    if (*audit_cmd) return run_audit(audit_args, psi_sign);
    if (*sweep) return run_sweep_cmd(sweep_args, config, threads, check_golden, update_golden);
    if (*reproduce) return run_reproduce(reproduce_args, preset);
  } catch (const UsageError& e) {
    std::cerr << "triqi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "triqi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "triqi: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
