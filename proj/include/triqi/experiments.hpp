#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "triqi/config.hpp"
#include "triqi/report_io.hpp"

namespace triqi {

struct SweepSpec {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  ProtocolParams fixed;
  std::vector<std::string> outputs;
  Format format = Format::csv;
  double tol = 1e-6;
  std::size_t max_points = 100000;
  int threads = 0;  // 0: OpenMP default

  void validate() const;
  std::size_t point_count() const;
};

/// Quantities a sweep can request, in canonical order.
const std::vector<std::string>& sweep_outputs();
const std::vector<std::string>& default_sweep_outputs();

/// Builds a spec from a parsed config: parameter keys set `fixed`, plus
/// outputs=..., format=..., tol=..., max_points=..., threads=....
SweepSpec sweep_spec(const ConfigFile& cfg);

/// Columns: axes (in spec order), outputs, the four regime flags (0/1), error.
/// Rows in lexicographic order over the axes, first axis slowest. A point that
/// fails leaves NaN outputs and its message in the error column.
Table run_sweep(const SweepSpec& spec);

/// ns in {0.001, 0.01, 0.1}: ratio, 1/ns, p3g, p2g at eta = 0.01, nbar = 100.
SweepSpec factor100_spec();
/// theta = 0.01; eta in {1e-3, 1e-2}; nbar in {20, 50}; both backgrounds.
SweepSpec appendix_regime_spec();

/// Distance between evolve_exact and three_photon_state at
/// theta in {0.2, 0.1, 0.05}, full and projected on span{|000>, |111>}.
Table evolution_order_table(std::size_t chain = 16);

/// $TRIQI_GOLDEN_DIR, or the source-tree default compiled in.
std::filesystem::path golden_dir();

/// Empty when the tables agree: same columns, same shape, equal text cells,
/// numbers within rel_tol * max(1, |a|) (NaN matches NaN).
std::string compare_tables(const Table& expected, const Table& actual, double rel_tol);

}  // namespace triqi
