#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "triqi/appendix.hpp"
#include "triqi/bounds.hpp"

namespace triqi {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(std::string_view name) const;  // throws UsageError if absent
  double number(std::size_t row, std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view name) const;
};

enum class Format { csv, text };
Format parse_format(std::string_view s);

/// %.17g; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// CSV: header row, one line per row, numbers with 17 significant digits.
/// Text: one "[row N]" block of "name = value" lines per row.
void emit(const Table& table, Format format, std::ostream& out);
/// Writes to `path`, or to stdout when `path` is empty or "-".
void emit(const Table& table, Format format, const std::filesystem::path& path);

/// Reads what emit(csv) writes. Cells that parse completely as a number are
/// numbers; everything else (including empty cells) is text.
Table read_csv(std::istream& in);
Table read_csv(const std::filesystem::path& path);

/// Field names: s_star, q_star, exponent, q_half, helstrom, p3g, p2g, ratio, ...
void write_text(const BoundReport& report, std::ostream& out);
/// Field names: t_paper, t_papersign, t_principal, flags, verdict, ...
void write_text(const TraceAudit& audit, std::ostream& out);

Table to_table(const BoundReport& report);
Table to_table(const TraceAudit& audit);

std::string flags_string(const RegimeFlags& f);

}  // namespace triqi
