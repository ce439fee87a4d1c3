#include "triqi/report_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "triqi/errors.hpp"

namespace triqi {

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw UsageError(fmt::format("table has no column '{}'", name));
}

double Table::number(std::size_t row, std::string_view name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  throw UsageError(fmt::format("column '{}' row {} is not numeric", name, row));
}

const std::string& Table::text(std::size_t row, std::string_view name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  throw UsageError(fmt::format("column '{}' row {} is not text", name, row));
}

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw UsageError(fmt::format("unknown format '{}' (csv|text)", s));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_csv_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << csv_quote(cells[i]);
  }
  out << '\n';
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

// Splits one CSV record; quoted fields may span lines.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (quoted) throw UsageError("CSV: unterminated quoted field");
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

}  // namespace

void emit(const Table& table, Format format, std::ostream& out) {
  if (format == Format::csv) {
    write_csv_line(out, table.columns);
    std::vector<std::string> cells;
    for (const auto& row : table.rows) {
      cells.clear();
      for (const auto& c : row) cells.push_back(cell_text(c));
      write_csv_line(out, cells);
    }
  } else {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      if (r) out << '\n';
      out << "[row " << r << "]\n";
      for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << table.columns[i] << " = " << cell_text(table.rows[r][i]) << '\n';
      }
    }
  }
  if (!out) throw std::runtime_error("write failed");
}

void emit(const Table& table, Format format, const std::filesystem::path& path) {
  if (path.empty() || path == "-") {
    emit(table, format, std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  try {
    emit(table, format, out);
    out.close();
    if (!out) throw std::runtime_error("close failed");
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("writing '{}': {}", path.string(), e.what()));
  }
}

Table read_csv(std::istream& in) {
  Table t;
  std::vector<std::string> fields;
  if (!read_record(in, fields)) return t;
  t.columns = fields;
  while (read_record(in, fields)) {
    if (fields.size() != t.columns.size()) {
      throw UsageError(fmt::format("CSV row {} has {} fields, header has {}", t.rows.size() + 1, fields.size(),
                                   t.columns.size()));
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (auto& f : fields) {
      double v = 0.0;
      if (parse_number(f, v)) {
        row.emplace_back(v);
      } else {
        row.emplace_back(std::move(f));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot open '{}'", path.string()));
  return read_csv(in);
}

std::string flags_string(const RegimeFlags& f) {
  return fmt::format("high_noise={};small_theta={};small_eta={};eta_vs_invn2={}", int(f.high_noise),
                     int(f.small_theta), int(f.small_eta), int(f.eta_vs_invn2));
}

namespace {

void line(std::ostream& out, std::string_view key, double v) { out << key << " = " << format_double(v) << '\n'; }
void line(std::ostream& out, std::string_view key, std::string_view v) { out << key << " = " << v << '\n'; }

std::string cutoff_list(const ProtocolParams& p) {
  std::string out;
  try {
    const auto c = p.resolved_cutoffs();
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + std::to_string(c[i]);
  } catch (const std::exception&) {
    out = "unresolved";
  }
  return out;
}

void param_lines(std::ostream& out, const ProtocolParams& p) {
  line(out, "theta", p.theta);
  line(out, "eta", p.eta);
  line(out, "nbar2", p.nbar2);
  line(out, "nbar3", p.nbar3);
  line(out, "cutoff", cutoff_list(p));
  line(out, "background", to_string(p.background));
  line(out, "idler", to_string(p.idler));
}

}  // namespace

void write_text(const BoundReport& r, std::ostream& out) {
  out << "[bound_report]\n";
  param_lines(out, r.params);
  line(out, "shots", r.shots);
  line(out, "s_star", r.s_star);
  line(out, "q_star", r.q_star);
  line(out, "exponent", r.exponent);
  line(out, "q_half", r.q_half);
  line(out, "q_zero", r.q_zero);
  line(out, "q_one", r.q_one);
  line(out, "helstrom", r.helstrom);
  line(out, "p3g", r.closed_form_3g);
  line(out, "p2g", r.closed_form_2g);
  line(out, "ratio", r.ratio);
  line(out, "convexity_certified", r.convexity_certified ? "1" : "0");
  line(out, "structured", r.structured ? "1" : "0");
  line(out, "flags", flags_string(r.regime));
  for (const auto& [s, q] : r.q_curve) line(out, fmt::format("q_curve.{}", format_double(s)), q);
  for (const auto& w : r.warnings) line(out, "warning", w);
  for (const auto& n : r.notes) line(out, "note", n);
}

void write_text(const TraceAudit& a, std::ostream& out) {
  out << "[trace_audit]\n";
  param_lines(out, a.params);
  line(out, "signs", fmt::format("rho0={};psi_term={};background_terms={}", to_string(a.signs.rho0),
                                 to_string(a.signs.psi_term), to_string(a.signs.background_terms)));
  line(out, "t_paper", a.analytic_paper);
  line(out, "t_papersign", a.paper_sign_numeric);
  line(out, "t_principal", a.principal_numeric);
  line(out, "term.background_line", a.paper_terms.background_line);
  line(out, "term.psi_overlap", a.paper_terms.psi_overlap);
  line(out, "term.psi_cross_term", a.paper_terms.psi_cross_term);
  line(out, "term.low_block_correction", a.paper_terms.low_block_correction);
  for (const auto& e : a.error_terms) line(out, fmt::format("error_term.{}", e.name), e.magnitude);
  line(out, "tolerance", a.tolerance);
  line(out, "papersign_deviation", a.paper_sign_deviation);
  line(out, "principal_gap", a.principal_gap);
  line(out, "gap_order", a.gap_order);
  line(out, "gap_coefficient", a.gap_coefficient);
  line(out, "flags", flags_string(a.flags));
  line(out, "verdict", to_string(a.verdict));
  for (const auto& i : a.incomplete) line(out, "incomplete", i);
  for (const auto& w : a.warnings) line(out, "warning", w);
}

Table to_table(const BoundReport& r) {
  Table t;
  t.columns = {"theta", "eta",      "nbar2", "nbar3",    "background", "idler", "s_star", "q_star",
               "exponent", "q_half", "helstrom", "p3g", "p2g",        "ratio", "flags"};
  const auto& p = r.params;
  t.rows.push_back({p.theta, p.eta, p.nbar2, p.nbar3, std::string(to_string(p.background)),
                    std::string(to_string(p.idler)), r.s_star, r.q_star, r.exponent, r.q_half, r.helstrom,
                    r.closed_form_3g, r.closed_form_2g, r.ratio, flags_string(r.regime)});
  return t;
}

Table to_table(const TraceAudit& a) {
  Table t;
  t.columns = {"theta", "eta", "nbar2", "nbar3", "background", "idler", "t_paper", "t_papersign",
               "t_principal", "gap_order", "flags", "verdict"};
  const auto& p = a.params;
  t.rows.push_back({p.theta, p.eta, p.nbar2, p.nbar3, std::string(to_string(p.background)),
                    std::string(to_string(p.idler)), a.analytic_paper, a.paper_sign_numeric, a.principal_numeric,
                    a.gap_order, flags_string(a.flags), std::string(to_string(a.verdict))});
  return t;
}

}  // namespace triqi
