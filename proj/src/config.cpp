#include "triqi/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

#include "triqi/errors.hpp"

namespace triqi {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    const auto item = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::string_view what) {
  const std::string text(trim(s));
  if (text.empty()) throw UsageError(fmt::format("{}: empty value", what));
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw UsageError(fmt::format("{}: '{}' is not a number", what, text));
  }
  return v;
}

std::size_t parse_size(std::string_view s, std::string_view what) {
  const std::string text(trim(s));
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw UsageError(fmt::format("{}: '{}' is not a non-negative integer", what, text));
  }
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) throw UsageError(fmt::format("{}: '{}' out of range", what, text));
  return static_cast<std::size_t>(v);
}

ConfigFile parse_config(std::istream& in, std::string_view origin) {
  ConfigFile cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(fmt::format("{}:{}: expected key=value, got '{}'", origin, number, t));
    }
    const std::string key(trim(t.substr(0, eq)));
    const std::string value(trim(t.substr(eq + 1)));
    if (key.empty()) throw UsageError(fmt::format("{}:{}: empty key", origin, number));
    if (key.rfind("axis.", 0) == 0) {
      const std::string name = key.substr(5);
      if (!is_param_name(name)) {
        throw UsageError(fmt::format("{}:{}: '{}' is not a parameter name", origin, number, name));
      }
      for (const auto& [existing, values] : cfg.axes) {
        if (existing == name) throw UsageError(fmt::format("{}:{}: axis '{}' given twice", origin, number, name));
      }
      auto values = split_list(value);
      for (const auto& v : values) {
        if (v.empty()) throw UsageError(fmt::format("{}:{}: empty value in axis '{}'", origin, number, name));
      }
      cfg.axes.emplace_back(name, std::move(values));
    } else {
      cfg.entries.emplace_back(key, value);
    }
  }
  return cfg;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open config file '{}'", path.string()));
  return parse_config(in, path.string());
}

const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names = {"theta",  "eta",   "nbar",     "nbar2",       "nbar3",
                                                 "cutoff", "background", "idler", "max_tail",   "dense_limit",
                                                 "shots",  "kappa", "ns"};
  return names;
}

bool is_param_name(std::string_view name) {
  const auto& n = param_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

void set_param(ProtocolParams& p, std::string_view key, std::string_view value) {
  const std::string what(key);
  if (key == "theta") {
    p.theta = parse_double(value, what);
  } else if (key == "eta") {
    p.eta = parse_double(value, what);
  } else if (key == "nbar") {
    p.nbar2 = p.nbar3 = parse_double(value, what);
  } else if (key == "nbar2") {
    p.nbar2 = parse_double(value, what);
  } else if (key == "nbar3") {
    p.nbar3 = parse_double(value, what);
  } else if (key == "cutoff") {
    const auto parts = split_list(value);
    if (parts.size() == 1) {
      const auto c = parse_size(parts[0], what);
      p.cutoffs = {2, c, c};
    } else if (parts.size() == 3) {
      p.cutoffs.clear();
      for (const auto& part : parts) p.cutoffs.push_back(parse_size(part, what));
    } else {
      throw UsageError("cutoff: give one value (signal modes) or three (idler,signal,signal)");
    }
  } else if (key == "background") {
    p.background = parse_background(value);
  } else if (key == "idler") {
    p.idler = parse_idler(value);
  } else if (key == "max_tail") {
    p.max_tail = parse_double(value, what);
  } else if (key == "dense_limit") {
    p.dense_limit = parse_size(value, what);
  } else if (key == "shots") {
    p.shots = parse_double(value, what);
  } else if (key == "kappa") {
    p.kappa = parse_double(value, what);
  } else if (key == "ns") {
    p.ns = parse_double(value, what);
  } else {
    throw UsageError(fmt::format("unknown parameter '{}'", key));
  }
}

}  // namespace triqi
