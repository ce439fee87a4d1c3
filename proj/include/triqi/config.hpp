#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "triqi/states.hpp"

namespace triqi {

/// Plain-text key=value file. Blank lines and lines starting with '#' are
/// skipped; `axis.<name>=v1,v2,...` lines declare sweep axes in file order.
struct ConfigFile {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
};

ConfigFile parse_config(std::istream& in, std::string_view origin = "<config>");
ConfigFile load_config(const std::filesystem::path& path);

std::vector<std::string> split_list(std::string_view s, char sep = ',');
double parse_double(std::string_view s, std::string_view what);
std::size_t parse_size(std::string_view s, std::string_view what);

/// Parameter names accepted by set_param and as sweep axes.
const std::vector<std::string>& param_names();
bool is_param_name(std::string_view name);

/// Assigns one ProtocolParams field from text. `nbar` sets both nbar2 and
/// nbar3; `cutoff` takes one value (signal modes, idler 2) or three.
void set_param(ProtocolParams& p, std::string_view key, std::string_view value);

}  // namespace triqi
