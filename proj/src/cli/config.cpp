#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "quadsure/cli.hpp"
#include "quadsure/errors.hpp"

namespace quadsure::cli {

void RunConfig::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive and finite");
  if (!(grid_halfwidth > 0.0)) throw DomainError("grid_halfwidth must be positive");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (format != "json" && format != "csv") throw DomainError("format must be json or csv, got '" + format + "'");
  grid().validate();
}

RunConfig merge_config(RunConfig base, const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "hbar") base.hbar = value.get<double>();
      else if (key == "grid_m") base.grid_m = value.get<int>();
      else if (key == "grid_halfwidth") base.grid_halfwidth = value.get<double>();
      else if (key == "seed") base.seed = value.get<std::uint64_t>();
      else if (key == "samples") base.samples = value.get<std::size_t>();
      else if (key == "tol") base.tol = value.get<double>();
      else if (key == "output") base.output = value.get<std::string>();
      else if (key == "format") base.format = value.get<std::string>();
      else throw DomainError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad config value: ") + e.what());
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file " + path);
  try {
    return merge_config(std::move(base), nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError("config file " + path + " is not valid JSON: " + e.what());
  }
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"hbar", c.hbar}, {"grid_m", c.grid_m},   {"grid_halfwidth", c.grid_halfwidth},
          {"seed", c.seed}, {"samples", c.samples}, {"tol", c.tol},
          {"output", c.output}, {"format", c.format}};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.empty()) throw DomainError("empty entry in list '" + text + "'");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
      throw DomainError("malformed number '" + item + "' in list '" + text + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace quadsure::cli
