#include "cli/support.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include "third_party/toml.hpp"

#include "crosslink/digest.hpp"
#include "crosslink/error.hpp"

namespace crosslink::cli {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError(fmt::format("write failed for '{}'", path.string()));
}

nlohmann::json load_config(const fs::path& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  if (path.extension() == ".toml") {
    try {
      const auto table = toml::parse(text, path.string());
      std::ostringstream json_text;
      json_text << toml::json_formatter{table};
      doc = nlohmann::json::parse(json_text.str());
    } catch (const toml::parse_error& e) {
      throw UsageError(fmt::format("{}: {}", path.string(), e.description()));
    }
  } else {
    doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw UsageError(fmt::format("{}: not valid JSON", path.string()));
  }
  if (!doc.is_object()) throw UsageError(fmt::format("{}: config must be a table", path.string()));
  return doc;
}

namespace {

double parse_number(std::string_view name, std::string_view text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(std::string(text), &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw UsageError(fmt::format("parameter '{}': '{}' is not a number", name, text));
}

std::pair<std::string, std::string> split_pair(const std::string& pair) {
  const auto eq = pair.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
    throw UsageError(fmt::format("expected name=value, got '{}'", pair));
  }
  return {pair.substr(0, eq), pair.substr(eq + 1)};
}

}  // namespace

ml::ParamMap parse_params(const std::vector<std::string>& pairs) {
  ml::ParamMap params;
  for (const auto& pair : pairs) {
    auto [name, value] = split_pair(pair);
    params[name] = parse_number(name, value);
  }
  return params;
}

ml::ParamGrid parse_grid(const std::vector<std::string>& axes) {
  ml::ParamGrid grid;
  for (const auto& axis : axes) {
    auto [name, list] = split_pair(axis);
    auto& values = grid[name];
    std::size_t start = 0;
    while (start <= list.size()) {
      const auto comma = std::min(list.find(',', start), list.size());
      values.push_back(parse_number(name, std::string_view(list).substr(start, comma - start)));
      start = comma + 1;
    }
  }
  return grid;
}

ml::ParamMap params_from_json(const nlohmann::json& obj) {
  ml::ParamMap params;
  if (obj.is_null()) return params;
  if (!obj.is_object()) throw UsageError("model parameters must be a table");
  for (const auto& [name, value] : obj.items()) {
    if (!value.is_number()) throw UsageError(fmt::format("parameter '{}' must be a number", name));
    params[name] = value.get<double>();
  }
  return params;
}

ml::Algorithm algorithm_or_throw(std::string_view name) {
  if (auto alg = ml::parse_algorithm(name)) return *alg;
  throw UsageError(fmt::format("unknown algorithm '{}'", name));
}

RunManifest::RunManifest(std::string command)
    : command_(std::move(command)), started_(std::chrono::steady_clock::now()) {}

void RunManifest::flag(std::string name, std::vector<std::string> values) {
  flags_[std::move(name)] = std::move(values);
}

void RunManifest::input(const fs::path& path) { inputs_.emplace_back(path.string(), sha256_file(path)); }

void RunManifest::output(const fs::path& path) { outputs_.push_back(path.string()); }

void RunManifest::seed(std::string name, std::uint64_t value) { seeds_[std::move(name)] = value; }

void RunManifest::note(std::string text) { notes_.push_back(std::move(text)); }

std::string RunManifest::to_json() const {
  ordered_json doc;
  doc["command"] = command_;
  doc["tool_version"] = kToolVersion;
  doc["flags"] = ordered_json::object();
  for (const auto& [name, values] : flags_) {
    doc["flags"][name] = values.size() == 1 ? ordered_json(values.front()) : ordered_json(values);
  }
  doc["inputs"] = ordered_json::array();
  for (const auto& [path, digest] : inputs_) doc["inputs"].push_back({{"path", path}, {"sha256", digest}});
  doc["outputs"] = outputs_;
  doc["seeds"] = ordered_json::object();
  for (const auto& [name, value] : seeds_) doc["seeds"][name] = value;
  if (!notes_.empty()) doc["notes"] = notes_;
  doc["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  return doc.dump(2) + "\n";
}

void emit(RunManifest& manifest, const std::optional<fs::path>& out, std::string_view bytes) {
  if (out) {
    write_file(*out, bytes);
    manifest.output(*out);
    if (!manifest.default_path()) manifest.set_default_path(fs::path(out->string() + ".manifest.json"));
  } else {
    std::cout << bytes;
    std::cout.flush();
  }
}

}  // namespace crosslink::cli
