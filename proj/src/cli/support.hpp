#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crosslink/ml/evaluation.hpp"
#include "crosslink/ml/model.hpp"

namespace crosslink::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string read_file(const fs::path& path);
/// Creates missing parent directories.
void write_file(const fs::path& path, std::string_view bytes);

/// TOML (by extension) or JSON config as a JSON object.
nlohmann::json load_config(const fs::path& path);

/// "name=value" pairs.
ml::ParamMap parse_params(const std::vector<std::string>& pairs);
/// "name=v1,v2,..." axes.
ml::ParamGrid parse_grid(const std::vector<std::string>& axes);
ml::ParamMap params_from_json(const nlohmann::json& obj);

ml::Algorithm algorithm_or_throw(std::string_view name);

/// Record of one invocation. Written next to the primary output.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void flag(std::string name, std::vector<std::string> values);
  void input(const fs::path& path);
  void output(const fs::path& path);
  void seed(std::string name, std::uint64_t value);
  void note(std::string text);
  void set_default_path(fs::path path) { default_path_ = std::move(path); }
  const std::optional<fs::path>& default_path() const { return default_path_; }

  std::string to_json() const;

 private:
  std::string command_;
  std::map<std::string, std::vector<std::string>> flags_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
  std::map<std::string, std::uint64_t> seeds_;
  std::vector<std::string> notes_;
  std::optional<fs::path> default_path_;
  std::chrono::steady_clock::time_point started_;
};

/// Primary output either to a file (recorded in the manifest) or stdout.
void emit(RunManifest& manifest, const std::optional<fs::path>& out, std::string_view bytes);

}  // namespace crosslink::cli
