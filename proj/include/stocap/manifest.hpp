#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stocap/serialization.hpp"

namespace stocap {

inline constexpr const char* kToolVersion = "1.0.0";

struct InputDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string subcommand;
  Json config = Json::object();
  std::vector<InputDigest> inputs;
  std::vector<std::uint64_t> seeds;
  std::string prng_id;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
};

void to_json(Json& j, const RunManifest& m);
void from_json(const Json& j, RunManifest& m);

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

// UTC wall clock formatted as ISO-8601, or the fixed value when given.
class Clock {
 public:
  explicit Clock(std::optional<std::string> fixed = std::nullopt) : fixed_(std::move(fixed)) {}
  std::string now() const;
  bool fixed() const { return fixed_.has_value(); }

 private:
  std::optional<std::string> fixed_;
};

// <dir>/manifest.json for directory outputs, <file>.manifest.json otherwise.
std::filesystem::path manifest_path_for_dir(const std::filesystem::path& dir);
std::filesystem::path manifest_path_for_file(const std::filesystem::path& file);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);

}  // namespace stocap
