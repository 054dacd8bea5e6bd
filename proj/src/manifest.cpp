#include "stocap/manifest.hpp"

#include <chrono>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

namespace stocap {

void to_json(Json& j, const RunManifest& m) {
  Json inputs = Json::array();
  for (const auto& in : m.inputs) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
  j = {{"tool_version", m.tool_version}, {"subcommand", m.subcommand}, {"config", m.config},
       {"inputs", inputs},               {"seeds", m.seeds},           {"prng", m.prng_id},
       {"started_at", m.started_at},     {"finished_at", m.finished_at}, {"outputs", m.outputs}};
}

void from_json(const Json& j, RunManifest& m) {
  m = {};
  m.tool_version = j.value("tool_version", std::string{});
  m.subcommand = j.at("subcommand").get<std::string>();
  m.config = j.at("config");
  for (const auto& in : j.value("inputs", Json::array()))
    m.inputs.push_back({in.at("path").get<std::string>(), in.at("sha256").get<std::string>()});
  m.seeds = j.value("seeds", std::vector<std::uint64_t>{});
  m.prng_id = j.value("prng", std::string{});
  m.started_at = j.value("started_at", std::string{});
  m.finished_at = j.value("finished_at", std::string{});
  m.outputs = j.value("outputs", std::vector<std::string>{});
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string file_sha256(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

std::string Clock::now() const {
  if (fixed_) return *fixed_;
  const auto t = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", t);
}

std::filesystem::path manifest_path_for_dir(const std::filesystem::path& dir) {
  return dir / "manifest.json";
}

std::filesystem::path manifest_path_for_file(const std::filesystem::path& file) {
  auto p = file;
  p += ".manifest.json";
  return p;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  write_json_file(path, Json(m));
}

}  // namespace stocap
