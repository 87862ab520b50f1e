#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace trajeval::cli {

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

struct FileDigest {
  std::string path;
  std::string sha256;
};

/// Provenance of one CLI run. Two runs whose manifests agree on everything
/// except the timestamps produce byte-identical outputs.
struct RunManifest {
  std::string command;
  std::string config_hash;  // sha256 of the resolved configuration
  std::string config;       // the resolved configuration itself (JSON)
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  std::vector<std::uint64_t> seeds;
  std::string tool_version;
  std::string started_at;
  std::string finished_at;
};

std::string utc_now();
std::string manifest_to_json(const RunManifest& m);

}  // namespace trajeval::cli
