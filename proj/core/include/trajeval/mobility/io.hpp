#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trajeval/mobility/types.hpp"

namespace trajeval::mobility {

/// Column names looked up in the CSV header. Either lat/lon or x/y must be
/// present; x/y columns are taken as already-projected meters.
struct CsvSchema {
  std::string user_id = "user_id";
  std::string traj_id = "traj_id";
  std::string timestamp = "timestamp";
  std::string lat = "lat";
  std::string lon = "lon";
  std::string x = "x";
  std::string y = "y";
  std::string category = "category";
};

struct IngestOptions {
  CsvSchema schema;
  /// Projection for lat/lon input. When unset, an azimuthal-equidistant
  /// projection centred on the mean input coordinate is used.
  std::optional<Crs> crs;
  /// Known labels. With `strict_vocabulary`, unknown labels are an error.
  std::optional<CategoryVocabulary> vocabulary;
  bool strict_vocabulary = false;
  /// Trajectories shorter than this are dropped (0 keeps everything).
  std::size_t min_length = 0;
  std::string name;
};

/// Parses "2024-01-31T10:00:00Z", "2024-01-31 10:00:00+02:00" or a plain
/// number of seconds.
double parse_timestamp(const std::string& text);

Dataset ingest_csv(const std::filesystem::path& path, const IngestOptions& options = {});

/// Reads `<path>.meta.json` when present so that projection and vocabulary
/// match the run that wrote the file.
Dataset load_dataset(const std::filesystem::path& path, IngestOptions options = {});

/// Writes the CSV and its `<path>.meta.json` sidecar.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);
std::string metadata_to_json(const DatasetMetadata& metadata);
DatasetMetadata metadata_from_json(const std::string& text);

}  // namespace trajeval::mobility
