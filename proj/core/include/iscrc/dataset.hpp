#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "iscrc/compression.hpp"
#include "iscrc/model.hpp"
#include "iscrc/synthetic.hpp"

namespace iscrc {

/// On-disk dataset description. Each entry names one CSV whose rows are
/// feature dimensions and whose columns are frames, header-free.
struct ManifestEntry {
  std::string class_label;
  std::string set_id;
  std::string file_path;  // relative to the manifest's directory
  std::string role;       // "gallery" or "query"
};

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;
  Eigen::Index feature_dim = 0;
  bool normalize = true;
};

struct Dataset {
  std::vector<ImageSet> galleries;
  std::vector<ImageSet> queries;
};

/// Reads a header-free numeric CSV into a matrix, rows x columns as written.
/// Ragged rows or unparsable fields raise DataError naming the row.
FeatureMatrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path,
                      const FeatureMatrix& m);

DatasetManifest read_manifest(const std::filesystem::path& path);

/// Loads every entry, checks dimensions against the manifest, optionally
/// normalizes columns, and keeps at most max_frames leading columns per set
/// (0 keeps all; a set smaller than the cap is used whole).
Dataset load_dataset(const DatasetManifest& manifest,
                     Eigen::Index max_frames = 0);

/// Writes the dataset as CSVs plus a manifest.json under dir.
void write_dataset(const std::filesystem::path& dir, const Dataset& data,
                   Eigen::Index feature_dim, bool normalize);

/// Gallery collection serialization for the compress/classify round trip.
void save_gallery(const std::filesystem::path& path,
                  const CompressedGalleryCollection& gallery);
CompressedGalleryCollection load_gallery(const std::filesystem::path& path);

SyntheticSpec read_synthetic_spec(const std::filesystem::path& path);

}  // namespace iscrc
