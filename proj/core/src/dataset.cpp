#include "iscrc/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "iscrc/errors.hpp"

namespace iscrc {

namespace {

using nlohmann::json;

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

double parse_cell(const std::string& token, const std::filesystem::path& path,
                  std::size_t row) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  while (end != nullptr && (*end == ' ' || *end == '\t')) {
    ++end;
  }
  if (end == begin || end == nullptr || *end != '\0') {
    throw DataError(path.string() + ": row " + std::to_string(row) +
                    ": bad number '" + token + "'");
  }
  return value;
}

}  // namespace

FeatureMatrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<double> cells;
    std::stringstream fields(line);
    std::string token;
    while (std::getline(fields, token, ',')) {
      cells.push_back(parse_cell(token, path, line_no));
    }
    if (line.back() == ',') {
      throw DataError(path.string() + ": row " + std::to_string(line_no) +
                      ": trailing comma");
    }
    if (!rows.empty() && cells.size() != rows.front().size()) {
      throw DataError(path.string() + ": row " + std::to_string(line_no) +
                      ": expected " + std::to_string(rows.front().size()) +
                      " columns, found " + std::to_string(cells.size()));
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty() || rows.front().empty()) {
    throw DataError(path.string() + ": empty matrix");
  }
  FeatureMatrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.front().size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

void write_csv_matrix(const std::filesystem::path& path,
                      const FeatureMatrix& m) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  char buffer[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", m(i, j));
      if (j > 0) {
        out << ',';
      }
      out << buffer;
    }
    out << '\n';
  }
  if (!out) {
    throw DataError("write failed for " + path.string());
  }
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  DatasetManifest manifest;
  manifest.root = path.has_parent_path() ? path.parent_path()
                                         : std::filesystem::path(".");
  try {
    manifest.feature_dim = doc.at("feature_dim").get<Eigen::Index>();
    manifest.normalize = doc.value("normalize", true);
    for (const auto& entry : doc.at("entries")) {
      ManifestEntry e;
      e.class_label = entry.at("class").get<std::string>();
      e.set_id = entry.at("set").get<std::string>();
      e.file_path = entry.at("file").get<std::string>();
      e.role = entry.at("role").get<std::string>();
      if (e.role != "gallery" && e.role != "query") {
        throw DataError(path.string() + ": entry '" + e.set_id +
                        "': role must be gallery or query");
      }
      manifest.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (manifest.feature_dim < 1) {
    throw DataError(path.string() + ": feature_dim must be positive");
  }
  if (manifest.entries.empty()) {
    throw DataError(path.string() + ": no entries");
  }
  return manifest;
}

Dataset load_dataset(const DatasetManifest& manifest, Eigen::Index max_frames) {
  if (max_frames < 0) {
    throw DataError("load_dataset: max_frames must be nonnegative");
  }
  Dataset data;
  for (const auto& entry : manifest.entries) {
    const auto file = manifest.root / entry.file_path;
    if (!std::filesystem::exists(file)) {
      throw DataError("missing set file " + file.string());
    }
    FeatureMatrix features = read_csv_matrix(file);
    if (features.rows() != manifest.feature_dim) {
      throw DimensionError(file.string() + ": feature dimension " +
                           std::to_string(features.rows()) +
                           " != manifest feature_dim " +
                           std::to_string(manifest.feature_dim));
    }
    if (max_frames > 0 && features.cols() > max_frames) {
      features = features.leftCols(max_frames).eval();
    }
    if (manifest.normalize) {
      features = normalized_columns(features, file.string());
    } else {
      validate_features(features, file.string());
    }
    ImageSet set{entry.class_label, entry.set_id, std::move(features)};
    if (entry.role == "gallery") {
      data.galleries.push_back(std::move(set));
    } else {
      data.queries.push_back(std::move(set));
    }
  }
  return data;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& data,
                   Eigen::Index feature_dim, bool normalize) {
  std::filesystem::create_directories(dir);
  json entries = json::array();
  const auto emit = [&](const ImageSet& set, const char* role) {
    const std::string file = set.id + ".csv";
    write_csv_matrix(dir / file, set.features);
    entries.push_back({{"class", set.label},
                       {"set", set.id},
                       {"file", file},
                       {"role", role}});
  };
  for (const auto& set : data.galleries) {
    emit(set, "gallery");
  }
  for (const auto& set : data.queries) {
    emit(set, "query");
  }
  const json manifest = {{"feature_dim", feature_dim},
                         {"normalize", normalize},
                         {"entries", entries}};
  std::ofstream out(dir / "manifest.json");
  if (!out) {
    throw DataError("cannot write " + (dir / "manifest.json").string());
  }
  out << manifest.dump(2) << '\n';
}

void save_gallery(const std::filesystem::path& path,
                  const CompressedGalleryCollection& gallery) {
  json classes = json::array();
  for (std::size_t k = 0; k < gallery.class_count(); ++k) {
    const auto block = gallery.class_block(k);
    json atoms = json::array();
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
      json atom = json::array();
      for (Eigen::Index i = 0; i < block.rows(); ++i) {
        atom.push_back(block(i, j));
      }
      atoms.push_back(std::move(atom));
    }
    classes.push_back(
        {{"label", gallery.labels()[k]}, {"atoms", std::move(atoms)}});
  }
  const json doc = {{"dimension", gallery.dimension()},
                    {"classes", std::move(classes)}};
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

CompressedGalleryCollection load_gallery(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  std::vector<std::pair<std::string, FeatureMatrix>> parts;
  try {
    const auto dimension = doc.at("dimension").get<Eigen::Index>();
    for (const auto& cls : doc.at("classes")) {
      const auto label = cls.at("label").get<std::string>();
      const auto& atoms = cls.at("atoms");
      if (atoms.empty()) {
        throw DataError(path.string() + ": class '" + label + "' has no atoms");
      }
      FeatureMatrix block(dimension,
                          static_cast<Eigen::Index>(atoms.size()));
      Eigen::Index j = 0;
      for (const auto& atom : atoms) {
        if (static_cast<Eigen::Index>(atom.size()) != dimension) {
          throw DataError(path.string() + ": class '" + label +
                          "': atom length != dimension");
        }
        for (Eigen::Index i = 0; i < dimension; ++i) {
          block(i, j) = atom.at(static_cast<std::size_t>(i)).get<double>();
        }
        ++j;
      }
      parts.emplace_back(label, std::move(block));
    }
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return CompressedGalleryCollection::from_classes(std::move(parts));
}

SyntheticSpec read_synthetic_spec(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  SyntheticSpec spec;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "classes") {
        spec.classes = value.get<int>();
      } else if (key == "dim") {
        spec.dim = value.get<int>();
      } else if (key == "subspace_dim") {
        spec.subspace_dim = value.get<int>();
      } else if (key == "noise_sigma") {
        spec.noise_sigma = value.get<double>();
      } else if (key == "frames_per_set") {
        spec.frames_per_set = value.get<int>();
      } else if (key == "sets_per_class") {
        spec.sets_per_class = value.get<int>();
      } else if (key == "seed") {
        spec.seed = value.get<std::uint64_t>();
      } else if (key == "geometry") {
        const auto name = value.get<std::string>();
        if (name == "subspace") {
          spec.geometry = SyntheticGeometry::subspace;
        } else if (name == "shells") {
          spec.geometry = SyntheticGeometry::shells;
        } else {
          throw DataError(path.string() + ": unknown geometry '" + name + "'");
        }
      } else {
        throw DataError(path.string() + ": unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace iscrc
