#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "iscrc/dataset.hpp"
#include "iscrc/kernel_hull.hpp"
#include "iscrc/model.hpp"
#include "iscrc/synthetic.hpp"

namespace iscrc {

enum class Method { rh_l1, rh_l2, kch, src, crc };

Method parse_method(const std::string& name);  // "rh-l1", "rh-l2", ...
std::string method_name(Method m);

/// Dispatches one query set to the matching classifier. The cache is only
/// consulted by the kernel method.
ClassificationResult run_method(Method m, const FeatureMatrix& Y,
                                const CompressedGalleryCollection& gallery,
                                const SolverConfig& config,
                                GramCache* cache = nullptr);

struct BenchConfig {
  /// Exactly one of manifest / synthetic selects the data source.
  std::optional<std::filesystem::path> manifest;
  std::optional<SyntheticSpec> synthetic;
  std::vector<Method> methods;
  int folds = 5;
  Eigen::Index frames = 0;  // leading-frame cap per set, 0 keeps all
  int jobs = 1;
  std::uint64_t seed = 0;  // drives the fold shuffle
  SolverConfig solver{};

  /// verbatim scores against raw gallery columns; compressed learns
  /// per-class dictionaries first (atoms_rh for the hull methods and the
  /// baselines, atoms_kch for the kernel method).
  bool compress = false;
  int atoms_rh = 10;
  int atoms_kch = 50;

  void validate() const;
};

BenchConfig read_bench_config(const std::filesystem::path& path);

struct MethodRow {
  std::string method;
  std::vector<double> fold_accuracies;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  double mean_query_seconds = 0.0;
  int query_count = 0;
  std::string error;  // nonempty when the method aborted
};

struct BenchReport {
  std::vector<MethodRow> rows;
  /// Query set ids per fold; folds partition the query list.
  std::vector<std::vector<std::string>> folds;
  std::string config_snapshot;  // the effective config as JSON text
};

/// Shuffles query sets with the config seed, deals them round-robin into
/// disjoint folds, and evaluates every requested method against the fixed
/// gallery. A method that throws is reported in its row's error field while
/// the remaining methods still run. Queries within a method are evaluated
/// by up to config.jobs worker threads.
BenchReport run_benchmark(const BenchConfig& config);

void write_report_json(const std::filesystem::path& path,
                       const BenchReport& report);
std::string format_report_table(const BenchReport& report);

}  // namespace iscrc
