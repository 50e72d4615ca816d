#include "iscrc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"

#include "iscrc/baselines.hpp"
#include "iscrc/errors.hpp"
#include "iscrc/regularized_hull.hpp"
#include "rng_internal.hpp"

namespace iscrc {

namespace {

using nlohmann::json;

const char* kernel_name(KernelKind kind) {
  return kind == KernelKind::linear ? "linear" : "gaussian";
}

SolverConfig solver_from_json(const json& doc, const std::string& where) {
  SolverConfig solver;
  for (const auto& [key, value] : doc.items()) {
    if (key == "lambda1") {
      solver.lambda1 = value.get<double>();
    } else if (key == "lambda2") {
      solver.lambda2 = value.get<double>();
    } else if (key == "multiplier_init") {
      solver.multiplier_init = value.get<double>();
    } else if (key == "gamma") {
      solver.gamma = value.get<double>();
    } else if (key == "tau") {
      solver.tau = value.get<double>();
    } else if (key == "kernel") {
      const auto name = value.get<std::string>();
      if (name == "linear") {
        solver.kernel.kind = KernelKind::linear;
      } else if (name == "gaussian") {
        solver.kernel.kind = KernelKind::gaussian;
      } else {
        throw DataError(where + ": unknown kernel '" + name + "'");
      }
    } else if (key == "delta") {
      solver.kernel.delta = value.get<double>();
    } else if (key == "max_outer_iters") {
      solver.max_outer_iters = value.get<int>();
    } else if (key == "lasso_tol") {
      solver.lasso_tol = value.get<double>();
    } else if (key == "lasso_max_iters") {
      solver.lasso_max_iters = value.get<int>();
    } else if (key == "qp_tol") {
      solver.qp_tol = value.get<double>();
    } else if (key == "qp_max_iters") {
      solver.qp_max_iters = value.get<int>();
    } else if (key == "atoms_per_class") {
      solver.atoms_per_class = value.get<int>();
    } else {
      throw DataError(where + ": unknown solver key '" + key + "'");
    }
  }
  return solver;
}

json solver_to_json(const SolverConfig& solver) {
  json doc = {{"lambda1", solver.lambda1},
              {"lambda2", solver.lambda2},
              {"tau", solver.tau},
              {"kernel", kernel_name(solver.kernel.kind)},
              {"delta", solver.kernel.delta},
              {"max_outer_iters", solver.max_outer_iters},
              {"lasso_tol", solver.lasso_tol},
              {"lasso_max_iters", solver.lasso_max_iters},
              {"qp_tol", solver.qp_tol},
              {"qp_max_iters", solver.qp_max_iters},
              {"atoms_per_class", solver.atoms_per_class}};
  if (solver.multiplier_init) {
    doc["multiplier_init"] = *solver.multiplier_init;
  }
  if (solver.gamma) {
    doc["gamma"] = *solver.gamma;
  }
  return doc;
}

json synthetic_to_json(const SyntheticSpec& spec) {
  return {{"classes", spec.classes},
          {"dim", spec.dim},
          {"subspace_dim", spec.subspace_dim},
          {"noise_sigma", spec.noise_sigma},
          {"frames_per_set", spec.frames_per_set},
          {"sets_per_class", spec.sets_per_class},
          {"seed", spec.seed},
          {"geometry",
           spec.geometry == SyntheticGeometry::subspace ? "subspace"
                                                        : "shells"}};
}

json config_to_json(const BenchConfig& config) {
  json dataset;
  if (config.manifest) {
    dataset = {{"manifest", config.manifest->string()}};
  } else if (config.synthetic) {
    dataset = {{"synthetic", synthetic_to_json(*config.synthetic)}};
  }
  json methods = json::array();
  for (const auto m : config.methods) {
    methods.push_back(method_name(m));
  }
  return {{"dataset", std::move(dataset)},
          {"methods", std::move(methods)},
          {"folds", config.folds},
          {"frames", config.frames},
          {"jobs", config.jobs},
          {"seed", config.seed},
          {"solver", solver_to_json(config.solver)},
          {"gallery",
           {{"compress", config.compress},
            {"atoms_rh", config.atoms_rh},
            {"atoms_kch", config.atoms_kch}}}};
}

struct QueryOutcome {
  bool correct = false;
  double elapsed = 0.0;
  std::string error;
};

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) {
    return 0.0;
  }
  double sum = 0.0;
  for (const double v : values) {
    sum += (v - mean) * (v - mean);
  }
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "rh-l1") {
    return Method::rh_l1;
  }
  if (name == "rh-l2") {
    return Method::rh_l2;
  }
  if (name == "kch") {
    return Method::kch;
  }
  if (name == "src") {
    return Method::src;
  }
  if (name == "crc") {
    return Method::crc;
  }
  throw DataError("unknown method '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::rh_l1:
      return "rh-l1";
    case Method::rh_l2:
      return "rh-l2";
    case Method::kch:
      return "kch";
    case Method::src:
      return "src";
    case Method::crc:
      return "crc";
  }
  throw DataError("unknown method value");
}

ClassificationResult run_method(Method m, const FeatureMatrix& Y,
                                const CompressedGalleryCollection& gallery,
                                const SolverConfig& config, GramCache* cache) {
  switch (m) {
    case Method::rh_l1:
      return classify_l1(Y, gallery, config);
    case Method::rh_l2:
      return classify_l2(Y, gallery, config);
    case Method::kch:
      return classify_kernel_hull(Y, gallery, config, cache);
    case Method::src:
      return classify_src(Y, gallery, config);
    case Method::crc:
      return classify_crc(Y, gallery, config);
  }
  throw DataError("unknown method value");
}

void BenchConfig::validate() const {
  if (manifest.has_value() == synthetic.has_value()) {
    throw DataError("bench config: exactly one of manifest or synthetic");
  }
  if (methods.empty()) {
    throw DataError("bench config: no methods");
  }
  if (folds < 1) {
    throw DataError("bench config: folds must be at least 1");
  }
  if (frames < 0) {
    throw DataError("bench config: frames must be nonnegative");
  }
  if (jobs < 1) {
    throw DataError("bench config: jobs must be at least 1");
  }
  if (atoms_rh < 1 || atoms_kch < 1) {
    throw DataError("bench config: atom counts must be at least 1");
  }
  solver.validate();
}

BenchConfig read_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }

  BenchConfig config;
  const std::string where = path.string();
  try {
    const auto& dataset = doc.at("dataset");
    if (dataset.contains("manifest")) {
      std::filesystem::path m = dataset.at("manifest").get<std::string>();
      if (m.is_relative() && path.has_parent_path()) {
        m = path.parent_path() / m;
      }
      config.manifest = m;
    }
    if (dataset.contains("synthetic")) {
      SyntheticSpec spec;
      const auto& s = dataset.at("synthetic");
      spec.classes = s.value("classes", spec.classes);
      spec.dim = s.value("dim", spec.dim);
      spec.subspace_dim = s.value("subspace_dim", spec.subspace_dim);
      spec.noise_sigma = s.value("noise_sigma", spec.noise_sigma);
      spec.frames_per_set = s.value("frames_per_set", spec.frames_per_set);
      spec.sets_per_class = s.value("sets_per_class", spec.sets_per_class);
      spec.seed = s.value("seed", spec.seed);
      const std::string geometry = s.value("geometry", "subspace");
      if (geometry == "subspace") {
        spec.geometry = SyntheticGeometry::subspace;
      } else if (geometry == "shells") {
        spec.geometry = SyntheticGeometry::shells;
      } else {
        throw DataError(where + ": unknown geometry '" + geometry + "'");
      }
      config.synthetic = spec;
    }
    for (const auto& name : doc.at("methods")) {
      config.methods.push_back(parse_method(name.get<std::string>()));
    }
    config.folds = doc.value("folds", config.folds);
    config.frames = doc.value("frames", config.frames);
    config.jobs = doc.value("jobs", config.jobs);
    config.seed = doc.value("seed", config.seed);
    if (doc.contains("solver")) {
      config.solver = solver_from_json(doc.at("solver"), where);
    }
    if (doc.contains("gallery")) {
      const auto& g = doc.at("gallery");
      config.compress = g.value("compress", config.compress);
      config.atoms_rh = g.value("atoms_rh", config.atoms_rh);
      config.atoms_kch = g.value("atoms_kch", config.atoms_kch);
    }
  } catch (const json::exception& e) {
    throw DataError(where + ": " + e.what());
  }
  config.validate();
  return config;
}

BenchReport run_benchmark(const BenchConfig& config) {
  config.validate();

  Dataset data;
  if (config.manifest) {
    data = load_dataset(read_manifest(*config.manifest), config.frames);
  } else {
    auto generated = generate_synthetic(*config.synthetic);
    data.galleries = std::move(generated.galleries);
    data.queries = std::move(generated.queries);
    if (config.frames > 0) {
      for (auto* sets : {&data.galleries, &data.queries}) {
        for (auto& set : *sets) {
          if (set.features.cols() > config.frames) {
            set.features = set.features.leftCols(config.frames).eval();
          }
        }
      }
    }
  }
  if (data.queries.empty()) {
    throw DataError("bench: dataset has no query sets");
  }
  if (static_cast<std::size_t>(config.folds) > data.queries.size()) {
    throw DataError("bench: more folds than query sets");
  }

  CompressedGalleryCollection gallery_main;
  CompressedGalleryCollection gallery_kernel;
  if (config.compress) {
    CompressionConfig cc;
    cc.seed = config.seed;
    cc.atoms = config.atoms_rh;
    gallery_main = compress_gallery(data.galleries, cc);
    cc.atoms = config.atoms_kch;
    gallery_kernel = compress_gallery(data.galleries, cc);
  } else {
    gallery_main = verbatim_gallery(data.galleries, false);
    gallery_kernel = gallery_main;
  }

  std::vector<std::size_t> order(data.queries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  detail::Rng rng(config.seed);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> fold_members(
      static_cast<std::size_t>(config.folds));
  for (std::size_t i = 0; i < order.size(); ++i) {
    fold_members[i % static_cast<std::size_t>(config.folds)].push_back(
        order[i]);
  }

  BenchReport report;
  report.config_snapshot = config_to_json(config).dump(2);
  for (const auto& fold : fold_members) {
    std::vector<std::string> ids;
    ids.reserve(fold.size());
    for (const std::size_t q : fold) {
      ids.push_back(data.queries[q].id);
    }
    report.folds.push_back(std::move(ids));
  }

  for (const Method method : config.methods) {
    const auto& gallery =
        method == Method::kch ? gallery_kernel : gallery_main;
    GramCache cache;

    std::vector<QueryOutcome> outcomes(data.queries.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= data.queries.size()) {
          return;
        }
        try {
          const auto r = run_method(method, data.queries[i].features, gallery,
                                    config.solver, &cache);
          outcomes[i].correct = r.predicted == data.queries[i].label;
          outcomes[i].elapsed = r.elapsed_seconds;
        } catch (const std::exception& e) {
          outcomes[i].error = e.what();
        }
      }
    };
    const std::size_t workers = std::min<std::size_t>(
        static_cast<std::size_t>(config.jobs), data.queries.size());
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
      }
      for (auto& t : pool) {
        t.join();
      }
    }

    MethodRow row;
    row.method = method_name(method);
    row.query_count = static_cast<int>(data.queries.size());
    for (const auto& outcome : outcomes) {
      if (!outcome.error.empty()) {
        row.error = outcome.error;
        break;
      }
    }
    if (row.error.empty()) {
      double elapsed = 0.0;
      for (const auto& outcome : outcomes) {
        elapsed += outcome.elapsed;
      }
      row.mean_query_seconds =
          elapsed / static_cast<double>(data.queries.size());
      for (const auto& fold : fold_members) {
        int correct = 0;
        for (const std::size_t q : fold) {
          correct += outcomes[q].correct ? 1 : 0;
        }
        row.fold_accuracies.push_back(static_cast<double>(correct) /
                                      static_cast<double>(fold.size()));
      }
      row.accuracy_mean =
          std::accumulate(row.fold_accuracies.begin(),
                          row.fold_accuracies.end(), 0.0) /
          static_cast<double>(row.fold_accuracies.size());
      row.accuracy_std = sample_std(row.fold_accuracies, row.accuracy_mean);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_report_json(const std::filesystem::path& path,
                       const BenchReport& report) {
  json methods = json::array();
  for (const auto& row : report.rows) {
    json entry = {{"method", row.method},
                  {"query_count", row.query_count}};
    if (row.error.empty()) {
      entry["fold_accuracies"] = row.fold_accuracies;
      entry["accuracy_mean"] = row.accuracy_mean;
      entry["accuracy_std"] = row.accuracy_std;
      entry["mean_query_seconds"] = row.mean_query_seconds;
      entry["error"] = nullptr;
    } else {
      entry["fold_accuracies"] = json::array();
      entry["error"] = row.error;
    }
    methods.push_back(std::move(entry));
  }
  json doc = {{"config", json::parse(report.config_snapshot)},
              {"folds", report.folds},
              {"methods", std::move(methods)}};
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

std::string format_report_table(const BenchReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %-20s %-14s %s\n", "method",
                "accuracy", "time/query", "queries");
  out << line;
  for (const auto& row : report.rows) {
    if (!row.error.empty()) {
      std::snprintf(line, sizeof(line), "%-8s ERROR: %s\n", row.method.c_str(),
                    row.error.c_str());
      out << line;
      continue;
    }
    char accuracy[48];
    std::snprintf(accuracy, sizeof(accuracy), "%.3f +/- %.3f",
                  row.accuracy_mean, row.accuracy_std);
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.4f s", row.mean_query_seconds);
    std::snprintf(line, sizeof(line), "%-8s %-20s %-14s %d\n",
                  row.method.c_str(), accuracy, timing, row.query_count);
    out << line;
  }
  return out.str();
}

}  // namespace iscrc
