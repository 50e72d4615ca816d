#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "iscrc/baselines.hpp"
#include "iscrc/bench.hpp"
#include "iscrc/compression.hpp"
#include "iscrc/dataset.hpp"
#include "iscrc/errors.hpp"
#include "iscrc/kernel_hull.hpp"
#include "iscrc/regularized_hull.hpp"
#include "iscrc/synthetic.hpp"

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> seed_override() {
  const char* raw = std::getenv("ISCRC_SEED");
  if (raw == nullptr) {
    return std::nullopt;
  }
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') {
    throw UsageError("ISCRC_SEED must be a nonnegative integer, got '" +
                     std::string(raw) + "'");
  }
  return static_cast<std::uint64_t>(value);
}

struct CompressArgs {
  std::string manifest;
  int atoms = 10;
  std::string out;
  double code_lambda = 1e-3;
  int max_iters = 30;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

void run_compress(const CompressArgs& args) {
  iscrc::CompressionConfig config;
  config.atoms = args.atoms;
  config.code_lambda = args.code_lambda;
  config.max_iters = args.max_iters;
  config.tol = args.tol;
  config.seed = seed_override().value_or(args.seed);

  const auto manifest = iscrc::read_manifest(args.manifest);
  const auto data = iscrc::load_dataset(manifest);
  if (data.galleries.empty()) {
    throw iscrc::DataError("manifest has no gallery sets");
  }
  const auto gallery = iscrc::compress_gallery(data.galleries, config);
  iscrc::save_gallery(args.out, gallery);
  std::cout << "compressed " << data.galleries.size() << " classes to "
            << gallery.total_atoms() << " atoms -> " << args.out << '\n';
}

struct ClassifyArgs {
  std::string gallery;
  std::string query;
  std::string method = "rh-l1";
  int frames = 0;
  std::string kernel = "gaussian";
  double delta = 5.0;
  double tau = 1.0;
  double lambda1 = 1e-3;
  double lambda2 = 1e-3;
  bool no_normalize = false;
};

void run_classify(const ClassifyArgs& args) {
  const auto gallery = iscrc::load_gallery(args.gallery);
  iscrc::FeatureMatrix query = iscrc::read_csv_matrix(args.query);
  if (args.frames > 0 && query.cols() > args.frames) {
    query = query.leftCols(args.frames).eval();
  }
  if (!args.no_normalize) {
    query = iscrc::normalized_columns(query, args.query);
  }

  iscrc::SolverConfig config;
  config.lambda1 = args.lambda1;
  config.lambda2 = args.lambda2;
  config.tau = args.tau;
  config.kernel.kind = args.kernel == "linear" ? iscrc::KernelKind::linear
                                               : iscrc::KernelKind::gaussian;
  config.kernel.delta = args.delta;

  const auto result = iscrc::run_method(iscrc::parse_method(args.method),
                                        query, gallery, config);
  std::cout << "predicted " << result.predicted << '\n';
  for (const auto& [label, residual] : result.residuals) {
    std::cout << "residual " << label << ' ' << residual << '\n';
  }
}

struct BenchArgs {
  std::string config;
  int jobs = 0;
  std::string out;
};

void run_bench(const BenchArgs& args) {
  auto config = iscrc::read_bench_config(args.config);
  if (args.jobs > 0) {
    config.jobs = args.jobs;
  }
  if (const auto seed = seed_override()) {
    config.seed = *seed;
  }
  const auto report = iscrc::run_benchmark(config);
  std::cout << iscrc::format_report_table(report);
  if (!args.out.empty()) {
    iscrc::write_report_json(args.out, report);
    std::cout << "report -> " << args.out << '\n';
  }
}

struct SynthArgs {
  std::string spec;
  std::string out;
};

void run_synth(const SynthArgs& args) {
  auto spec = iscrc::read_synthetic_spec(args.spec);
  if (const auto seed = seed_override()) {
    spec.seed = *seed;
  }
  const auto generated = iscrc::generate_synthetic(spec);
  iscrc::Dataset data{generated.galleries, generated.queries};
  iscrc::write_dataset(args.out, data, spec.dim, false);
  std::cout << "wrote " << data.galleries.size() << " gallery and "
            << data.queries.size() << " query sets -> " << args.out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image-set classification by joint hull representation"};
  app.require_subcommand(1);

  CompressArgs compress_args;
  auto* compress = app.add_subcommand(
      "compress", "Learn per-class dictionaries from a dataset manifest");
  compress->add_option("--manifest", compress_args.manifest, "Dataset manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  compress->add_option("--atoms", compress_args.atoms, "Atoms per class")
      ->required()
      ->check(CLI::PositiveNumber);
  compress->add_option("--out", compress_args.out, "Output gallery JSON")
      ->required();
  compress->add_option("--code-lambda", compress_args.code_lambda,
                       "Sparse coding penalty");
  compress->add_option("--max-iters", compress_args.max_iters,
                       "Alternation iterations");
  compress->add_option("--tol", compress_args.tol, "Relative stop tolerance");
  compress->add_option("--seed", compress_args.seed, "Initialization seed");
  compress->callback([&] { run_compress(compress_args); });

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand(
      "classify", "Classify one query set against a gallery");
  classify->add_option("--gallery", classify_args.gallery, "Gallery JSON")
      ->required()
      ->check(CLI::ExistingFile);
  classify->add_option("--query", classify_args.query, "Query set CSV")
      ->required()
      ->check(CLI::ExistingFile);
  classify
      ->add_option("--method", classify_args.method,
                   "rh-l1, rh-l2, kch, src, or crc")
      ->required()
      ->check(CLI::IsMember({"rh-l1", "rh-l2", "kch", "src", "crc"}));
  classify->add_option("--frames", classify_args.frames,
                       "Keep at most N leading frames");
  classify->add_option("--kernel", classify_args.kernel, "Kernel for kch")
      ->check(CLI::IsMember({"linear", "gaussian"}));
  classify->add_option("--delta", classify_args.delta, "Gaussian kernel width");
  classify->add_option("--tau", classify_args.tau, "Coefficient cap");
  classify->add_option("--lambda1", classify_args.lambda1, "Query-side penalty");
  classify->add_option("--lambda2", classify_args.lambda2,
                       "Gallery-side penalty");
  classify->add_flag("--no-normalize", classify_args.no_normalize,
                     "Skip unit-normalizing query columns");
  classify->callback([&] { run_classify(classify_args); });

  BenchArgs bench_args;
  auto* bench =
      app.add_subcommand("bench", "Run a cross-validated benchmark");
  bench->add_option("--config", bench_args.config, "Benchmark config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  bench->add_option("--jobs", bench_args.jobs, "Worker thread cap")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_args.out, "Write the JSON report here");
  bench->callback([&] { run_bench(bench_args); });

  SynthArgs synth_args;
  auto* synth =
      app.add_subcommand("synth", "Generate a synthetic dataset directory");
  synth->add_option("--spec", synth_args.spec, "Generator spec JSON")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", synth_args.out, "Output directory")->required();
  synth->callback([&] { run_synth(synth_args); });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const iscrc::SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const iscrc::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
