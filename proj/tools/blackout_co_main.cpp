// Command-line front end: instance generation, solving, training,
// benchmarking, forward-process frame dumps, and exact references.
//
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 configuration or
// dimension error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bco/bco.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitConfig = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_index(int k) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%05d", k);
  return buf;
}

bco::Variant parse_variant(const std::string& name) {
  if (name == "blackout-original") return bco::Variant::blackout_original;
  if (name == "blackout-improved") return bco::Variant::blackout_improved;
  if (name == "blackout-more-improved") return bco::Variant::blackout_more_improved;
  if (name == "categorical") return bco::Variant::categorical;
  throw UsageError("unknown variant: " + name);
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return bco::Rng(master).child(index).seed();
}

// --denoiser oracle|heuristic|linear:PATH. The oracle needs the clean tour,
// supplied separately per instance.
struct DenoiserSpec {
  enum class Kind { oracle, heuristic, linear } kind = Kind::heuristic;
  std::string model_path;

  static DenoiserSpec parse(const std::string& text) {
    DenoiserSpec spec;
    if (text == "oracle") {
      spec.kind = Kind::oracle;
    } else if (text == "heuristic") {
      spec.kind = Kind::heuristic;
    } else if (text.rfind("linear:", 0) == 0) {
      spec.kind = Kind::linear;
      spec.model_path = text.substr(7);
      if (spec.model_path.empty()) throw UsageError("linear denoiser needs a model path");
    } else {
      throw UsageError("unknown denoiser: " + text);
    }
    return spec;
  }

  std::unique_ptr<bco::Denoiser> make(const bco::EdgeMatrix* x0_true) const {
    switch (kind) {
      case Kind::oracle:
        if (!x0_true) throw UsageError("oracle denoiser needs an optimal tour");
        return std::make_unique<bco::OracleDenoiser>(*x0_true);
      case Kind::heuristic:
        return std::make_unique<bco::HeuristicDenoiser>();
      case Kind::linear:
        return std::make_unique<bco::LinearModelDenoiser>(bco::load_model(model_path));
    }
    throw UsageError("unreachable denoiser kind");
  }

  const char* name() const {
    switch (kind) {
      case Kind::oracle: return "oracle";
      case Kind::heuristic: return "heuristic";
      case Kind::linear: return "linear";
    }
    return "?";
  }
};

int thread_budget() {
  if (const char* env = std::getenv("BLACKOUT_CO_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenArgs {
  int n = 50;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int cmd_gen(const GenArgs& args) {
  if (args.n < 3) throw UsageError("--n must be at least 3");
  if (args.count < 1) throw UsageError("--count must be at least 1");
  fs::create_directories(args.out_dir);
  std::ofstream manifest(fs::path(args.out_dir) / "manifest.csv");
  if (!manifest) throw bco::IoError("cannot write manifest in " + args.out_dir);
  manifest << "id,file,n,seed\n";
  for (int k = 0; k < args.count; ++k) {
    const std::uint64_t inst_seed = derive_seed(args.seed, static_cast<std::uint64_t>(k));
    const bco::TspInstance instance = bco::generate_random(args.n, inst_seed);
    const std::string name = "inst_" + format_index(k) + ".txt";
    bco::write_instance(instance, (fs::path(args.out_dir) / name).string());
    manifest << k << "," << name << "," << args.n << "," << inst_seed << "\n";
  }
  std::cout << "wrote " << args.count << " instance(s) to " << args.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string instance_path;
  std::string variant = "blackout-original";
  std::string denoiser = "heuristic";
  std::string opt_tour_path;
  std::string pipeline = "greedy";
  int steps = -1;  // -1: pipeline default (50 greedy, 10 sample)
  int samples = 16;
  bool two_opt = false;
  bool two_opt_after_select = false;
  std::uint64_t seed = 0;
  std::string out_prefix = "solve";
};

int cmd_solve(const SolveArgs& args) {
  if (args.pipeline != "greedy" && args.pipeline != "sample")
    throw UsageError("--pipeline must be greedy or sample");
  const bco::TspInstance instance = bco::read_instance(args.instance_path);
  const DenoiserSpec spec = DenoiserSpec::parse(args.denoiser);

  std::optional<bco::EdgeMatrix> x0_true;
  std::optional<double> reference;
  if (!args.opt_tour_path.empty()) {
    const bco::Tour opt = bco::read_tour(args.opt_tour_path);
    bco::validate_tour(instance, opt);
    x0_true = bco::tour_to_edge_matrix(opt);
    reference = bco::tour_length(instance, opt);
  } else if (spec.kind == DenoiserSpec::Kind::oracle) {
    throw UsageError("oracle denoiser requires --opt-tour");
  }
  const auto denoiser = spec.make(x0_true ? &*x0_true : nullptr);

  bco::ReverseRunConfig config;
  config.variant = parse_variant(args.variant);
  config.steps = args.steps > 0 ? args.steps : (args.pipeline == "greedy" ? 50 : 10);
  config.samples = args.samples;
  config.seed = args.seed;
  config.two_opt = args.two_opt;
  config.two_opt_after_select = args.two_opt_after_select;

  const bco::SolveResult result = (args.pipeline == "greedy")
                                      ? bco::solve_greedy(instance, *denoiser, config)
                                      : bco::solve_sampling(instance, *denoiser, config);

  bco::write_tour(result.tour, args.out_prefix + ".tour");
  bco::write_heatmap_csv(result.heatmap, args.out_prefix + ".heatmap.csv");

  json record;
  record["instance"] = args.instance_path;
  record["n"] = instance.n();
  record["variant"] = bco::to_string(config.variant);
  record["pipeline"] = args.pipeline == "greedy" ? "GREEDY" : "SAMPLE";
  if (args.two_opt) record["pipeline"] = record["pipeline"].get<std::string>() + "+2OPT";
  record["denoiser"] = spec.name();
  record["steps"] = config.steps;
  record["samples"] = args.pipeline == "sample" ? config.samples : 1;
  record["two_opt"] = config.two_opt;
  record["seed"] = config.seed;
  record["solved_cost"] = result.length;
  if (reference) {
    record["reference_cost"] = *reference;
    record["gap_percent"] = bco::optimality_gap(result.length, *reference);
  } else {
    record["reference_cost"] = nullptr;
    record["gap_percent"] = nullptr;
  }
  {
    std::ofstream diag(args.out_prefix + ".diag.jsonl");
    if (!diag) throw bco::IoError("cannot write diagnostics");
    diag << record.dump() << "\n";
  }
  std::cout << "length " << result.length;
  if (reference) std::cout << "  gap% " << bco::optimality_gap(result.length, *reference);
  std::cout << "  (" << result.wall_seconds << " s)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string dir;
  std::string variants = "blackout-original,blackout-improved,blackout-more-improved,categorical";
  std::string pipelines = "GREEDY,GREEDY+2OPT,SAMPLE,SAMPLE+2OPT";
  std::string denoiser = "heuristic";
  int steps_greedy = 50;
  int steps_sample = 10;
  int samples = 16;
  std::uint64_t seed = 0;
  std::string out_csv = "bench.csv";
};

struct BenchRecord {
  int instance_id = 0;
  std::string variant;
  std::string pipeline;
  double solved_cost = 0.0;
  double reference_cost = 0.0;
  double gap_percent = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  std::string reference_kind;
};

const std::vector<std::string> kPipelineOrder = {"GREEDY", "GREEDY+2OPT", "SAMPLE", "SAMPLE+2OPT"};

int cmd_bench(const BenchArgs& args) {
  // Manifest rows drive the run; written by `gen`.
  std::ifstream manifest(fs::path(args.dir) / "manifest.csv");
  if (!manifest) throw UsageError("no manifest.csv in " + args.dir);
  struct Entry {
    int id;
    std::string file;
  };
  std::vector<Entry> entries;
  std::string line;
  std::getline(manifest, line);  // header
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id_s, file_s;
    std::getline(ss, id_s, ',');
    std::getline(ss, file_s, ',');
    entries.push_back({std::stoi(id_s), file_s});
  }
  if (entries.empty()) throw UsageError("manifest lists no instances");

  std::vector<std::string> variants = split_list(args.variants);
  std::vector<std::string> pipelines = split_list(args.pipelines);
  if (variants.empty() || pipelines.empty()) throw UsageError("empty variant or pipeline list");
  for (const std::string& p : pipelines)
    if (std::find(kPipelineOrder.begin(), kPipelineOrder.end(), p) == kPipelineOrder.end())
      throw UsageError("unknown pipeline: " + p);
  const DenoiserSpec spec = DenoiserSpec::parse(args.denoiser);

  std::vector<std::vector<BenchRecord>> per_instance(entries.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= entries.size() || failed.load()) return;
      try {
        const Entry& entry = entries[idx];
        const bco::TspInstance instance =
            bco::read_instance((fs::path(args.dir) / entry.file).string());
        const std::uint64_t inst_seed = derive_seed(args.seed, static_cast<std::uint64_t>(entry.id));

        std::optional<bco::Tour> opt_tour;
        double reference = 0.0;
        std::string reference_kind;
        if (instance.n() <= bco::kExactMaxNodes) {
          opt_tour = bco::exact_solve(instance);
          reference = bco::tour_length(instance, *opt_tour);
          reference_kind = "exact";
        } else {
          if (spec.kind == DenoiserSpec::Kind::oracle)
            throw bco::ConfigError("oracle denoiser needs n <= 18 for the exact tour");
          reference_kind = "heuristic-reference";
        }
        std::optional<bco::EdgeMatrix> x0_true;
        if (opt_tour) x0_true = bco::tour_to_edge_matrix(*opt_tour);
        const auto denoiser = spec.make(x0_true ? &*x0_true : nullptr);

        std::vector<BenchRecord>& records = per_instance[idx];
        for (const std::string& variant_name : variants) {
          for (const std::string& pipeline : pipelines) {
            bco::ReverseRunConfig config;
            config.variant = parse_variant(variant_name);
            config.seed = inst_seed;
            config.two_opt = pipeline == "GREEDY+2OPT" || pipeline == "SAMPLE+2OPT";
            const bool sampling = pipeline == "SAMPLE" || pipeline == "SAMPLE+2OPT";
            config.steps = sampling ? args.steps_sample : args.steps_greedy;
            config.samples = sampling ? args.samples : 1;
            const bco::SolveResult result = sampling
                                                ? bco::solve_sampling(instance, *denoiser, config)
                                                : bco::solve_greedy(instance, *denoiser, config);
            BenchRecord record;
            record.instance_id = entry.id;
            record.variant = bco::to_string(config.variant);
            record.pipeline = pipeline;
            record.solved_cost = result.length;
            record.reference_cost = reference;  // 0 until best-found pass below
            record.wall_time_s = result.wall_seconds;
            record.seed = inst_seed;
            record.reference_kind = reference_kind;
            records.push_back(std::move(record));
          }
        }
        if (!opt_tour) {
          double best = records.front().solved_cost;
          for (const BenchRecord& r : records) best = std::min(best, r.solved_cost);
          for (BenchRecord& r : records) r.reference_cost = best;
        }
        for (BenchRecord& r : records)
          r.gap_percent = bco::optimality_gap(r.solved_cost, r.reference_cost);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) {
          try {
            throw;
          } catch (const std::exception& e) {
            first_error = e.what();
          }
        }
        return;
      }
    }
  };

  const int threads = std::min<int>(thread_budget(), static_cast<int>(entries.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) throw bco::ConfigError("bench failed: " + first_error);

  std::ofstream out(args.out_csv);
  if (!out) throw bco::IoError("cannot write " + args.out_csv);
  out << "instance_id,variant,pipeline,solved_cost,reference_cost,gap_percent,wall_time_s,seed,"
         "reference_kind\n";
  char buf[160];
  for (const std::vector<BenchRecord>& records : per_instance) {
    for (const BenchRecord& r : records) {
      std::snprintf(buf, sizeof(buf), "%d,%s,%s,%.12g,%.12g,%.9f,%.6f,%llu,%s", r.instance_id,
                    r.variant.c_str(), r.pipeline.c_str(), r.solved_cost, r.reference_cost,
                    r.gap_percent, r.wall_time_s, static_cast<unsigned long long>(r.seed),
                    r.reference_kind.c_str());
      out << buf << "\n";
    }
  }

  // Aggregate means per variant x pipeline, pipelines in table order.
  const fs::path agg_path = fs::path(args.out_csv).replace_extension(".agg.csv");
  std::ofstream agg(agg_path);
  if (!agg) throw bco::IoError("cannot write " + agg_path.string());
  agg << "variant,pipeline,mean_length,mean_gap_percent\n";
  std::printf("%-26s %-13s %12s %14s\n", "variant", "pipeline", "mean_length", "mean_gap_pct");
  for (const std::string& variant_name : variants) {
    const std::string variant = bco::to_string(parse_variant(variant_name));
    for (const std::string& pipeline : kPipelineOrder) {
      if (std::find(pipelines.begin(), pipelines.end(), pipeline) == pipelines.end()) continue;
      double len_sum = 0.0, gap_sum = 0.0;
      int count = 0;
      for (const std::vector<BenchRecord>& records : per_instance) {
        for (const BenchRecord& r : records) {
          if (r.variant == variant && r.pipeline == pipeline) {
            len_sum += r.solved_cost;
            gap_sum += r.gap_percent;
            ++count;
          }
        }
      }
      const double mean_len = len_sum / count;
      const double mean_gap = gap_sum / count;
      std::snprintf(buf, sizeof(buf), "%s,%s,%.12g,%.9f", variant.c_str(), pipeline.c_str(),
                    mean_len, mean_gap);
      agg << buf << "\n";
      std::printf("%-26s %-13s %12.4f %14.4f\n", variant.c_str(), pipeline.c_str(), mean_len,
                  mean_gap);
    }
  }
  std::cout << "records: " << args.out_csv << "  aggregate: " << agg_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// frames
// ---------------------------------------------------------------------------

struct FramesArgs {
  std::string instance_path;
  std::string opt_tour_path;
  std::string variant = "blackout-original";
  int steps = 50;
  std::uint64_t seed = 0;
  std::string out_dir = "frames";
};

int cmd_frames(const FramesArgs& args) {
  const bco::TspInstance instance = bco::read_instance(args.instance_path);
  const bco::Tour tour = bco::read_tour(args.opt_tour_path);
  bco::validate_tour(instance, tour);
  const bco::EdgeMatrix x0 = bco::tour_to_edge_matrix(tour);

  bco::ReverseRunConfig config;
  config.variant = parse_variant(args.variant);
  config.steps = args.steps;
  if (config.variant == bco::Variant::categorical)
    throw bco::ConfigError("frames are defined for the continuous-time variants only");
  const bco::Schedule schedule = bco::schedule_for(config);

  bco::Rng rng(args.seed);
  const std::vector<bco::EdgeMatrix> frames = bco::forward_trajectory(x0, schedule, rng);

  fs::create_directories(args.out_dir);
  std::ofstream index(fs::path(args.out_dir) / "index.csv");
  if (!index) throw bco::IoError("cannot write index.csv");
  index << "k,t,std,active_edges\n";
  char buf[96];
  for (std::size_t k = 0; k < frames.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04zu.pgm", k);
    bco::write_pgm(frames[k], (fs::path(args.out_dir) / name).string());
    const double t = (k == 0) ? 0.0 : schedule.times[k - 1];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%d", k, t, bco::std_of_t(t),
                  frames[k].active_edges());
    index << buf << "\n";
  }
  {
    std::ofstream sched_csv(fs::path(args.out_dir) / "schedule.csv");
    bco::write_schedule_csv(schedule, sched_csv);
  }
  std::cout << "wrote " << frames.size() << " frames to " << args.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string data_dir;
  int epochs = 30;
  double lr = 0.05;
  std::string variant = "blackout-original";
  int steps = 50;
  int time_features = 8;
  std::uint64_t seed = 0;
  std::string out_model = "model.txt";
};

std::vector<bco::TrainingExample> load_training_dir(const std::string& dir) {
  std::vector<std::string> inst_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("inst_", 0) == 0 && entry.path().extension() == ".txt")
      inst_files.push_back(name);
  }
  std::sort(inst_files.begin(), inst_files.end());
  std::vector<bco::TrainingExample> data;
  for (const std::string& name : inst_files) {
    const std::string stem = name.substr(5, name.size() - 9);  // between inst_ and .txt
    const fs::path tour_path = fs::path(dir) / ("opt_" + stem + ".tour");
    if (!fs::exists(tour_path)) continue;
    bco::TspInstance instance = bco::read_instance((fs::path(dir) / name).string());
    bco::Tour tour = bco::read_tour(tour_path.string());
    bco::validate_tour(instance, tour);
    data.push_back({std::move(instance), std::move(tour)});
  }
  return data;
}

int cmd_train(const TrainArgs& args) {
  const std::vector<bco::TrainingExample> data = load_training_dir(args.data_dir);
  if (data.empty()) throw UsageError("no (instance, tour) pairs in " + args.data_dir);

  bco::ReverseRunConfig config;
  config.variant = parse_variant(args.variant);
  config.steps = args.steps;
  if (config.variant == bco::Variant::categorical)
    throw bco::ConfigError("training targets the continuous-time variants");
  const bco::Schedule schedule = bco::schedule_for(config);

  bco::TrainOptions options;
  options.epochs = args.epochs;
  options.learning_rate = args.lr;
  options.seed = args.seed;
  const bco::TrainResult result =
      bco::train_model(bco::LinearEdgeModel::zeros(args.time_features), data, schedule, options);

  bco::save_model(result.model, args.out_model);
  std::ofstream loss_csv(args.out_model + ".loss.csv");
  if (!loss_csv) throw bco::IoError("cannot write loss trace");
  loss_csv << "epoch,loss\n";
  char buf[64];
  for (std::size_t e = 0; e < result.loss_trace.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g", e, result.loss_trace[e]);
    loss_csv << buf << "\n";
  }
  std::cout << "trained on " << data.size() << " examples; loss " << result.loss_trace.front()
            << " -> " << result.loss_trace.back() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// exact
// ---------------------------------------------------------------------------

struct ExactArgs {
  std::string instance_path;
  std::string dir;
  std::string out_dir;
};

int cmd_exact(const ExactArgs& args) {
  if (args.instance_path.empty() == args.dir.empty())
    throw UsageError("give exactly one of --instance or --dir");

  struct Item {
    std::string id;
    fs::path path;
  };
  std::vector<Item> items;
  fs::path out_dir;
  if (!args.instance_path.empty()) {
    const fs::path p(args.instance_path);
    std::string stem = p.stem().string();
    if (stem.rfind("inst_", 0) == 0) stem = stem.substr(5);
    items.push_back({stem, p});
    out_dir = args.out_dir.empty() ? p.parent_path() : fs::path(args.out_dir);
  } else {
    for (const auto& entry : fs::directory_iterator(args.dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("inst_", 0) == 0 && entry.path().extension() == ".txt")
        items.push_back({entry.path().stem().string().substr(5), entry.path()});
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.id < b.id; });
    if (items.empty()) throw UsageError("no instances in " + args.dir);
    out_dir = args.out_dir.empty() ? fs::path(args.dir) : fs::path(args.out_dir);
  }
  if (!out_dir.empty()) fs::create_directories(out_dir);

  std::ofstream lengths(out_dir / "lengths.csv");
  if (!lengths) throw bco::IoError("cannot write lengths.csv");
  lengths << "id,file,length\n";
  char buf[96];
  for (const Item& item : items) {
    const bco::TspInstance instance = bco::read_instance(item.path.string());
    if (instance.n() > bco::kExactMaxNodes)
      throw UsageError("n = " + std::to_string(instance.n()) +
                       " exceeds the exact solver limit of 18; use bench's best-found "
                       "heuristic reference instead");
    const bco::Tour tour = bco::exact_solve(instance);
    bco::write_tour(tour, (out_dir / ("opt_" + item.id + ".tour")).string());
    std::snprintf(buf, sizeof(buf), "%s,%s,%.12g", item.id.c_str(),
                  item.path.filename().string().c_str(), bco::tour_length(instance, tour));
    lengths << buf << "\n";
  }
  std::cout << "solved " << items.size() << " instance(s); tours in " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-state diffusion solver for Euclidean TSP"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate uniform random instances");
  gen_cmd->add_option("--n", gen.n, "nodes per instance");
  gen_cmd->add_option("--count", gen.count, "number of instances");
  gen_cmd->add_option("--seed", gen.seed, "master seed");
  gen_cmd->add_option("--out", gen.out_dir, "output directory")->required();

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("--instance", solve.instance_path)->required();
  solve_cmd->add_option("--variant", solve.variant,
                        "blackout-original|blackout-improved|blackout-more-improved|categorical");
  solve_cmd->add_option("--denoiser", solve.denoiser, "oracle|heuristic|linear:PATH");
  solve_cmd->add_option("--opt-tour", solve.opt_tour_path, "ground-truth tour (oracle/reference)");
  solve_cmd->add_option("--pipeline", solve.pipeline, "greedy|sample");
  solve_cmd->add_option("--steps", solve.steps, "reverse steps (default 50 greedy / 10 sample)");
  solve_cmd->add_option("--samples", solve.samples, "chains for the sample pipeline");
  solve_cmd->add_flag("--two-opt", solve.two_opt, "refine with 2-opt");
  solve_cmd->add_flag("--two-opt-after-select", solve.two_opt_after_select,
                      "2-opt only the winning sample");
  solve_cmd->add_option("--seed", solve.seed);
  solve_cmd->add_option("--out", solve.out_prefix, "output file prefix");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Benchmark variants x pipelines over a directory");
  bench_cmd->add_option("--dir", bench.dir, "instance directory with manifest.csv")->required();
  bench_cmd->add_option("--variants", bench.variants, "comma-separated variant list");
  bench_cmd->add_option("--pipelines", bench.pipelines, "subset of GREEDY,GREEDY+2OPT,SAMPLE,SAMPLE+2OPT");
  bench_cmd->add_option("--denoiser", bench.denoiser);
  bench_cmd->add_option("--steps-greedy", bench.steps_greedy);
  bench_cmd->add_option("--steps-sample", bench.steps_sample);
  bench_cmd->add_option("--samples", bench.samples);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--out", bench.out_csv, "records CSV path");

  FramesArgs frames;
  CLI::App* frames_cmd = app.add_subcommand("frames", "Dump forward-corruption frames as PGM");
  frames_cmd->add_option("--instance", frames.instance_path)->required();
  frames_cmd->add_option("--opt-tour", frames.opt_tour_path)->required();
  frames_cmd->add_option("--variant", frames.variant);
  frames_cmd->add_option("--steps", frames.steps);
  frames_cmd->add_option("--seed", frames.seed);
  frames_cmd->add_option("--out", frames.out_dir)->required();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train the linear edge model");
  train_cmd->add_option("--data", train.data_dir, "directory of inst_*.txt + opt_*.tour")->required();
  train_cmd->add_option("--epochs", train.epochs);
  train_cmd->add_option("--lr", train.lr);
  train_cmd->add_option("--variant", train.variant);
  train_cmd->add_option("--steps", train.steps);
  train_cmd->add_option("--time-features", train.time_features);
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--out", train.out_model, "model file path");

  ExactArgs exact;
  CLI::App* exact_cmd = app.add_subcommand("exact", "Exact reference tours (n <= 18)");
  exact_cmd->add_option("--instance", exact.instance_path);
  exact_cmd->add_option("--dir", exact.dir);
  exact_cmd->add_option("--out-dir", exact.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (solve_cmd->parsed()) return cmd_solve(solve);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (frames_cmd->parsed()) return cmd_frames(frames);
    if (train_cmd->parsed()) return cmd_train(train);
    if (exact_cmd->parsed()) return cmd_exact(exact);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bco::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const bco::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const bco::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
