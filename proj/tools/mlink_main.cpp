#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlink/external_encoder.hpp"
#include "mlink/io.hpp"
#include "mlink/metrics.hpp"
#include "mlink/pipeline.hpp"

namespace {

using namespace mlink;

std::unique_ptr<EncoderBackend> make_encoder(const std::string& choice, std::size_t dim) {
  if (choice == "reference") return std::make_unique<ReferenceEncoder>(dim);
  const std::string prefix = "external:";
  if (choice.rfind(prefix, 0) == 0) {
    return std::make_unique<ExternalEncoder>(choice.substr(prefix.size()), dim);
  }
  throw ConfigError("unknown encoder '" + choice + "' (expected reference or external:<command>)");
}

struct CommonOptions {
  std::string mode = "subtask1";
  std::string train_path, gold_path, test_path;
  std::string config_path;
  std::string encoder = "reference";
  std::optional<double> high_threshold, medium_threshold, epsilon;
  std::optional<int> min_cluster_size, min_samples;
  std::optional<std::size_t> block_limit, embed_dim;
  std::optional<std::uint64_t> seed;

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    cfg.mode = parse_mode(mode);
    if (high_threshold) cfg.high_threshold = *high_threshold;
    if (medium_threshold) cfg.medium_threshold = *medium_threshold;
    if (epsilon) cfg.epsilon = *epsilon;
    if (min_cluster_size) cfg.min_cluster_size = *min_cluster_size;
    if (min_samples) cfg.min_samples = *min_samples;
    if (block_limit) cfg.block_limit = *block_limit;
    if (embed_dim) cfg.embed_dim = *embed_dim;
    if (seed) cfg.seed = *seed;
    cfg.validate();
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool test_required = true) {
  cmd->add_option("--mode", opt.mode, "subtask1|subtask2|subtask3")->required();
  cmd->add_option("--train", opt.train_path, "training mention file")->required();
  cmd->add_option("--gold", opt.gold_path, "training gold cluster file")->required();
  auto* t = cmd->add_option("--test", opt.test_path, "test mention file");
  if (test_required) t->required();
  cmd->add_option("--config", opt.config_path, "flat key=value config file");
  cmd->add_option("--encoder", opt.encoder, "reference | external:<command>");
  cmd->add_option("--high-threshold", opt.high_threshold);
  cmd->add_option("--medium-threshold", opt.medium_threshold);
  cmd->add_option("--epsilon", opt.epsilon);
  cmd->add_option("--min-cluster-size", opt.min_cluster_size);
  cmd->add_option("--min-samples", opt.min_samples);
  cmd->add_option("--block-limit", opt.block_limit);
  cmd->add_option("--embed-dim", opt.embed_dim);
  cmd->add_option("--seed", opt.seed);
}

struct SinkFiles {
  std::ofstream abbrev, contexts, trace, blocks, kb;
  DebugSinks sinks;

  std::ofstream* open(std::ofstream& f, const std::string& path) {
    f.open(path);
    if (!f) throw ValidationError("cannot open output file: " + path);
    return &f;
  }
};

int cmd_link(const CommonOptions& opt, const std::string& out_path,
             const std::string& dump_abbrev, const std::string& dump_contexts,
             const std::string& trace_assign, const std::string& dump_blocks,
             const std::string& save_kb_path) {
  PipelineConfig cfg = opt.resolve();
  auto train = load_mentions(opt.train_path);
  auto gold = load_gold(opt.gold_path);
  auto test = load_mentions(opt.test_path);
  auto backend = make_encoder(opt.encoder, cfg.embed_dim);

  SinkFiles files;
  if (!dump_abbrev.empty()) files.sinks.dump_abbrev = files.open(files.abbrev, dump_abbrev);
  if (!dump_contexts.empty()) files.sinks.dump_contexts = files.open(files.contexts, dump_contexts);
  if (!trace_assign.empty()) files.sinks.trace_assign = files.open(files.trace, trace_assign);
  if (!dump_blocks.empty()) files.sinks.dump_blocks = files.open(files.blocks, dump_blocks);
  if (!save_kb_path.empty()) files.sinks.save_kb = files.open(files.kb, save_kb_path);

  PipelineResult result = run_pipeline(cfg, train, gold, test, *backend, &files.sinks);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

  std::ofstream out(out_path);
  if (!out) throw ValidationError("cannot open output file: " + out_path);
  serialize_labeling(Labeling{result.labeling.labels}, result.test_order, out);

  std::cerr << "matched " << result.matched_count << " / " << test.size() << " mentions; "
            << result.unmatched_count << " clustered\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "stage seconds: embed %.3f  kb_match %.3f  canon %.3f  cluster %.3f  merge %.3f  "
                "total %.3f",
                result.timings.embed_s, result.timings.kb_match_s,
                result.timings.canonicalization_s, result.timings.clustering_s,
                result.timings.merge_s, result.timings.total_s);
  std::cerr << buf << '\n';
  return 0;
}

int cmd_score(const std::string& gold_path, const std::string& pred_path) {
  GoldClustering gold = load_gold(gold_path);
  Labeling pred = load_labeling(pred_path);
  MetricReport report = score_all(gold, pred);
  std::cout << format_report(report);
  return 0;
}

std::vector<double> parse_fractions(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

int cmd_bench(const CommonOptions& opt, const std::string& fractions_csv,
              const std::string& seeds_csv, const std::string& out_dir) {
  PipelineConfig cfg = opt.resolve();
  auto train = load_mentions(opt.train_path);
  auto gold = load_gold(opt.gold_path);
  auto test = load_mentions(opt.test_path);
  auto backend = make_encoder(opt.encoder, cfg.embed_dim);

  auto fractions = parse_fractions(fractions_csv);
  auto seeds = parse_seeds(seeds_csv);

  BenchmarkReport report = run_benchmark(cfg, train, gold, test, fractions, seeds, *backend);
  std::string table = format_benchmark_table(report);
  std::cout << table;

  std::filesystem::create_directories(out_dir);
  std::string table_path = out_dir + "/bench_table.tsv";
  std::string long_path = out_dir + "/bench_long.tsv";
  std::ofstream table_out(table_path);
  if (!table_out) throw ValidationError("cannot open output file: " + table_path);
  table_out << table;
  std::ofstream long_out(long_path);
  if (!long_out) throw ValidationError("cannot open output file: " + long_path);
  write_benchmark_long(report, long_out);
  std::cerr << "wrote " << table_path << " and " << long_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"software-mention identity resolution pipeline"};
  app.require_subcommand(1);

  CommonOptions link_opt;
  std::string out_path, dump_abbrev, dump_contexts, trace_assign, dump_blocks, save_kb_path;
  auto* link = app.add_subcommand("link", "resolve test mentions into identity clusters");
  add_common(link, link_opt);
  link->add_option("--out", out_path, "prediction output file")->required();
  link->add_option("--dump-abbrev", dump_abbrev, "write the resolved abbreviation map");
  link->add_option("--dump-contexts", dump_contexts, "write id\\tcontext lines");
  link->add_option("--trace-assign", trace_assign, "write per-mention cascade decisions");
  link->add_option("--dump-blocks", dump_blocks, "write type\\tletter\\tsize per block");
  link->add_option("--save-kb", save_kb_path, "write the KB snapshot");

  std::string score_gold, score_pred;
  auto* score = app.add_subcommand("score", "score a prediction against gold clusters");
  score->add_option("--gold", score_gold)->required();
  score->add_option("--pred", score_pred)->required();

  CommonOptions bench_opt;
  std::string fractions_csv = "0.1,0.25,0.5,0.75,1.0";
  std::string seeds_csv = "42,123,7,13,111,23";
  std::string bench_out = "bench_out";
  auto* bench = app.add_subcommand("bench", "stage-timed scalability benchmark");
  add_common(bench, bench_opt);
  bench->add_option("--fractions", fractions_csv, "comma-separated corpus fractions");
  bench->add_option("--seeds", seeds_csv, "comma-separated sampling seeds");
  bench->add_option("--out", bench_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*link) {
      return cmd_link(link_opt, out_path, dump_abbrev, dump_contexts, trace_assign, dump_blocks,
                      save_kb_path);
    }
    if (*score) return cmd_score(score_gold, score_pred);
    if (*bench) return cmd_bench(bench_opt, fractions_csv, seeds_csv, bench_out);
  } catch (const mlink::StageError& e) {
    std::cerr << "stage failure: " << e.what() << '\n';
    return 3;
  } catch (const mlink::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const mlink::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
