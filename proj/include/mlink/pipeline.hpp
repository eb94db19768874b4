#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mlink/assigner.hpp"
#include "mlink/embedding.hpp"
#include "mlink/label_merger.hpp"
#include "mlink/types.hpp"

namespace mlink {

// Wall-clock seconds per pipeline stage. Components can sum to less than
// total_s: untimed work (context building, KB construction, dumps) counts
// toward the total only.
struct StageTimings {
  double embed_s = 0.0;
  double kb_match_s = 0.0;
  double canonicalization_s = 0.0;
  double clustering_s = 0.0;
  double merge_s = 0.0;
  double total_s = 0.0;
};

// Optional debug taps; each writes a small tab-separated audit file.
struct DebugSinks {
  std::ostream* dump_abbrev = nullptr;    // short\tlong
  std::ostream* dump_contexts = nullptr;  // id\tcontext
  std::ostream* trace_assign = nullptr;   // id\tmethod\tcluster\tsimilarity
  std::ostream* dump_blocks = nullptr;    // type\tletter\tsize
  std::ostream* save_kb = nullptr;        // KB snapshot
};

struct PipelineResult {
  FinalLabeling labeling;
  StageTimings timings;
  std::vector<std::string> test_order;  // mention ids, input order
  std::vector<std::string> warnings;
  std::size_t matched_count = 0;
  std::size_t unmatched_count = 0;
};

PipelineResult run_pipeline(const PipelineConfig& cfg, const std::vector<Mention>& train,
                            const GoldClustering& gold, const std::vector<Mention>& test,
                            EncoderBackend& backend, const DebugSinks* sinks = nullptr,
                            std::size_t batch_size = 64);

struct BenchmarkRow {
  double fraction = 1.0;
  std::string run_id;  // seed for sampled rows, run index for full runs
  std::size_t n = 0;
  StageTimings timings;
};

struct BenchmarkReport {
  std::vector<double> fractions;
  std::vector<BenchmarkRow> rows;
};

// Deterministic mention-level sampling without replacement (Fisher-Yates
// prefix over a seeded mt19937_64); returns ascending positions.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t k,
                                                    std::uint64_t seed);

// One pipeline run per (fraction, seed) cell. Fraction 1.0 is never sampled:
// it runs twice (once when only one seed is given), reported as the mean of
// independent full runs.
BenchmarkReport run_benchmark(const PipelineConfig& cfg, const std::vector<Mention>& train,
                              const GoldClustering& gold, const std::vector<Mention>& test,
                              const std::vector<double>& fractions,
                              const std::vector<std::uint64_t>& seeds, EncoderBackend& backend);

// Aggregate table (mean ± std per fraction, Table-style columns) and a
// long-format file (fraction, run, stage, seconds) for plotting.
std::string format_benchmark_table(const BenchmarkReport& report);
void write_benchmark_long(const BenchmarkReport& report, std::ostream& out);

// Flat key=value config file; '#' starts a comment. CLI flags override.
PipelineConfig load_config_file(const std::string& path);

}  // namespace mlink
