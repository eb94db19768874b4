#include "mlink/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "mlink/clustering.hpp"
#include "mlink/context.hpp"
#include "mlink/io.hpp"
#include "mlink/knowledge_base.hpp"

namespace mlink {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
auto timed(double& slot, F&& body) {
  auto start = Clock::now();
  if constexpr (std::is_void_v<decltype(body())>) {
    body();
    slot += seconds_since(start);
  } else {
    auto result = body();
    slot += seconds_since(start);
    return result;
  }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, const std::vector<Mention>& train,
                            const GoldClustering& gold, const std::vector<Mention>& test,
                            EncoderBackend& backend, const DebugSinks* sinks,
                            std::size_t batch_size) {
  cfg.validate();
  PipelineResult result;
  auto total_start = Clock::now();

  // canonicalization: abbreviation map plus canonical keys for every mention
  AbbreviationMap abbrev;
  std::map<std::string, CanonicalName> canon;  // id -> canonical key (train and test)
  timed(result.timings.canonicalization_s, [&] {
    abbrev = build_abbreviation_map(train, test);
    for (const Mention& m : train) canon.emplace(m.id, canonical_key(m.surface, abbrev));
    for (const Mention& m : test) canon.emplace(m.id, canonical_key(m.surface, abbrev));
  });
  if (sinks && sinks->dump_abbrev) {
    for (const auto& [s, l] : abbrev.entries) *sinks->dump_abbrev << s << '\t' << l << '\n';
  }

  std::vector<ContextString> train_ctx, test_ctx;
  try {
    train_ctx = build_contexts(train);
    test_ctx = build_contexts(test);
  } catch (const std::exception& e) {
    throw StageError("context", e.what());
  }
  if (sinks && sinks->dump_contexts) {
    for (const auto& c : train_ctx) *sinks->dump_contexts << c.mention_id << '\t' << c.value << '\n';
    for (const auto& c : test_ctx) *sinks->dump_contexts << c.mention_id << '\t' << c.value << '\n';
  }

  // stage (i): sentence embedding
  std::vector<EmbeddingVector> train_emb, test_emb;
  timed(result.timings.embed_s, [&] {
    train_emb = encode_corpus(backend, train_ctx, batch_size, cfg.embed_dim);
    test_emb = encode_corpus(backend, test_ctx, batch_size, cfg.embed_dim);
  });

  // KB construction (untimed build step)
  FlatIndex index;
  StringDictionary dict;
  try {
    std::map<std::string, EmbeddingVector> by_id;
    for (std::size_t i = 0; i < train.size(); ++i) by_id.emplace(train[i].id, train_emb[i]);
    index.centroids = build_centroids(gold, by_id);
    dict = build_string_dictionary(train, gold, abbrev);
  } catch (const std::exception& e) {
    throw StageError("kb-build", e.what());
  }
  if (sinks && sinks->save_kb) save_kb(index, dict, *sinks->save_kb);

  // stage (ii): KB matching cascade
  AssignOutcome outcome;
  timed(result.timings.kb_match_s,
        [&] { outcome = assign_all(test, test_emb, index, dict, cfg, abbrev); });
  if (sinks && sinks->trace_assign) {
    for (const Assignment& a : outcome.assignments) {
      *sinks->trace_assign << a.mention_id << '\t'
                           << (a.method ? to_string(*a.method) : "unmatched") << '\t'
                           << (a.cluster_id ? *a.cluster_id : "-") << '\t';
      if (a.similarity) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", *a.similarity);
        *sinks->trace_assign << buf;
      } else {
        *sinks->trace_assign << '-';
      }
      *sinks->trace_assign << '\n';
    }
  }

  // stage (iv): blocking, density clustering, canonical-name merge
  std::map<std::string, std::string> new_labels;
  timed(result.timings.clustering_s, [&] {
    std::vector<Mention> unmatched;
    std::vector<EmbeddingVector> unmatched_emb;
    unmatched.reserve(outcome.unmatched.size());
    unmatched_emb.reserve(outcome.unmatched.size());
    for (std::size_t i : outcome.unmatched) {
      unmatched.push_back(test[i]);
      unmatched_emb.push_back(test_emb[i]);
    }
    try {
      new_labels = cluster_unmatched(unmatched, unmatched_emb, canon, cfg, &result.warnings,
                                     sinks ? sinks->dump_blocks : nullptr);
    } catch (const std::exception& e) {
      throw StageError("clustering", e.what());
    }
  });

  // stage (v): final label merging
  timed(result.timings.merge_s, [&] {
    try {
      result.labeling = final_merge(outcome.assignments, new_labels, dict, canon);
    } catch (const std::exception& e) {
      throw StageError("merge", e.what());
    }
  });

  result.test_order.reserve(test.size());
  for (const Mention& m : test) result.test_order.push_back(m.id);
  result.matched_count = test.size() - outcome.unmatched.size();
  result.unmatched_count = outcome.unmatched.size();
  result.timings.total_s = seconds_since(total_start);
  return result;
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t k,
                                                    std::uint64_t seed) {
  if (k > population) k = population;
  std::vector<std::size_t> indices(population);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (population - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(k);
  std::sort(indices.begin(), indices.end());
  return indices;
}

BenchmarkReport run_benchmark(const PipelineConfig& cfg, const std::vector<Mention>& train,
                              const GoldClustering& gold, const std::vector<Mention>& test,
                              const std::vector<double>& fractions,
                              const std::vector<std::uint64_t>& seeds, EncoderBackend& backend) {
  if (fractions.empty()) throw ConfigError("benchmark needs at least one fraction");
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("fractions must lie in (0, 1]");
  }
  if (seeds.empty()) throw ConfigError("benchmark needs at least one seed");

  BenchmarkReport report;
  report.fractions = fractions;
  for (double f : fractions) {
    if (f >= 1.0) {
      // full corpus: unsampled, mean of two independent runs
      std::size_t reps = seeds.size() >= 2 ? 2 : 1;
      for (std::size_t r = 1; r <= reps; ++r) {
        auto res = run_pipeline(cfg, train, gold, test, backend);
        report.rows.push_back({1.0, "run" + std::to_string(r), test.size(), res.timings});
      }
      continue;
    }
    std::size_t k = static_cast<std::size_t>(std::llround(f * static_cast<double>(test.size())));
    for (std::uint64_t seed : seeds) {
      std::vector<std::size_t> picks = sample_without_replacement(test.size(), k, seed);
      std::vector<Mention> subset;
      subset.reserve(picks.size());
      for (std::size_t i : picks) subset.push_back(test[i]);
      auto res = run_pipeline(cfg, train, gold, subset, backend);
      report.rows.push_back({f, std::to_string(seed), subset.size(), res.timings});
    }
  }
  return report;
}

namespace {

struct Aggregate {
  double mean = 0.0;
  double stdev = 0.0;
};

Aggregate aggregate(const std::vector<double>& xs) {
  Aggregate a;
  if (xs.empty()) return a;
  a.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.stdev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return a;
}

std::string fraction_label(double f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g%%", f * 100.0);
  return buf;
}

std::string cell(const Aggregate& a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f ± %.2f", a.mean, a.stdev);
  return buf;
}

}  // namespace

std::string format_benchmark_table(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "Fraction\tn\tEmbed (s)\tKB Match (s)\tCanon. (s)\tHDBSCAN (s)\tMerge (s)\tTotal (s)\n";
  for (double f : report.fractions) {
    std::vector<double> embed, kb, canon, cluster, merge, total, ns;
    for (const BenchmarkRow& row : report.rows) {
      if (row.fraction != f) continue;
      embed.push_back(row.timings.embed_s);
      kb.push_back(row.timings.kb_match_s);
      canon.push_back(row.timings.canonicalization_s);
      cluster.push_back(row.timings.clustering_s);
      merge.push_back(row.timings.merge_s);
      total.push_back(row.timings.total_s);
      ns.push_back(static_cast<double>(row.n));
    }
    if (ns.empty()) continue;
    out << fraction_label(f) << '\t' << static_cast<std::size_t>(aggregate(ns).mean) << '\t'
        << cell(aggregate(embed)) << '\t' << cell(aggregate(kb)) << '\t' << cell(aggregate(canon))
        << '\t' << cell(aggregate(cluster)) << '\t' << cell(aggregate(merge)) << '\t'
        << cell(aggregate(total)) << '\n';
  }
  return out.str();
}

void write_benchmark_long(const BenchmarkReport& report, std::ostream& out) {
  out << "fraction\tseed\tstage\tseconds\n";
  char buf[64];
  auto emit = [&](const BenchmarkRow& row, const char* stage, double s) {
    std::snprintf(buf, sizeof(buf), "%.6f", s);
    out << row.fraction << '\t' << row.run_id << '\t' << stage << '\t' << buf << '\n';
  };
  for (const BenchmarkRow& row : report.rows) {
    emit(row, "embed", row.timings.embed_s);
    emit(row, "kb_match", row.timings.kb_match_s);
    emit(row, "canonicalization", row.timings.canonicalization_s);
    emit(row, "clustering", row.timings.clustering_s);
    emit(row, "merge", row.timings.merge_s);
    emit(row, "total", row.timings.total_s);
  }
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) {
        throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
      }
      continue;
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return std::string();
      auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "mode") cfg.mode = parse_mode(value);
      else if (key == "high_threshold") cfg.high_threshold = std::stod(value);
      else if (key == "medium_threshold") cfg.medium_threshold = std::stod(value);
      else if (key == "epsilon") cfg.epsilon = std::stod(value);
      else if (key == "min_cluster_size") cfg.min_cluster_size = std::stoi(value);
      else if (key == "min_samples") cfg.min_samples = std::stoi(value);
      else if (key == "block_limit") cfg.block_limit = static_cast<std::size_t>(std::stoull(value));
      else if (key == "embed_dim") cfg.embed_dim = static_cast<std::size_t>(std::stoull(value));
      else if (key == "seed") cfg.seed = std::stoull(value);
      else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config line " + std::to_string(line_no) + ": bad value for '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace mlink
