#pragma once

// Shared test machinery: independent brute-force oracles (kept free of the
// library code paths they check) and deterministic fixture generators.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mlink/canonicalizer.hpp"
#include "mlink/embedding.hpp"
#include "mlink/types.hpp"

namespace oracle {

// --- retrieval ------------------------------------------------------------

// Exhaustive scan, written as its own loop with reversed iteration order so a
// tie or bookkeeping bug in the index shows up as a disagreement.
inline std::size_t brute_nearest(const std::vector<mlink::EmbeddingVector>& centroids,
                                 const mlink::EmbeddingVector& q) {
  std::size_t best = 0;
  double best_sim = -1e300;
  for (std::size_t i = centroids.size(); i-- > 0;) {
    double s = 0.0;
    for (std::size_t d = 0; d < q.values.size(); ++d) {
      s += centroids[i].values[d] * q.values[d];
    }
    if (s >= best_sim) {  // scanning backwards, >= keeps the smallest index
      best_sim = s;
      best = i;
    }
  }
  return best;
}

// --- coreference metrics ----------------------------------------------------

using Partition = std::vector<std::vector<std::string>>;

// MUC by explicit link enumeration: links found inside a cluster = sum over
// same-label groups of (group size - 1).
inline double muc_f1_oracle(const Partition& gold, const Partition& pred) {
  std::map<std::string, int> gold_of, pred_of;
  for (std::size_t c = 0; c < gold.size(); ++c) {
    for (const auto& id : gold[c]) gold_of[id] = static_cast<int>(c);
  }
  for (std::size_t c = 0; c < pred.size(); ++c) {
    for (const auto& id : pred[c]) pred_of[id] = static_cast<int>(c);
  }
  auto side = [](const Partition& clusters, const std::map<std::string, int>& other) {
    double num = 0.0, den = 0.0;
    for (const auto& members : clusters) {
      den += static_cast<double>(members.size()) - 1.0;
      std::map<int, int> groups;
      for (const auto& id : members) ++groups[other.at(id)];
      for (const auto& [g, size] : groups) num += static_cast<double>(size) - 1.0;
    }
    return std::pair<double, double>{num, den};
  };
  auto [rn, rd] = side(gold, pred_of);
  auto [pn, pd] = side(pred, gold_of);
  double r = rd > 0 ? rn / rd : 0.0;
  double p = pd > 0 ? pn / pd : 0.0;
  return (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
}

// B-cubed by per-mention set intersections.
inline double b_cubed_f1_oracle(const Partition& gold, const Partition& pred) {
  auto cluster_of = [](const Partition& clusters, const std::string& id) {
    for (const auto& members : clusters) {
      for (const auto& m : members) {
        if (m == id) return std::set<std::string>(members.begin(), members.end());
      }
    }
    return std::set<std::string>{};
  };
  std::vector<std::string> universe;
  for (const auto& c : gold) universe.insert(universe.end(), c.begin(), c.end());

  double p_sum = 0.0, r_sum = 0.0;
  for (const auto& id : universe) {
    std::set<std::string> g = cluster_of(gold, id);
    std::set<std::string> p = cluster_of(pred, id);
    std::vector<std::string> inter;
    std::set_intersection(g.begin(), g.end(), p.begin(), p.end(), std::back_inserter(inter));
    p_sum += static_cast<double>(inter.size()) / static_cast<double>(p.size());
    r_sum += static_cast<double>(inter.size()) / static_cast<double>(g.size());
  }
  double n = static_cast<double>(universe.size());
  double prec = p_sum / n, rec = r_sum / n;
  return (prec + rec) > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
}

// CEAF-e by exhaustive enumeration of injective alignments (small inputs only).
inline double ceafe_alignment_oracle(const Partition& gold, const Partition& pred) {
  auto phi = [](const std::vector<std::string>& g, const std::vector<std::string>& p) {
    std::set<std::string> gs(g.begin(), g.end());
    std::size_t inter = 0;
    for (const auto& id : p) inter += gs.count(id);
    return 2.0 * static_cast<double>(inter) / static_cast<double>(g.size() + p.size());
  };
  std::size_t rows = gold.size(), cols = pred.size();
  std::vector<char> used(cols, 0);
  double best = 0.0;
  auto recurse = [&](auto&& self, std::size_t row, double acc) -> void {
    if (row == rows) {
      best = std::max(best, acc);
      return;
    }
    self(self, row + 1, acc);  // leave this gold cluster unaligned
    for (std::size_t c = 0; c < cols; ++c) {
      if (used[c]) continue;
      used[c] = 1;
      self(self, row + 1, acc + phi(gold[row], pred[c]));
      used[c] = 0;
    }
  };
  recurse(recurse, 0, 0.0);
  return best;
}

inline double ceafe_f1_oracle(const Partition& gold, const Partition& pred) {
  double total = ceafe_alignment_oracle(gold, pred);
  double r = gold.empty() ? 0.0 : total / static_cast<double>(gold.size());
  double p = pred.empty() ? 0.0 : total / static_cast<double>(pred.size());
  return (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
}

// --- clustering -------------------------------------------------------------

// Connected components of the epsilon-threshold graph (raw cosine distance).
inline std::vector<int> epsilon_components(const std::vector<mlink::EmbeddingVector>& pts,
                                           double epsilon) {
  std::size_t n = pts.size();
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = next;
    std::vector<std::size_t> queue{s};
    while (!queue.empty()) {
      std::size_t u = queue.back();
      queue.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (comp[v] != -1) continue;
        double d = 1.0;
        double dotv = 0.0;
        for (std::size_t k = 0; k < pts[u].values.size(); ++k) {
          dotv += pts[u].values[k] * pts[v].values[k];
        }
        d = 1.0 - dotv;
        if (d <= epsilon) {
          comp[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

// Arithmetic mean of rows, no masking (for the all-ones-mask linearity check).
inline std::vector<double> mean_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out(rows.front().size(), 0.0);
  for (const auto& r : rows) {
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += r[d];
  }
  for (double& v : out) v /= static_cast<double>(rows.size());
  return out;
}

}  // namespace oracle

namespace fixtures {

inline mlink::EmbeddingVector random_unit_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = gauss(rng);
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return mlink::EmbeddingVector{std::move(v)};
}

// Points scattered around a few random centers, then re-normalized; produces
// sub-epsilon structure that uniform vectors rarely have.
inline std::vector<mlink::EmbeddingVector> blob_points(std::mt19937_64& rng, std::size_t n,
                                                       std::size_t dim, std::size_t centers,
                                                       double sigma) {
  std::vector<mlink::EmbeddingVector> out;
  std::vector<mlink::EmbeddingVector> c;
  for (std::size_t i = 0; i < centers; ++i) c.push_back(random_unit_vector(rng, dim));
  std::normal_distribution<double> gauss(0.0, sigma);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& base = c[i % centers];
    std::vector<double> v = base.values;
    for (double& x : v) x += gauss(rng);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    out.push_back(mlink::EmbeddingVector{std::move(v)});
  }
  return out;
}

// Random partition of n mentions into at most k clusters, no empty clusters.
inline oracle::Partition random_partition(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  oracle::Partition clusters(std::min(n, k));
  for (std::size_t i = 0; i < n; ++i) {
    std::string id = "m" + std::to_string(i);
    if (i < clusters.size()) {
      clusters[i].push_back(id);  // each cluster gets one member up front
    } else {
      clusters[rng() % clusters.size()].push_back(id);
    }
  }
  return clusters;
}

inline mlink::GoldClustering to_gold(const oracle::Partition& partition,
                                     const std::string& prefix = "c") {
  mlink::GoldClustering gold;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    gold.clusters[prefix + std::to_string(i)] =
        std::set<std::string>(partition[i].begin(), partition[i].end());
  }
  return gold;
}

inline mlink::Labeling to_labeling(const oracle::Partition& partition,
                                   const std::string& prefix = "p") {
  mlink::Labeling out;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    for (const auto& id : partition[i]) out.labels[id] = prefix + std::to_string(i);
  }
  return out;
}

// --- end-to-end corpus: 40 identities, 200 training / 120 test mentions ----
//
// Every test mention either shares a canonical key with training (the
// abbreviation map links short and long forms) or is context-identical to a
// training mention, so the pipeline can recover the gold partition exactly.

struct EndToEndCorpus {
  std::vector<mlink::Mention> train;
  mlink::GoldClustering train_gold;
  std::vector<mlink::Mention> test;
  mlink::GoldClustering test_gold;
};

inline EndToEndCorpus end_to_end_corpus() {
  const std::vector<std::string> prefixes = {"Alpha", "Beta",  "Gamma", "Delta",
                                             "Omega", "Sigma", "Nova",  "Quant"};
  const std::vector<std::string> suffixes = {"Stat", "Forge", "Miner", "Bench", "Graph"};
  const std::vector<std::string> types = {"Application", "Package", "Plugin", "Library"};

  EndToEndCorpus corpus;
  int train_seq = 0, test_seq = 0;
  for (int i = 0; i < 40; ++i) {
    std::string stem = prefixes[i % 8] + suffixes[i / 8] + std::to_string(i);
    std::string short_form = stem;
    std::string long_form = stem + " Professional Toolkit";
    std::string type = types[i % types.size()];
    std::string cluster_id = "K" + std::to_string(i);

    auto add_train = [&](const std::string& surface, std::vector<mlink::Relation> rels) {
      mlink::Mention m;
      m.id = "t" + std::to_string(train_seq++);
      m.surface = surface;
      m.entity_type = type;
      m.relations = std::move(rels);
      corpus.train_gold.clusters[cluster_id].insert(m.id);
      corpus.train.push_back(std::move(m));
    };
    add_train(short_form, {});
    add_train(short_form, {});
    add_train(short_form, {});
    add_train(long_form, {});
    add_train(short_form, {{"Abbreviation", long_form}});

    auto add_test = [&](const std::string& surface, std::vector<mlink::Relation> rels) {
      mlink::Mention m;
      m.id = "x" + std::to_string(test_seq++);
      m.surface = surface;
      m.entity_type = type;
      m.relations = std::move(rels);
      corpus.test_gold.clusters["G" + std::to_string(i)].insert(m.id);
      corpus.test.push_back(std::move(m));
    };
    // context-identical to a training mention
    add_test(short_form, {});
    // shares a canonical key through the long form
    add_test(long_form, {});
    // noisy relational context, resolvable only through the canonical key
    add_test(short_form, {{"Version", "noisefield" + std::to_string(i * 7)},
                          {"Developer", "vendorentry" + std::to_string(i * 7 + 1)},
                          {"Citation", "registry" + std::to_string(i * 7 + 2)},
                          {"URL", "mirrorsite" + std::to_string(i * 7 + 3)},
                          {"Extension", "pluginpack" + std::to_string(i * 7 + 4)},
                          {"License", "tokenblock" + std::to_string(i * 7 + 5)}});
  }
  return corpus;
}

// --- scaling corpus: identical-context clusters so the cascade matches
// everything at similarity 1.0 and stage times isolate embed + kb matching.

struct ScalingCorpus {
  std::vector<mlink::Mention> train;
  mlink::GoldClustering gold;
  std::vector<mlink::Mention> test;
};

inline ScalingCorpus scaling_corpus(std::size_t test_n, std::size_t identities = 128) {
  const std::vector<std::string> types = {"Application", "Package", "Plugin", "Library"};
  ScalingCorpus corpus;
  std::vector<std::vector<mlink::Relation>> rels(identities);
  for (std::size_t i = 0; i < identities; ++i) {
    for (int k = 0; k < 8; ++k) {
      rels[i].push_back({"Field" + std::to_string(k),
                         "attribute" + std::to_string(i * 8 + static_cast<std::size_t>(k))});
    }
  }
  auto surface_of = [](std::size_t i) {
    return "workbench" + std::to_string(i) + "suite" + std::to_string(i * 31 % 997);
  };

  int seq = 0;
  for (std::size_t i = 0; i < identities; ++i) {
    std::string cid = "K" + std::to_string(i);
    for (int r = 0; r < 4; ++r) {
      mlink::Mention m;
      m.id = "t" + std::to_string(seq++);
      m.surface = surface_of(i);
      m.entity_type = types[i % types.size()];
      m.relations = rels[i];
      corpus.gold.clusters[cid].insert(m.id);
      corpus.train.push_back(std::move(m));
    }
  }
  for (std::size_t j = 0; j < test_n; ++j) {
    std::size_t i = j % identities;
    mlink::Mention m;
    m.id = "x" + std::to_string(j);
    m.surface = surface_of(i);
    m.entity_type = types[i % types.size()];
    m.relations = rels[i];
    corpus.test.push_back(std::move(m));
  }
  return corpus;
}

// --- blocking corpus: skewed type distribution around the 20k block limit ---

struct BlockingCorpus {
  std::vector<mlink::Mention> mentions;
  std::map<std::string, mlink::CanonicalName> canon;
};

inline BlockingCorpus blocking_corpus(std::size_t total = 60000) {
  const std::vector<std::pair<std::string, double>> type_share = {
      {"Application", 34000.0 / 60000.0}, {"Package", 22500.0 / 60000.0},
      {"Plugin", 3500.0 / 60000.0}};
  const std::string letters = "abcdefghijklmnopqrstuvwxyz0123456789";

  BlockingCorpus corpus;
  std::mt19937_64 rng(9001);
  std::size_t seq = 0;
  for (const auto& [type, share] : type_share) {
    std::size_t count = static_cast<std::size_t>(share * static_cast<double>(total) + 0.5);
    for (std::size_t k = 0; k < count; ++k) {
      mlink::Mention m;
      m.id = "u" + std::to_string(seq++);
      m.entity_type = type;
      if (type == "Application" && k < 500) {
        m.surface = "---";  // degenerate canonical name, reserved bucket
      } else {
        char first = letters[rng() % letters.size()];
        m.surface = std::string(1, first) + "tool" + std::to_string(rng() % 5000);
      }
      corpus.canon.emplace(m.id, mlink::normalize(m.surface));
      corpus.mentions.push_back(std::move(m));
    }
  }
  return corpus;
}

}  // namespace fixtures
