#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mlink/canonicalizer.hpp"
#include "mlink/embedding.hpp"
#include "mlink/types.hpp"

namespace mlink {

struct Centroid {
  std::string cluster_id;
  EmbeddingVector vector;  // unit norm
};

// Canonical name -> owning training cluster, with per-cluster frequencies kept
// for collision resolution (highest count wins, ties to the smallest id).
struct StringDictionary {
  std::map<std::string, std::string> entries;
  std::map<std::string, std::map<std::string, std::size_t>> frequency;

  std::optional<std::string> lookup(const CanonicalName& key) const {
    if (key.empty()) return std::nullopt;
    auto it = entries.find(key.value);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  }
};

// Exact top-1 inner-product retrieval over a fixed centroid list. No
// approximation: the result is the argmax over all centroids, ties broken by
// the smallest index.
struct FlatIndex {
  std::vector<Centroid> centroids;

  bool empty() const { return centroids.empty(); }
  std::pair<std::size_t, double> nearest(const EmbeddingVector& query) const;
};

// Per-cluster mean of member embeddings, re-normalized. Centroids come out in
// cluster-id order. Missing embeddings and near-zero means abort.
std::vector<Centroid> build_centroids(const GoldClustering& gold,
                                      const std::map<std::string, EmbeddingVector>& embeddings);

StringDictionary build_string_dictionary(const std::vector<Mention>& train,
                                         const GoldClustering& gold,
                                         const AbbreviationMap& abbrev);

// Convenience wrapper: (cluster_id, similarity) of the exact nearest centroid.
std::pair<std::string, double> nearest_centroid(const FlatIndex& index,
                                                const EmbeddingVector& query);

// Snapshot: "KB <D> <num_centroids>", one centroid per line, then
// "DICT <n>" and tab-separated dictionary rows. Lossless round-trip.
void save_kb(const FlatIndex& index, const StringDictionary& dict, std::ostream& out);
std::pair<FlatIndex, StringDictionary> load_kb(std::istream& in);

}  // namespace mlink
