#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlink/canonicalizer.hpp"
#include "mlink/embedding.hpp"
#include "mlink/types.hpp"

namespace mlink {

// One independent clustering unit: mentions sharing an entity type, further
// split by the first canonical-name character when the type block exceeds the
// size limit. Empty canonical names fall into the reserved '#' bucket.
struct Block {
  std::string entity_type;
  std::optional<char> letter;
  std::vector<std::size_t> members;  // positions in the unmatched list, ascending
};

struct BlockingResult {
  std::vector<Block> blocks;
  std::vector<std::string> warnings;  // second-level blocks still over the limit
};

BlockingResult make_blocks(const std::vector<Mention>& unmatched,
                           const std::map<std::string, CanonicalName>& canon, std::size_t limit);

// Dense cosine-distance matrix: d = 1 - <x,y>, zero diagonal, symmetric.
std::vector<std::vector<double>> pairwise_distances(const std::vector<EmbeddingVector>& points);

// Distance to the min_samples-th nearest neighbor, counting the point itself;
// min_samples=1 therefore gives 0 for every point.
std::vector<double> core_distances(const std::vector<EmbeddingVector>& points, int min_samples);

double mutual_reachability(double core_a, double core_b, double distance);

struct ClusterParams {
  double epsilon = 0.5;
  int min_cluster_size = 2;
  int min_samples = 1;
};

struct ClusterResult {
  std::vector<int> labels;  // per point: cluster id in [0, cluster_count) or -1 for noise
  int cluster_count = 0;
};

// Hierarchical density clustering over one block: mutual-reachability minimum
// spanning tree, single-linkage hierarchy, condensed tree under
// min_cluster_size, excess-of-mass selection lifted through the epsilon
// horizon. Deterministic; ties break toward smaller point indices.
ClusterResult hdbscan(const std::vector<EmbeddingVector>& points, const ClusterParams& params);

// Clustered points share their cluster's label; every noise point receives a
// fresh unique label. `prefix` scopes labels to a block.
std::map<std::string, std::string> singletonize(const ClusterResult& result,
                                                const std::vector<std::string>& ids,
                                                const std::string& prefix);

// Union-find over labels: all clusters containing a given non-empty canonical
// name collapse into one, across blocks. The surviving label is the
// lexicographically smallest of each union.
std::map<std::string, std::string> merge_by_canonical_name(
    const std::map<std::string, std::string>& labels,
    const std::map<std::string, CanonicalName>& canon);

// Stage driver: block, cluster each block, singletonize, merge by name.
std::map<std::string, std::string> cluster_unmatched(
    const std::vector<Mention>& unmatched, const std::vector<EmbeddingVector>& embeddings,
    const std::map<std::string, CanonicalName>& canon, const PipelineConfig& cfg,
    std::vector<std::string>* warnings = nullptr, std::ostream* dump_blocks = nullptr);

}  // namespace mlink
