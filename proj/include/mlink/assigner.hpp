#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlink/canonicalizer.hpp"
#include "mlink/embedding.hpp"
#include "mlink/knowledge_base.hpp"
#include "mlink/types.hpp"

namespace mlink {

enum class MatchMethod { exact_string, high_sim, medium_sim_string };

std::string to_string(MatchMethod method);

// Outcome of the assignment cascade for one mention. `similarity` is present
// for retrieval-backed outcomes; absent for exact string matches (retrieval is
// skipped) and for degenerate embeddings.
struct Assignment {
  std::string mention_id;
  bool matched = false;
  std::optional<std::string> cluster_id;
  std::optional<MatchMethod> method;
  std::optional<double> similarity;
};

// Ordered cascade:
//   1. exact canonical-string match against the dictionary (subtask3 only)
//   2. nearest centroid with similarity >= high_threshold
//   3. similarity in [medium_threshold, high_threshold) corroborated by a
//      dictionary hit, which assigns the dictionary's cluster (subtask1/2)
//   4. unmatched
// Thresholds are inclusive on the lower bound at both boundaries.
Assignment assign(const Mention& m, const EmbeddingVector& e, const FlatIndex& index,
                  const StringDictionary& dict, const PipelineConfig& cfg,
                  const AbbreviationMap& abbrev);

struct AssignOutcome {
  std::vector<Assignment> assignments;       // one per mention, input order
  std::vector<std::size_t> unmatched;        // indices into the input, ascending
};

AssignOutcome assign_all(const std::vector<Mention>& mentions,
                         const std::vector<EmbeddingVector>& embeddings, const FlatIndex& index,
                         const StringDictionary& dict, const PipelineConfig& cfg,
                         const AbbreviationMap& abbrev);

}  // namespace mlink
