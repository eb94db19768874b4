#include "mlink/assigner.hpp"

namespace mlink {

std::string to_string(MatchMethod method) {
  switch (method) {
    case MatchMethod::exact_string: return "exact_string";
    case MatchMethod::high_sim: return "high_sim";
    case MatchMethod::medium_sim_string: return "medium_sim_string";
  }
  return "high_sim";
}

Assignment assign(const Mention& m, const EmbeddingVector& e, const FlatIndex& index,
                  const StringDictionary& dict, const PipelineConfig& cfg,
                  const AbbreviationMap& abbrev) {
  Assignment a;
  a.mention_id = m.id;

  CanonicalName key = canonical_key(m.surface, abbrev);

  // Step 1: exact string match, scoped to subtask3. Runs before retrieval.
  if (cfg.mode == Mode::subtask3) {
    if (auto hit = dict.lookup(key)) {
      a.matched = true;
      a.cluster_id = *hit;
      a.method = MatchMethod::exact_string;
      return a;
    }
  }

  if (e.degenerate() || index.empty()) {
    return a;  // unmatched, similarity absent
  }

  auto [pos, sim] = index.nearest(e);
  a.similarity = sim;

  // Step 2: high-confidence semantic match.
  if (sim >= cfg.high_threshold) {
    a.matched = true;
    a.cluster_id = index.centroids[pos].cluster_id;
    a.method = MatchMethod::high_sim;
    return a;
  }

  // Step 3: medium band corroborated by the dictionary; the dictionary's
  // cluster is the one assigned. Scoped to subtask1/2.
  if (cfg.mode != Mode::subtask3 && sim >= cfg.medium_threshold) {
    if (auto hit = dict.lookup(key)) {
      a.matched = true;
      a.cluster_id = *hit;
      a.method = MatchMethod::medium_sim_string;
      return a;
    }
  }

  return a;  // step 4: unmatched, similarity kept
}

AssignOutcome assign_all(const std::vector<Mention>& mentions,
                         const std::vector<EmbeddingVector>& embeddings, const FlatIndex& index,
                         const StringDictionary& dict, const PipelineConfig& cfg,
                         const AbbreviationMap& abbrev) {
  if (mentions.size() != embeddings.size()) {
    throw ValidationError("assign_all: " + std::to_string(mentions.size()) + " mentions but " +
                          std::to_string(embeddings.size()) + " embeddings");
  }
  AssignOutcome out;
  out.assignments.reserve(mentions.size());
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    out.assignments.push_back(assign(mentions[i], embeddings[i], index, dict, cfg, abbrev));
    if (!out.assignments.back().matched) out.unmatched.push_back(i);
  }
  return out;
}

}  // namespace mlink
