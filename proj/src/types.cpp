#include "mlink/types.hpp"

namespace mlink {

std::set<std::string> GoldClustering::mention_universe() const {
  std::set<std::string> out;
  for (const auto& [cid, members] : clusters) {
    out.insert(members.begin(), members.end());
  }
  return out;
}

std::size_t GoldClustering::mention_count() const {
  std::size_t n = 0;
  for (const auto& [cid, members] : clusters) n += members.size();
  return n;
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::subtask1: return "subtask1";
    case Mode::subtask2: return "subtask2";
    case Mode::subtask3: return "subtask3";
  }
  return "subtask1";
}

Mode parse_mode(const std::string& text) {
  if (text == "subtask1") return Mode::subtask1;
  if (text == "subtask2") return Mode::subtask2;
  if (text == "subtask3") return Mode::subtask3;
  throw ConfigError("unknown mode '" + text + "' (expected subtask1|subtask2|subtask3)");
}

void PipelineConfig::validate() const {
  if (!(medium_threshold >= 0.0))
    throw ConfigError("medium_threshold must be >= 0");
  if (!(medium_threshold < high_threshold))
    throw ConfigError("medium_threshold must be < high_threshold");
  if (!(high_threshold <= 1.0))
    throw ConfigError("high_threshold must be <= 1");
  if (!(resolved_epsilon() > 0.0))
    throw ConfigError("epsilon must be > 0");
  if (min_cluster_size < 2)
    throw ConfigError("min_cluster_size must be >= 2");
  if (min_samples < 1)
    throw ConfigError("min_samples must be >= 1");
  if (block_limit < 1)
    throw ConfigError("block_limit must be >= 1");
  if (embed_dim < 1)
    throw ConfigError("embed_dim must be >= 1");
}

}  // namespace mlink
