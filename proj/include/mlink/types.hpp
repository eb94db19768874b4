#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlink {

// Input or contract violations. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration (thresholds, dimensions, unknown config keys). Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure inside a pipeline stage; carries the stage name. Exit code 3.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Relation {
  std::string relation_type;  // e.g. "Version", "Developer", "Abbreviation"
  std::string surface;        // surface form of the related mention
  bool operator==(const Relation&) const = default;
};

struct Mention {
  std::string id;
  std::string surface;
  std::string entity_type;
  std::optional<std::string> doc_id;
  std::vector<Relation> relations;  // input order is preserved and meaningful
  bool operator==(const Mention&) const = default;
};

struct GoldClustering {
  // cluster id -> member mention ids; clusters are pairwise disjoint and non-empty
  std::map<std::string, std::set<std::string>> clusters;

  std::set<std::string> mention_universe() const;
  std::size_t mention_count() const;
  bool operator==(const GoldClustering&) const = default;
};

struct Labeling {
  std::map<std::string, std::string> labels;  // mention id -> cluster label
  bool operator==(const Labeling&) const = default;
};

enum class Mode { subtask1, subtask2, subtask3 };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct PipelineConfig {
  Mode mode = Mode::subtask1;
  double high_threshold = 0.7;
  double medium_threshold = 0.5;
  // Cosine-distance horizon for cluster selection. Unset means the mode
  // default: 0.5 for subtask1/2, 0.15 for subtask3.
  std::optional<double> epsilon;
  int min_cluster_size = 2;
  int min_samples = 1;
  std::size_t block_limit = 20000;
  std::size_t embed_dim = 384;
  std::uint64_t seed = 42;

  double resolved_epsilon() const {
    if (epsilon) return *epsilon;
    return mode == Mode::subtask3 ? 0.15 : 0.5;
  }

  void validate() const;  // throws ConfigError
};

}  // namespace mlink
