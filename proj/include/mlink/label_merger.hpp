#pragma once

#include <map>
#include <string>
#include <vector>

#include "mlink/assigner.hpp"
#include "mlink/canonicalizer.hpp"
#include "mlink/knowledge_base.hpp"

namespace mlink {

enum class Provenance { kb_cascade, new_cluster, name_merged };

std::string to_string(Provenance p);

// Final labeling over the whole test set. KB labels and new-cluster labels
// live in distinct namespaces (new clusters are re-issued as "new:<k>").
struct FinalLabeling {
  std::map<std::string, std::string> labels;
  std::map<std::string, Provenance> provenance;
};

// Matched mentions keep their KB cluster. Each new cluster is relabeled to the
// KB cluster its members' canonical names point at through the dictionary:
// unanimously when one cluster is referenced, by majority (ties to the
// smallest cluster id) when several are, and kept as a new cluster when none
// is. New clusters are never split.
FinalLabeling final_merge(const std::vector<Assignment>& assignments,
                          const std::map<std::string, std::string>& new_labels,
                          const StringDictionary& dict,
                          const std::map<std::string, CanonicalName>& canon);

}  // namespace mlink
