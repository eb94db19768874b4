#pragma once

#include <string>
#include <vector>

#include "mlink/types.hpp"

namespace mlink {

// Structured context string for one mention: the lowercased surface twice
// (anchor weighting), the entity type in its original casing, then every
// relation surface in input order. Single-space separated, internal
// whitespace collapsed.
struct ContextString {
  std::string value;
  std::string mention_id;
};

ContextString build_context(const Mention& m);
std::vector<ContextString> build_contexts(const std::vector<Mention>& mentions);

}  // namespace mlink
