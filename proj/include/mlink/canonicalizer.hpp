#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlink/types.hpp"

namespace mlink {

// Canonical name: lowercase [a-z0-9] only. May be empty for degenerate
// surfaces ("---"); empty names are flagged downstream, never merged on.
struct CanonicalName {
  std::string value;
  bool empty() const { return value.empty(); }
  bool operator==(const CanonicalName&) const = default;
  auto operator<=>(const CanonicalName&) const = default;
};

// Short-form -> long-form surface mapping mined from Abbreviation relations.
// Keys are case-folded, whitespace-trimmed short forms; values are trimmed
// long forms. Chains are resolved at build time so application is idempotent.
struct AbbreviationMap {
  std::map<std::string, std::string> entries;
  std::size_t skipped_self_pairs = 0;  // equal-length pairs dropped during the build

  std::optional<std::string> lookup(std::string_view surface) const;
  bool empty() const { return entries.empty(); }
};

// Lowercase then keep only [a-z0-9]. Total; may return an empty name.
CanonicalName normalize(std::string_view surface);

AbbreviationMap build_abbreviation_map(std::span<const Mention> mentions);
AbbreviationMap build_abbreviation_map(std::span<const Mention> a, std::span<const Mention> b);

// Expand the surface through the abbreviation map (trimmed, case-insensitive
// lookup), then normalize.
CanonicalName canonical_key(std::string_view surface, const AbbreviationMap& map);

}  // namespace mlink
