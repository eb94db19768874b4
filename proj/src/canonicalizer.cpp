#include "mlink/canonicalizer.hpp"

#include <algorithm>

namespace mlink {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string fold(std::string_view s) {
  std::string out = trim(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_abbreviation_type(const std::string& relation_type) {
  return fold(relation_type) == "abbreviation";
}

}  // namespace

CanonicalName normalize(std::string_view surface) {
  CanonicalName out;
  out.value.reserve(surface.size());
  for (unsigned char c : surface) {
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) out.value.push_back(static_cast<char>(c));
  }
  return out;
}

std::optional<std::string> AbbreviationMap::lookup(std::string_view surface) const {
  auto it = entries.find(fold(surface));
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

namespace {

AbbreviationMap build_from(std::span<const std::span<const Mention>> groups) {
  // candidate counts: folded short form -> long form -> frequency
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  std::size_t skipped = 0;

  for (const auto& group : groups) {
    for (const Mention& m : group) {
      for (const Relation& r : m.relations) {
        if (!is_abbreviation_type(r.relation_type)) continue;
        std::string a = trim(m.surface);
        std::string b = trim(r.surface);
        if (a.empty() || b.empty()) continue;
        if (a.size() == b.size()) {
          ++skipped;
          continue;
        }
        if (a.size() > b.size()) std::swap(a, b);  // orient shorter -> longer
        ++counts[fold(a)][b];
      }
    }
  }

  AbbreviationMap map;
  map.skipped_self_pairs = skipped;
  for (const auto& [short_key, longs] : counts) {
    // highest frequency wins, ties go to the lexicographically smallest long form
    const std::string* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [long_form, count] : longs) {
      if (count > best_count) {
        best = &long_form;
        best_count = count;
      }
    }
    map.entries.emplace(short_key, *best);
  }

  // Resolve chains (A->B, B->C becomes A->C). Lengths strictly increase along
  // a chain, so this terminates.
  for (auto& [short_key, long_form] : map.entries) {
    for (;;) {
      auto next = map.entries.find(fold(long_form));
      if (next == map.entries.end() || next->second == long_form) break;
      long_form = next->second;
    }
  }
  return map;
}

}  // namespace

AbbreviationMap build_abbreviation_map(std::span<const Mention> mentions) {
  std::span<const Mention> groups[] = {mentions};
  return build_from(groups);
}

AbbreviationMap build_abbreviation_map(std::span<const Mention> a, std::span<const Mention> b) {
  std::span<const Mention> groups[] = {a, b};
  return build_from(groups);
}

CanonicalName canonical_key(std::string_view surface, const AbbreviationMap& map) {
  if (auto expanded = map.lookup(surface)) return normalize(*expanded);
  return normalize(surface);
}

}  // namespace mlink
