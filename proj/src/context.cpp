#include "mlink/context.hpp"

#include <cctype>

namespace mlink {

namespace {

// Collapse runs of whitespace to single spaces and trim the ends.
std::string collapse(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = true;  // swallow leading whitespace
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string lower_ascii(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

void append_token(std::string& value, const std::string& token) {
  if (token.empty()) return;
  if (!value.empty()) value.push_back(' ');
  value += token;
}

}  // namespace

ContextString build_context(const Mention& m) {
  std::string anchor = lower_ascii(collapse(m.surface));
  if (anchor.empty()) {
    throw ValidationError("mention '" + m.id + "' has an empty surface form");
  }
  ContextString ctx;
  ctx.mention_id = m.id;
  ctx.value = anchor;
  append_token(ctx.value, anchor);
  append_token(ctx.value, collapse(m.entity_type));
  for (const Relation& r : m.relations) {
    append_token(ctx.value, collapse(r.surface));
  }
  return ctx;
}

std::vector<ContextString> build_contexts(const std::vector<Mention>& mentions) {
  std::vector<ContextString> out;
  out.reserve(mentions.size());
  for (const Mention& m : mentions) out.push_back(build_context(m));
  return out;
}

}  // namespace mlink
