#include "mlink/io.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace mlink {

using nlohmann::json;

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

json parse_line(const std::string& line, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ValidationError("line " + std::to_string(line_no) + ": malformed record");
  }
  return j;
}

std::string require_string(const json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ValidationError("line " + std::to_string(line_no) + ": missing string field '" +
                          key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<Mention> parse_mentions(std::istream& in) {
  std::vector<Mention> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    json j = parse_line(line, line_no);

    Mention m;
    m.id = require_string(j, "id", line_no);
    m.surface = require_string(j, "surface", line_no);
    m.entity_type = require_string(j, "type", line_no);
    if (trimmed(m.surface).empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": mention '" + m.id +
                            "' has an empty surface form");
    }
    if (auto it = j.find("doc_id"); it != j.end() && it->is_string()) {
      m.doc_id = it->get<std::string>();
    }
    if (auto it = j.find("relations"); it != j.end()) {
      if (!it->is_array()) {
        throw ValidationError("line " + std::to_string(line_no) + ": 'relations' must be an array");
      }
      for (const auto& rj : *it) {
        if (!rj.is_object()) {
          throw ValidationError("line " + std::to_string(line_no) + ": relation is not an object");
        }
        Relation r;
        r.relation_type = require_string(rj, "relation_type", line_no);
        r.surface = require_string(rj, "surface", line_no);
        if (trimmed(r.surface).empty()) {
          throw ValidationError("line " + std::to_string(line_no) +
                                ": relation surface is empty after trimming");
        }
        m.relations.push_back(std::move(r));
      }
    }
    if (!seen.insert(m.id).second) {
      throw ValidationError("duplicate mention id '" + m.id + "'");
    }
    out.push_back(std::move(m));
  }
  return out;
}

GoldClustering parse_gold(std::istream& in) {
  GoldClustering gold;
  std::map<std::string, std::string> owner;  // mention id -> cluster id
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    json j = parse_line(line, line_no);

    std::string cid = require_string(j, "cluster_id", line_no);
    if (gold.clusters.count(cid)) {
      throw ValidationError("duplicate cluster id '" + cid + "'");
    }
    auto it = j.find("mention_ids");
    if (it == j.end() || !it->is_array()) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": missing array field 'mention_ids'");
    }
    std::set<std::string> members;
    for (const auto& mj : *it) {
      if (!mj.is_string()) {
        throw ValidationError("line " + std::to_string(line_no) + ": mention id is not a string");
      }
      std::string mid = mj.get<std::string>();
      auto [oit, inserted] = owner.emplace(mid, cid);
      if (!inserted) {
        throw ValidationError("mention '" + mid + "' appears in clusters '" + oit->second +
                              "' and '" + cid + "'");
      }
      members.insert(std::move(mid));
    }
    if (members.empty()) {
      throw ValidationError("cluster '" + cid + "' is empty");
    }
    gold.clusters.emplace(std::move(cid), std::move(members));
  }
  return gold;
}

Labeling parse_labeling(std::istream& in) {
  Labeling out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    json j = parse_line(line, line_no);
    std::string id = require_string(j, "id", line_no);
    std::string label = require_string(j, "label", line_no);
    if (!out.labels.emplace(std::move(id), std::move(label)).second) {
      throw ValidationError("duplicate prediction for mention '" +
                            j["id"].get<std::string>() + "'");
    }
  }
  return out;
}

void serialize_mentions(const std::vector<Mention>& mentions, std::ostream& out) {
  for (const auto& m : mentions) {
    json j;
    j["id"] = m.id;
    j["surface"] = m.surface;
    j["type"] = m.entity_type;
    if (m.doc_id) j["doc_id"] = *m.doc_id;
    json rels = json::array();
    for (const auto& r : m.relations) {
      rels.push_back({{"relation_type", r.relation_type}, {"surface", r.surface}});
    }
    j["relations"] = std::move(rels);
    out << j.dump() << '\n';
  }
}

void serialize_gold(const GoldClustering& gold, std::ostream& out) {
  for (const auto& [cid, members] : gold.clusters) {
    json j;
    j["cluster_id"] = cid;
    j["mention_ids"] = members;
    out << j.dump() << '\n';
  }
}

void serialize_labeling(const Labeling& labeling, std::ostream& out) {
  for (const auto& [id, label] : labeling.labels) {
    out << json{{"id", id}, {"label", label}}.dump() << '\n';
  }
}

void serialize_labeling(const Labeling& labeling, const std::vector<std::string>& order,
                        std::ostream& out) {
  for (const auto& id : order) {
    auto it = labeling.labels.find(id);
    if (it == labeling.labels.end()) {
      throw ValidationError("labeling is not total: missing mention '" + id + "'");
    }
    out << json{{"id", id}, {"label", it->second}}.dump() << '\n';
  }
}

namespace {
std::ifstream open_or_throw(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open file: " + path);
  return f;
}
}  // namespace

std::vector<Mention> load_mentions(const std::string& path) {
  auto f = open_or_throw(path);
  return parse_mentions(f);
}

GoldClustering load_gold(const std::string& path) {
  auto f = open_or_throw(path);
  return parse_gold(f);
}

Labeling load_labeling(const std::string& path) {
  auto f = open_or_throw(path);
  return parse_labeling(f);
}

}  // namespace mlink
