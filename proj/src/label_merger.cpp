#include "mlink/label_merger.hpp"

#include <set>

namespace mlink {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kb_cascade: return "kb_cascade";
    case Provenance::new_cluster: return "new_cluster";
    case Provenance::name_merged: return "name_merged";
  }
  return "kb_cascade";
}

FinalLabeling final_merge(const std::vector<Assignment>& assignments,
                          const std::map<std::string, std::string>& new_labels,
                          const StringDictionary& dict,
                          const std::map<std::string, CanonicalName>& canon) {
  FinalLabeling out;

  // coverage: matched assignments and new_labels must partition the test set
  std::set<std::string> kb_labels_in_use;
  for (const Assignment& a : assignments) {
    if (a.matched) {
      if (new_labels.count(a.mention_id)) {
        throw ValidationError("mention '" + a.mention_id +
                              "' is both cascade-matched and density-clustered");
      }
      out.labels[a.mention_id] = *a.cluster_id;
      out.provenance[a.mention_id] = Provenance::kb_cascade;
      kb_labels_in_use.insert(*a.cluster_id);
    } else if (!new_labels.count(a.mention_id)) {
      throw ValidationError("unmatched mention '" + a.mention_id + "' has no cluster label");
    }
  }
  for (const auto& [id, label] : new_labels) {
    if (out.labels.count(id)) {
      throw ValidationError("mention '" + id + "' is both cascade-matched and density-clustered");
    }
  }
  for (const auto& [key, cid] : dict.entries) kb_labels_in_use.insert(cid);

  // group new clusters in first-appearance order over the assignment stream
  std::map<std::string, std::vector<std::string>> groups;  // new label -> member ids
  std::vector<std::string> group_order;
  for (const Assignment& a : assignments) {
    if (a.matched) continue;
    const std::string& label = new_labels.at(a.mention_id);
    auto [it, inserted] = groups.emplace(label, std::vector<std::string>{});
    if (inserted) group_order.push_back(label);
    it->second.push_back(a.mention_id);
  }

  std::size_t fresh_counter = 0;
  auto fresh_label = [&]() {
    std::string s;
    do {
      s = "new:" + std::to_string(fresh_counter++);
    } while (kb_labels_in_use.count(s));
    return s;
  };

  for (const std::string& label : group_order) {
    const auto& members = groups[label];
    // tally the KB clusters referenced by member canonical names
    std::map<std::string, std::size_t> votes;
    for (const auto& id : members) {
      auto cit = canon.find(id);
      if (cit == canon.end()) continue;
      if (auto hit = dict.lookup(cit->second)) ++votes[*hit];
    }
    if (votes.empty()) {
      std::string assigned = fresh_label();
      for (const auto& id : members) {
        out.labels[id] = assigned;
        out.provenance[id] = Provenance::new_cluster;
      }
      continue;
    }
    const std::string* target = nullptr;
    std::size_t best = 0;
    for (const auto& [cid, count] : votes) {
      if (count > best) {  // std::map order makes ties pick the smallest id
        target = &cid;
        best = count;
      }
    }
    for (const auto& id : members) {
      out.labels[id] = *target;
      out.provenance[id] = Provenance::name_merged;
    }
  }
  return out;
}

}  // namespace mlink
