#include "mlink/knowledge_base.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace mlink {

std::pair<std::size_t, double> FlatIndex::nearest(const EmbeddingVector& query) const {
  if (centroids.empty()) {
    throw ValidationError("nearest: empty centroid index");
  }
  std::size_t best = 0;
  double best_sim = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    double s = dot(centroids[i].vector, query);
    if (s > best_sim) {
      best_sim = s;
      best = i;
    }
  }
  return {best, best_sim};
}

std::vector<Centroid> build_centroids(const GoldClustering& gold,
                                      const std::map<std::string, EmbeddingVector>& embeddings) {
  std::vector<Centroid> out;
  out.reserve(gold.clusters.size());
  for (const auto& [cid, members] : gold.clusters) {
    std::vector<double> sum;
    for (const auto& mid : members) {
      auto it = embeddings.find(mid);
      if (it == embeddings.end()) {
        throw ValidationError("no embedding for mention '" + mid + "' in cluster '" + cid + "'");
      }
      if (sum.empty()) sum.assign(it->second.values.size(), 0.0);
      if (it->second.values.size() != sum.size()) {
        throw ValidationError("embedding dimension mismatch for mention '" + mid + "'");
      }
      for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += it->second.values[d];
    }
    for (double& v : sum) v /= static_cast<double>(members.size());
    try {
      out.push_back({cid, l2_normalize(std::move(sum))});
    } catch (const ValidationError&) {
      throw ValidationError("degenerate centroid for cluster '" + cid +
                            "' (member embeddings cancel out)");
    }
  }
  return out;
}

StringDictionary build_string_dictionary(const std::vector<Mention>& train,
                                         const GoldClustering& gold,
                                         const AbbreviationMap& abbrev) {
  std::map<std::string, std::string> owner;
  for (const auto& [cid, members] : gold.clusters) {
    for (const auto& mid : members) owner.emplace(mid, cid);
  }

  StringDictionary dict;
  for (const Mention& m : train) {
    auto it = owner.find(m.id);
    if (it == owner.end()) {
      throw ValidationError("training mention '" + m.id + "' is not covered by the gold clusters");
    }
    CanonicalName key = canonical_key(m.surface, abbrev);
    if (key.empty()) continue;  // degenerate surfaces never enter the dictionary
    ++dict.frequency[key.value][it->second];
  }
  for (const auto& [key, counts] : dict.frequency) {
    const std::string* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [cid, count] : counts) {
      if (count > best_count) {
        best = &cid;
        best_count = count;
      }
    }
    dict.entries.emplace(key, *best);
  }
  return dict;
}

std::pair<std::string, double> nearest_centroid(const FlatIndex& index,
                                                const EmbeddingVector& query) {
  auto [pos, sim] = index.nearest(query);
  return {index.centroids[pos].cluster_id, sim};
}

namespace {
bool has_whitespace(const std::string& s) {
  return s.find_first_of(" \t\r\n") != std::string::npos;
}
}  // namespace

void save_kb(const FlatIndex& index, const StringDictionary& dict, std::ostream& out) {
  std::size_t dim = index.centroids.empty() ? 0 : index.centroids.front().vector.values.size();
  out << "KB " << dim << ' ' << index.centroids.size() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const Centroid& c : index.centroids) {
    if (has_whitespace(c.cluster_id)) {
      throw ValidationError("cluster id '" + c.cluster_id +
                            "' contains whitespace and cannot be written to a KB snapshot");
    }
    out << c.cluster_id;
    for (double v : c.vector.values) out << ' ' << v;
    out << '\n';
  }
  out << "DICT " << dict.entries.size() << '\n';
  for (const auto& [key, cid] : dict.entries) {
    out << key << '\t' << cid << '\n';
  }
}

std::pair<FlatIndex, StringDictionary> load_kb(std::istream& in) {
  std::string tag;
  std::size_t dim = 0, count = 0;
  if (!(in >> tag >> dim >> count) || tag != "KB") {
    throw ValidationError("KB snapshot: bad header");
  }
  FlatIndex index;
  index.centroids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Centroid c;
    if (!(in >> c.cluster_id)) throw ValidationError("KB snapshot: truncated centroid list");
    c.vector.values.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      if (!(in >> c.vector.values[d])) {
        throw ValidationError("KB snapshot: truncated centroid '" + c.cluster_id + "'");
      }
    }
    index.centroids.push_back(std::move(c));
  }
  std::size_t dict_count = 0;
  if (!(in >> tag >> dict_count) || tag != "DICT") {
    throw ValidationError("KB snapshot: bad dictionary header");
  }
  in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
  StringDictionary dict;
  for (std::size_t i = 0; i < dict_count; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("KB snapshot: truncated dictionary");
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ValidationError("KB snapshot: malformed dictionary row");
    dict.entries.emplace(line.substr(0, tab), line.substr(tab + 1));
  }
  return {std::move(index), std::move(dict)};
}

}  // namespace mlink
