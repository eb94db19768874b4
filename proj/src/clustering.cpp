#include "mlink/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace mlink {

BlockingResult make_blocks(const std::vector<Mention>& unmatched,
                           const std::map<std::string, CanonicalName>& canon, std::size_t limit) {
  if (limit < 1) throw ValidationError("block limit must be >= 1");

  auto letter_of = [&](const Mention& m) -> char {
    auto it = canon.find(m.id);
    if (it == canon.end() || it->second.empty()) return '#';
    return it->second.value.front();
  };

  std::map<std::string, std::vector<std::size_t>> by_type;
  for (std::size_t i = 0; i < unmatched.size(); ++i) {
    by_type[unmatched[i].entity_type].push_back(i);
  }

  BlockingResult out;
  for (auto& [type, members] : by_type) {
    if (members.size() <= limit) {
      out.blocks.push_back({type, std::nullopt, std::move(members)});
      continue;
    }
    std::map<char, std::vector<std::size_t>> by_letter;
    for (std::size_t i : members) by_letter[letter_of(unmatched[i])].push_back(i);
    for (auto& [letter, sub] : by_letter) {
      if (sub.size() > limit) {
        out.warnings.push_back("block (" + type + ", '" + std::string(1, letter) + "') has " +
                               std::to_string(sub.size()) + " mentions, over the limit of " +
                               std::to_string(limit) + "; no third blocking level is applied");
      }
      out.blocks.push_back({type, letter, std::move(sub)});
    }
  }
  return out;
}

std::vector<std::vector<double>> pairwise_distances(const std::vector<EmbeddingVector>& points) {
  std::size_t n = points.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = cosine_distance(points[i], points[j]);
      d[i][j] = v;
      d[j][i] = v;
    }
  }
  return d;
}

std::vector<double> core_distances(const std::vector<EmbeddingVector>& points, int min_samples) {
  std::size_t n = points.size();
  std::vector<double> core(n, 0.0);
  if (min_samples <= 1) return core;  // the nearest neighbor counting self is self

  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(min_samples), n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = (i == j) ? 0.0 : cosine_distance(points[i], points[j]);
    }
    std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
    core[i] = row[k - 1];
  }
  return core;
}

double mutual_reachability(double core_a, double core_b, double distance) {
  return std::max(distance, std::max(core_a, core_b));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// lambda = 1/distance, clamped so duplicate points (distance 0) stay finite.
double lambda_of(double distance) {
  if (distance == kInf) return 0.0;
  return 1.0 / std::max(distance, 1e-12);
}

struct MstEdge {
  int a, b;
  double weight;
};

// Prim over the complete mutual-reachability graph; O(n^2) time, O(n) memory,
// distances computed on demand. Ties go to the smallest vertex index.
std::vector<MstEdge> prim_mst(const std::vector<EmbeddingVector>& points,
                              const std::vector<double>& core) {
  std::size_t n = points.size();
  std::vector<MstEdge> edges;
  edges.reserve(n - 1);

  std::vector<double> best(n, kInf);
  std::vector<int> best_from(n, 0);
  std::vector<char> in_tree(n, 0);

  int current = 0;
  in_tree[0] = 1;
  for (std::size_t round = 1; round < n; ++round) {
    // relax against the vertex that just entered the tree
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      double w = mutual_reachability(core[current], core[v],
                                     cosine_distance(points[current], points[v]));
      if (w < best[v]) {
        best[v] = w;
        best_from[v] = current;
      }
    }
    int pick = -1;
    double pick_w = kInf;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && best[v] < pick_w) {
        pick_w = best[v];
        pick = static_cast<int>(v);
      }
    }
    edges.push_back({best_from[pick], pick, pick_w});
    in_tree[pick] = 1;
    current = pick;
  }
  return edges;
}

// Binary single-linkage dendrogram built from MST edges in ascending order.
// Leaves are 0..n-1; internal node i (0-based) is id n+i.
struct Dendrogram {
  int n = 0;
  std::vector<int> left, right;   // children of internal nodes
  std::vector<double> height;     // merge distance of internal nodes
  std::vector<int> size;          // point count under each node id
  int root = 0;

  int node_size(int id) const { return id < n ? 1 : size[id - n]; }
};

Dendrogram build_dendrogram(int n, std::vector<MstEdge> edges) {
  std::sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    auto xa = std::minmax(x.a, x.b);
    auto ya = std::minmax(y.a, y.b);
    return xa < ya;
  });

  Dendrogram d;
  d.n = n;
  d.left.reserve(n - 1);
  d.right.reserve(n - 1);
  d.height.reserve(n - 1);
  d.size.reserve(n - 1);

  std::vector<int> rep(2 * n - 1);  // union-find with current-node tracking
  std::iota(rep.begin(), rep.end(), 0);
  std::vector<int> top(2 * n - 1);  // representative -> current top node id
  std::iota(top.begin(), top.end(), 0);

  auto find = [&](int x) {
    while (rep[x] != x) {
      rep[x] = rep[rep[x]];
      x = rep[x];
    }
    return x;
  };

  int next_id = n;
  for (const MstEdge& e : edges) {
    int ra = find(e.a);
    int rb = find(e.b);
    int na = top[ra];
    int nb = top[rb];
    d.left.push_back(na);
    d.right.push_back(nb);
    d.height.push_back(e.weight);
    d.size.push_back(d.node_size(na) + d.node_size(nb));
    rep[rb] = ra;
    top[ra] = next_id;
    ++next_id;
  }
  d.root = next_id - 1;
  return d;
}

// Condensed tree: clusters surviving the min_cluster_size filter, plus the
// exit point/distance of every point.
struct CondensedTree {
  struct Node {
    int parent = -1;
    double birth = kInf;  // distance at which the cluster separates from its sibling
    int child_a = -1, child_b = -1;
    double death = 0.0;   // distance of the split into two valid children
    double stability = 0.0;
  };
  std::vector<Node> nodes;        // 0 is the root cluster
  std::vector<int> exit_node;     // per point: cluster it finally exits
  std::vector<double> exit_dist;  // per point: distance of that exit
};

void collect_leaves(const Dendrogram& d, int node, std::vector<int>& out) {
  std::vector<int> stack{node};
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    if (b < d.n) {
      out.push_back(b);
    } else {
      stack.push_back(d.left[b - d.n]);
      stack.push_back(d.right[b - d.n]);
    }
  }
}

CondensedTree condense(const Dendrogram& d, int min_cluster_size) {
  CondensedTree t;
  t.nodes.push_back({});  // root, born at infinity
  t.exit_node.assign(d.n, 0);
  t.exit_dist.assign(d.n, 0.0);

  std::vector<int> shed;
  std::vector<std::pair<int, int>> stack{{d.root, 0}};  // (binary node, condensed id)
  while (!stack.empty()) {
    auto [b, c] = stack.back();
    stack.pop_back();
    for (;;) {
      int l = d.left[b - d.n];
      int r = d.right[b - d.n];
      double h = d.height[b - d.n];
      int sl = d.node_size(l);
      int sr = d.node_size(r);
      bool l_ok = sl >= min_cluster_size;
      bool r_ok = sr >= min_cluster_size;

      if (l_ok && r_ok) {
        int ca = static_cast<int>(t.nodes.size());
        t.nodes.push_back({c, h, -1, -1, 0.0, 0.0});
        int cb = static_cast<int>(t.nodes.size());
        t.nodes.push_back({c, h, -1, -1, 0.0, 0.0});
        t.nodes[c].child_a = ca;
        t.nodes[c].child_b = cb;
        t.nodes[c].death = h;
        stack.emplace_back(r, cb);
        b = l;
        c = ca;
        continue;
      }
      if (l_ok || r_ok) {
        // minority side sheds as noise at this level; the cluster carries on
        shed.clear();
        collect_leaves(d, l_ok ? r : l, shed);
        for (int p : shed) {
          t.exit_node[p] = c;
          t.exit_dist[p] = h;
        }
        b = l_ok ? l : r;
        if (b < d.n) {  // only possible for min_cluster_size == 1, not allowed
          t.exit_node[b] = c;
          t.exit_dist[b] = h;
          break;
        }
        continue;
      }
      // both sides below min_cluster_size: the cluster dissolves here
      shed.clear();
      collect_leaves(d, b, shed);
      for (int p : shed) {
        t.exit_node[p] = c;
        t.exit_dist[p] = h;
      }
      break;
    }
  }
  return t;
}

// Point count of every condensed cluster at its birth.
std::vector<int> condensed_sizes(const CondensedTree& t) {
  std::vector<int> size(t.nodes.size(), 0);
  for (int e : t.exit_node) ++size[e];
  for (std::size_t c = t.nodes.size(); c-- > 1;) {
    size[t.nodes[c].parent] += size[c];
  }
  return size;
}

ClusterResult label_points(const CondensedTree& t, const std::vector<char>& selected,
                           double epsilon) {
  std::size_t n_points = t.exit_node.size();
  ClusterResult result;
  result.labels.assign(n_points, -1);

  std::vector<int> cluster_index(t.nodes.size(), -1);
  int next = 0;
  for (std::size_t c = 0; c < t.nodes.size(); ++c) {
    if (selected[c]) cluster_index[c] = next++;
  }
  result.cluster_count = next;

  for (std::size_t p = 0; p < n_points; ++p) {
    int c = t.exit_node[p];
    int hit = -1;
    while (c != -1) {
      if (selected[c]) {
        hit = c;
        break;
      }
      c = t.nodes[c].parent;
    }
    if (hit == -1) continue;
    if (hit == 0 && t.exit_dist[p] > epsilon) continue;  // root membership is epsilon-bounded
    result.labels[p] = cluster_index[hit];
  }

  // drop clusters that ended up empty (a selected root may admit nobody)
  std::vector<int> used(result.cluster_count, 0);
  for (int l : result.labels) {
    if (l >= 0) used[l] = 1;
  }
  std::vector<int> remap(result.cluster_count, -1);
  int compact = 0;
  for (int i = 0; i < result.cluster_count; ++i) {
    if (used[i]) remap[i] = compact++;
  }
  for (int& l : result.labels) {
    if (l >= 0) l = remap[l];
  }
  result.cluster_count = compact;
  return result;
}

}  // namespace

ClusterResult hdbscan(const std::vector<EmbeddingVector>& points, const ClusterParams& params) {
  std::size_t n = points.size();
  ClusterResult result;
  if (n == 0) return result;
  if (n == 1) {
    result.labels = {-1};  // a lone point has no pair, hence noise
    return result;
  }
  if (params.min_cluster_size < 2) throw ValidationError("min_cluster_size must be >= 2");
  if (params.min_samples < 1) throw ValidationError("min_samples must be >= 1");
  if (!(params.epsilon > 0.0)) throw ValidationError("epsilon must be > 0");

  std::vector<double> core = core_distances(points, params.min_samples);
  std::vector<MstEdge> edges = prim_mst(points, core);
  Dendrogram dendro = build_dendrogram(static_cast<int>(n), std::move(edges));
  CondensedTree tree = condense(dendro, params.min_cluster_size);

  // Stabilities: excess of mass in lambda space. Point exits contribute
  // individually; a split contributes both children's populations at the
  // parent's death distance.
  std::vector<int> sizes = condensed_sizes(tree);
  for (std::size_t p = 0; p < n; ++p) {
    auto& node = tree.nodes[tree.exit_node[p]];
    node.stability += lambda_of(tree.exit_dist[p]) - lambda_of(node.birth);
  }
  for (std::size_t c = 0; c < tree.nodes.size(); ++c) {
    auto& node = tree.nodes[c];
    if (node.child_a == -1) continue;
    double contribution = lambda_of(node.death) - lambda_of(node.birth);
    node.stability += contribution * (sizes[node.child_a] + sizes[node.child_b]);
  }

  // Excess-of-mass selection, bottom-up (children have larger ids). The root
  // competes like any other cluster; a parent wins stability ties.
  std::size_t m = tree.nodes.size();
  std::vector<double> score(m, 0.0);
  std::vector<char> eom(m, 0);
  for (std::size_t c = m; c-- > 0;) {
    const auto& node = tree.nodes[c];
    if (node.child_a == -1) {
      score[c] = node.stability;
      eom[c] = 1;
    } else {
      double child_sum = score[node.child_a] + score[node.child_b];
      if (node.stability >= child_sum) {
        score[c] = node.stability;
        eom[c] = 1;
      } else {
        score[c] = child_sum;
      }
    }
  }
  // resolve nesting: keep only the topmost EOM winners
  std::vector<char> selected(m, 0);
  {
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      if (eom[c]) {
        selected[c] = 1;
        continue;
      }
      if (tree.nodes[c].child_a != -1) {
        stack.push_back(tree.nodes[c].child_a);
        stack.push_back(tree.nodes[c].child_b);
      }
    }
  }

  // Epsilon horizon: lift every selected cluster born below epsilon to its
  // lowest ancestor born at or above it, then drop nodes covered by a
  // selected ancestor.
  std::vector<char> lifted(m, 0);
  for (std::size_t c = 0; c < m; ++c) {
    if (!selected[c]) continue;
    int a = static_cast<int>(c);
    while (tree.nodes[a].birth < params.epsilon && tree.nodes[a].parent != -1) {
      a = tree.nodes[a].parent;
    }
    lifted[a] = 1;
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (!lifted[c]) continue;
    for (int a = tree.nodes[c].parent; a != -1; a = tree.nodes[a].parent) {
      if (lifted[a]) {
        lifted[c] = 0;
        break;
      }
    }
  }

  return label_points(tree, lifted, params.epsilon);
}

std::map<std::string, std::string> singletonize(const ClusterResult& result,
                                                const std::vector<std::string>& ids,
                                                const std::string& prefix) {
  if (result.labels.size() != ids.size()) {
    throw ValidationError("singletonize: label/id count mismatch");
  }
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (result.labels[i] >= 0) {
      out[ids[i]] = prefix + ":c" + std::to_string(result.labels[i]);
    } else {
      out[ids[i]] = prefix + ":n" + std::to_string(i);
    }
  }
  return out;
}

std::map<std::string, std::string> merge_by_canonical_name(
    const std::map<std::string, std::string>& labels,
    const std::map<std::string, CanonicalName>& canon) {
  // index labels
  std::map<std::string, int> label_ix;
  std::vector<std::string> label_names;
  for (const auto& [id, label] : labels) {
    if (label_ix.emplace(label, static_cast<int>(label_names.size())).second) {
      label_names.push_back(label);
    }
  }

  std::vector<int> parent(label_names.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

  std::map<std::string, int> first_label_for_name;
  for (const auto& [id, label] : labels) {
    auto cit = canon.find(id);
    if (cit == canon.end() || cit->second.empty()) continue;
    int ix = label_ix[label];
    auto [fit, inserted] = first_label_for_name.emplace(cit->second.value, ix);
    if (!inserted) unite(ix, fit->second);
  }

  // the lexicographically smallest label of each union survives
  std::vector<const std::string*> rep(label_names.size(), nullptr);
  for (std::size_t i = 0; i < label_names.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (!rep[r] || label_names[i] < *rep[r]) rep[r] = &label_names[i];
  }

  std::map<std::string, std::string> out;
  for (const auto& [id, label] : labels) {
    out[id] = *rep[find(label_ix[label])];
  }
  return out;
}

std::map<std::string, std::string> cluster_unmatched(
    const std::vector<Mention>& unmatched, const std::vector<EmbeddingVector>& embeddings,
    const std::map<std::string, CanonicalName>& canon, const PipelineConfig& cfg,
    std::vector<std::string>* warnings, std::ostream* dump_blocks) {
  if (unmatched.size() != embeddings.size()) {
    throw ValidationError("cluster_unmatched: mention/embedding count mismatch");
  }

  BlockingResult blocking = make_blocks(unmatched, canon, cfg.block_limit);
  if (warnings) {
    warnings->insert(warnings->end(), blocking.warnings.begin(), blocking.warnings.end());
  }
  if (dump_blocks) {
    for (const Block& b : blocking.blocks) {
      *dump_blocks << b.entity_type << '\t' << (b.letter ? std::string(1, *b.letter) : "-") << '\t'
                   << b.members.size() << '\n';
    }
  }

  ClusterParams params{cfg.resolved_epsilon(), cfg.min_cluster_size, cfg.min_samples};
  std::map<std::string, std::string> labels;
  for (std::size_t bi = 0; bi < blocking.blocks.size(); ++bi) {
    const Block& block = blocking.blocks[bi];
    std::vector<EmbeddingVector> pts;
    std::vector<std::string> ids;
    pts.reserve(block.members.size());
    ids.reserve(block.members.size());
    for (std::size_t i : block.members) {
      pts.push_back(embeddings[i]);
      ids.push_back(unmatched[i].id);
    }
    ClusterResult res = hdbscan(pts, params);
    auto block_labels = singletonize(res, ids, "b" + std::to_string(bi));
    labels.insert(block_labels.begin(), block_labels.end());
  }
  return merge_by_canonical_name(labels, canon);
}

}  // namespace mlink
