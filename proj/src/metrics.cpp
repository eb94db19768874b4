#include "mlink/metrics.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <vector>

#include "mlink/assignment_solver.hpp"

namespace mlink {

namespace {

double f1_of(double p, double r) { return (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0; }

void check_universe(const GoldClustering& gold, const Labeling& pred) {
  std::set<std::string> gold_ids = gold.mention_universe();
  if (gold_ids.size() != pred.labels.size()) {
    throw ValidationError("gold covers " + std::to_string(gold_ids.size()) +
                          " mentions but the prediction covers " +
                          std::to_string(pred.labels.size()));
  }
  for (const auto& id : gold_ids) {
    if (!pred.labels.count(id)) {
      throw ValidationError("mention '" + id + "' is in the gold clustering but not predicted");
    }
  }
}

// clusters as vectors of mention ids, in deterministic order
std::vector<std::vector<std::string>> pred_clusters(const Labeling& pred) {
  std::map<std::string, std::vector<std::string>> by_label;
  for (const auto& [id, label] : pred.labels) by_label[label].push_back(id);
  std::vector<std::vector<std::string>> out;
  out.reserve(by_label.size());
  for (auto& [label, members] : by_label) out.push_back(std::move(members));
  return out;
}

// MUC numerator contribution of one side: sum over clusters of
// (|cluster| - number of partitions induced by the other side's labels).
double muc_numerator(const std::vector<std::vector<std::string>>& clusters,
                     const std::map<std::string, std::string>& other_label) {
  double num = 0.0;
  for (const auto& members : clusters) {
    std::set<std::string> parts;
    for (const auto& id : members) parts.insert(other_label.at(id));
    num += static_cast<double>(members.size()) - static_cast<double>(parts.size());
  }
  return num;
}

double muc_denominator(const std::vector<std::vector<std::string>>& clusters) {
  double den = 0.0;
  for (const auto& members : clusters) den += static_cast<double>(members.size()) - 1.0;
  return den;
}

}  // namespace

PRF muc_score(const GoldClustering& gold, const Labeling& pred) {
  check_universe(gold, pred);

  std::vector<std::vector<std::string>> gold_cl;
  std::map<std::string, std::string> gold_label;
  for (const auto& [cid, members] : gold.clusters) {
    gold_cl.emplace_back(members.begin(), members.end());
    for (const auto& id : members) gold_label.emplace(id, cid);
  }
  std::vector<std::vector<std::string>> pred_cl = pred_clusters(pred);

  PRF out;
  double r_den = muc_denominator(gold_cl);
  double p_den = muc_denominator(pred_cl);
  out.recall = r_den > 0.0 ? muc_numerator(gold_cl, pred.labels) / r_den : 0.0;
  out.precision = p_den > 0.0 ? muc_numerator(pred_cl, gold_label) / p_den : 0.0;
  out.f1 = f1_of(out.precision, out.recall);
  return out;
}

PRF b_cubed(const GoldClustering& gold, const Labeling& pred) {
  check_universe(gold, pred);

  std::map<std::string, std::string> gold_of;
  std::map<std::string, std::size_t> gold_size;
  for (const auto& [cid, members] : gold.clusters) {
    gold_size[cid] = members.size();
    for (const auto& id : members) gold_of.emplace(id, cid);
  }
  std::map<std::string, std::size_t> pred_size;
  for (const auto& [id, label] : pred.labels) ++pred_size[label];

  // overlap counts per (pred label, gold cluster)
  std::map<std::pair<std::string, std::string>, std::size_t> overlap;
  for (const auto& [id, label] : pred.labels) {
    ++overlap[{label, gold_of.at(id)}];
  }

  double p_sum = 0.0, r_sum = 0.0;
  for (const auto& [id, label] : pred.labels) {
    const std::string& g = gold_of.at(id);
    double inter = static_cast<double>(overlap[{label, g}]);
    p_sum += inter / static_cast<double>(pred_size[label]);
    r_sum += inter / static_cast<double>(gold_size[g]);
  }
  double n = static_cast<double>(pred.labels.size());

  PRF out;
  out.precision = n > 0.0 ? p_sum / n : 0.0;
  out.recall = n > 0.0 ? r_sum / n : 0.0;
  out.f1 = f1_of(out.precision, out.recall);
  return out;
}

PRF ceaf_e(const GoldClustering& gold, const Labeling& pred) {
  check_universe(gold, pred);

  std::vector<std::set<std::string>> gold_cl;
  for (const auto& [cid, members] : gold.clusters) gold_cl.push_back(members);
  std::vector<std::vector<std::string>> pred_cl = pred_clusters(pred);

  // phi4(G, P) = 2|G ∩ P| / (|G| + |P|)
  std::vector<std::vector<double>> phi(gold_cl.size(), std::vector<double>(pred_cl.size(), 0.0));
  for (std::size_t g = 0; g < gold_cl.size(); ++g) {
    for (std::size_t p = 0; p < pred_cl.size(); ++p) {
      std::size_t inter = 0;
      for (const auto& id : pred_cl[p]) inter += gold_cl[g].count(id);
      phi[g][p] = 2.0 * static_cast<double>(inter) /
                  static_cast<double>(gold_cl[g].size() + pred_cl[p].size());
    }
  }
  double total = max_similarity_alignment(phi);

  PRF out;
  out.recall = gold_cl.empty() ? 0.0 : total / static_cast<double>(gold_cl.size());
  out.precision = pred_cl.empty() ? 0.0 : total / static_cast<double>(pred_cl.size());
  out.f1 = f1_of(out.precision, out.recall);
  return out;
}

double conll_f1(double muc_f1, double b3_f1, double ceafe_f1) {
  return (muc_f1 + b3_f1 + ceafe_f1) / 3.0;
}

MetricReport score_all(const GoldClustering& gold, const Labeling& pred) {
  MetricReport report;
  report.muc = muc_score(gold, pred);
  report.b3 = b_cubed(gold, pred);
  report.ceafe = ceaf_e(gold, pred);
  report.conll_f1 = conll_f1(report.muc.f1, report.b3.f1, report.ceafe.f1);
  return report;
}

std::string format_report(const MetricReport& report) {
  char buf[256];
  std::string out;
  auto line = [&](const char* name, const PRF& m) {
    std::snprintf(buf, sizeof(buf), "%-6s P %.4f  R %.4f  F1 %.4f\n", name, m.precision, m.recall,
                  m.f1);
    out += buf;
  };
  line("MUC", report.muc);
  line("BCUB", report.b3);
  line("CEAFE", report.ceafe);
  std::snprintf(buf, sizeof(buf), "%-6s F1 %.4f\n", "CONLL", report.conll_f1);
  out += buf;
  return out;
}

}  // namespace mlink
