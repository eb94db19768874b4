#pragma once

#include <string>

#include "mlink/types.hpp"

namespace mlink {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricReport {
  PRF muc;
  PRF b3;
  PRF ceafe;
  double conll_f1 = 0.0;
};

// All three scorers require gold and prediction to cover the same mention
// universe; a mismatch is a validation error. Zero denominators (all-singleton
// MUC, empty sets) yield 0-valued components.

PRF muc_score(const GoldClustering& gold, const Labeling& pred);
PRF b_cubed(const GoldClustering& gold, const Labeling& pred);
PRF ceaf_e(const GoldClustering& gold, const Labeling& pred);

double conll_f1(double muc_f1, double b3_f1, double ceafe_f1);

MetricReport score_all(const GoldClustering& gold, const Labeling& pred);

// Fixed-order, 4-decimal report: one line per metric, CONLL last.
std::string format_report(const MetricReport& report);

}  // namespace mlink
