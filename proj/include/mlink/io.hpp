#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mlink/types.hpp"

namespace mlink {

// Line-delimited record formats. One JSON object per line, see README.
// Parse errors carry the 1-based line number; duplicate ids and cluster
// overlaps are rejected as validation errors.

std::vector<Mention> parse_mentions(std::istream& in);
GoldClustering parse_gold(std::istream& in);
Labeling parse_labeling(std::istream& in);

void serialize_mentions(const std::vector<Mention>& mentions, std::ostream& out);
void serialize_gold(const GoldClustering& gold, std::ostream& out);
void serialize_labeling(const Labeling& labeling, std::ostream& out);
// Prediction files keep the test-corpus order; `order` lists mention ids.
void serialize_labeling(const Labeling& labeling, const std::vector<std::string>& order,
                        std::ostream& out);

std::vector<Mention> load_mentions(const std::string& path);
GoldClustering load_gold(const std::string& path);
Labeling load_labeling(const std::string& path);

}  // namespace mlink
