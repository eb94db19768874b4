#pragma once

#include <vector>

namespace mlink {

// Exact O(n^3) min-cost assignment over a square cost matrix (potentials /
// shortest augmenting path). Returns the optimal total cost and fills
// row_to_col with the chosen column per row. Costs may be negative.
double solve_min_cost_assignment(const std::vector<std::vector<double>>& cost,
                                 std::vector<int>& row_to_col);

// Maximum-total-similarity one-to-one alignment of a rectangular similarity
// matrix (rows and columns may differ; unmatched lines score zero).
double max_similarity_alignment(const std::vector<std::vector<double>>& similarity);

}  // namespace mlink
