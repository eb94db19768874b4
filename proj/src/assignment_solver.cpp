#include "mlink/assignment_solver.hpp"

#include <algorithm>
#include <limits>

namespace mlink {

double solve_min_cost_assignment(const std::vector<std::vector<double>>& cost,
                                 std::vector<int>& row_to_col) {
  const int n = static_cast<int>(cost.size());
  row_to_col.assign(n, -1);
  if (n == 0) return 0.0;

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // column -> row (1-based, 0 = free)
  std::vector<int> way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = match[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    if (match[j]) {
      row_to_col[match[j] - 1] = j - 1;
      total += cost[match[j] - 1][j - 1];
    }
  }
  return total;
}

double max_similarity_alignment(const std::vector<std::vector<double>>& similarity) {
  std::size_t rows = similarity.size();
  std::size_t cols = rows ? similarity.front().size() : 0;
  if (rows == 0 || cols == 0) return 0.0;

  std::size_t n = std::max(rows, cols);
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) cost[i][j] = -similarity[i][j];
  }
  std::vector<int> assignment;
  return -solve_min_cost_assignment(cost, assignment);
}

}  // namespace mlink
