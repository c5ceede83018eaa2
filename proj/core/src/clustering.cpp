#include "crisisdyn/clustering.hpp"

#include <cmath>
#include <limits>

#include "crisisdyn/errors.hpp"

namespace crisisdyn {

Dendrogram agglomerative_cluster(const Eigen::MatrixXd& distances, Linkage linkage) {
  const Eigen::Index n = distances.rows();
  if (n != distances.cols() || n < 1) throw DataError("distance matrix must be square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (distances(i, i) != 0.0) throw DataError("distance matrix must have a zero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = distances(i, j);
      if (!std::isfinite(d) || d < 0.0 || distances(j, i) != d) {
        throw DataError("distance matrix must be symmetric and nonnegative");
      }
    }
  }

  Dendrogram out;
  out.n_leaves = static_cast<int>(n);
  if (n == 1) return out;

  // Working copy; row/col i holds the distance of active cluster i.
  Eigen::MatrixXd d = distances;
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<int> id(static_cast<std::size_t>(n));
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  for (Eigen::Index i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = static_cast<int>(i);

  for (int merge = 0; merge < static_cast<int>(n) - 1; ++merge) {
    // Closest active pair; ties resolve to the smallest (i, j).
    Eigen::Index best_i = -1;
    Eigen::Index best_j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (!active[static_cast<std::size_t>(j)]) continue;
        if (d(i, j) < best) {
          best = d(i, j);
          best_i = i;
          best_j = j;
        }
      }
    }

    const int size_i = size[static_cast<std::size_t>(best_i)];
    const int size_j = size[static_cast<std::size_t>(best_j)];
    out.merges.push_back({id[static_cast<std::size_t>(best_i)],
                          id[static_cast<std::size_t>(best_j)], best, size_i + size_j});

    // Lance-Williams update into slot best_i; slot best_j retires.
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!active[static_cast<std::size_t>(k)] || k == best_i || k == best_j) continue;
      double updated = 0.0;
      switch (linkage) {
        case Linkage::average:
          updated = (size_i * d(best_i, k) + size_j * d(best_j, k)) /
                    static_cast<double>(size_i + size_j);
          break;
        case Linkage::complete:
          updated = std::max(d(best_i, k), d(best_j, k));
          break;
      }
      d(best_i, k) = updated;
      d(k, best_i) = updated;
    }
    active[static_cast<std::size_t>(best_j)] = false;
    size[static_cast<std::size_t>(best_i)] = size_i + size_j;
    id[static_cast<std::size_t>(best_i)] = static_cast<int>(n) + merge;
  }
  return out;
}

}  // namespace crisisdyn
