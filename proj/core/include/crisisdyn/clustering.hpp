#pragma once

#include <Eigen/Core>
#include <vector>

namespace crisisdyn {

enum class Linkage { average, complete };

/// One agglomeration step. Cluster ids follow the usual convention: leaves
/// are 0..n-1 and the i-th merge creates id n+i.
struct DendrogramMerge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int size = 0;  // leaves under the merged cluster
};

struct Dendrogram {
  int n_leaves = 0;
  std::vector<DendrogramMerge> merges;  // n_leaves - 1 entries, heights nondecreasing
};

/// Agglomerative clustering on a symmetric zero-diagonal distance matrix.
/// Average linkage (UPGMA) by default; ties merge the lexicographically
/// smallest (i, j) pair, so the result is deterministic.
Dendrogram agglomerative_cluster(const Eigen::MatrixXd& distances,
                                 Linkage linkage = Linkage::average);

}  // namespace crisisdyn
