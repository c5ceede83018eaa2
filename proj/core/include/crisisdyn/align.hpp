#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crisisdyn/affine.hpp"
#include "crisisdyn/clustering.hpp"
#include "crisisdyn/panel.hpp"

namespace crisisdyn {

struct CrisisOperator {
  std::string crisis;
  AffineOperator op;
  double residual = 0.0;
  bool scale_identifiable = true;
};

struct AlignedLabel {
  std::string crisis;
  std::string sector;
};

struct OmittedCell {
  std::string crisis;
  std::string sector;
  std::string reason;
};

struct AlignResult {
  std::vector<CrisisOperator> operators;  // one per crisis, reference = identity
  std::vector<AlignedLabel> labels;       // rows/cols of the distance matrix
  Eigen::MatrixXd distances;              // symmetric, zero diagonal
  Dendrogram dendrogram;
  std::vector<OmittedCell> omitted;       // (crisis, sector) cells with < 2 observations
};

/// The cross-crisis normalization pipeline: per crisis, pool all equities'
/// log returns in the window and fit the scale/shift operator that maps the
/// pool onto the reference crisis's pool (the reference gets the identity);
/// per (crisis, sector), pool that sector's returns, push them through the
/// crisis operator, and compute all pairwise W1 distances among the adjusted
/// distributions; finally cluster the distance matrix.
///
/// fit_order 1 uses the W1-minimizing fit, 2 the closed-form moment fit.
AlignResult align_and_cluster(const PricePanel& panel, std::span<const CrisisWindow> crises,
                              std::string_view reference, Linkage linkage = Linkage::average,
                              int fit_order = 1, int threads = 1);

}  // namespace crisisdyn
