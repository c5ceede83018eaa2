#pragma once

#include "crisisdyn/empirical.hpp"

namespace crisisdyn {

/// Smallest admissible scale for the affine operator family.
inline constexpr double kMinScale = 1e-6;

/// Scale-and-shift pushforward x -> scale * x + shift on distributions
/// (density picture: (1/a) f((x - b)/a)).
struct AffineOperator {
  double scale = 1.0;
  double shift = 0.0;
};

/// Maps every sample point and re-sorts.
EmpiricalDistribution apply_operator(const AffineOperator& op, const EmpiricalDistribution& f);

struct OperatorFit {
  AffineOperator op;
  double residual = 0.0;          // W1(g, op applied to f) on the quantile grid
  bool scale_identifiable = true; // false when f is a point mass
};

/// Minimizes phi(a, b) = (1/m) sum_j |a q_f(u_j) + b - q_g(u_j)| over
/// a >= kMinScale, b unrestricted. phi is jointly convex; the scale is found
/// by golden-section search (inner b is the exact median of the residues),
/// then both coordinates are polished by exact weighted-median updates.
/// A point-mass f pins a = kMinScale and flags the fit unidentifiable.
OperatorFit fit_operator(const EmpiricalDistribution& f, const EmpiricalDistribution& g,
                         int m = kQuantileGridSize);

/// Order-2 cross-check: closed-form least-squares fit of q_g on q_f over the
/// same grid (the exact W2-optimal affine map). The reported residual is
/// still the W1 distance, so the two fits are directly comparable.
OperatorFit fit_operator_moments(const EmpiricalDistribution& f, const EmpiricalDistribution& g,
                                 int m = kQuantileGridSize);

}  // namespace crisisdyn
