#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include <Eigen/Core>

#include "isaacsfd/directions.hpp"

namespace isaacsfd {

/// Pure directional weights realizing a (diffusion, drift) coefficient
/// pair over a DirectionSet. second_order is indexed by half_set
/// position (second differences are even in l), first_order by the full
/// signed direction list so every weight stays nonnegative.
struct Decomposition {
  Eigen::VectorXd second_order;  // a_k >= 0, one per half_set entry
  Eigen::VectorXd first_order;   // b~_k >= 0, one per signed direction
  double basis_floor = 0.0;      // min a_k over coordinate half-directions

  Eigen::MatrixXd reassemble_diffusion(const DirectionSet& lambda) const;
  Eigen::VectorXd reassemble_drift(const DirectionSet& lambda) const;
};

/// Weights a_k >= 0 over half_set with Sum a_k l_k l_k^T = a. Among the
/// feasible weight vectors, maximizes the minimum weight over coordinate
/// directions (one small dense LP per matrix). Throws InsufficientStencil
/// when the LP is infeasible or the optimal floor falls below delta1_min,
/// SingularInput for non-symmetric or non-finite a.
Decomposition decompose_diffusion(const Eigen::MatrixXd& a,
                                  const DirectionSet& lambda,
                                  double delta1_min);

/// Sign-split of the drift onto the signed coordinate directions:
/// b~_{+e_i} = max(b_i, 0), b~_{-e_i} = max(-b_i, 0).
Decomposition split_drift(const Eigen::VectorXd& b, const DirectionSet& lambda);

/// Memoizes decompose_diffusion results per coefficient matrix. Keys are
/// the entries rounded to 12 significant digits, so coefficients that are
/// constant in x (or across controls) are decomposed once. Safe for
/// concurrent use.
class DecompositionCache {
 public:
  DecompositionCache(DirectionSet lambda, double delta1_min);

  std::shared_ptr<const Decomposition> diffusion(const Eigen::MatrixXd& a);

  const DirectionSet& lambda() const { return lambda_; }
  double delta1_min() const { return delta1_min_; }
  size_t size() const;
  /// Minimum basis floor over all decompositions served so far (the
  /// empirical delta_1 of the runs this cache backed).
  double min_basis_floor() const;

 private:
  DirectionSet lambda_;
  double delta1_min_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const Decomposition>> map_;
  double min_floor_;
};

std::string round_key(const Eigen::MatrixXd& a);

}  // namespace isaacsfd
